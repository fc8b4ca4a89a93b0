#include "qsrsr/partitioned_data.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsrsr {

int PartitionedDataSet::dimension() const {
  return std::accumulate(blocks.begin(), blocks.end(), 0);
}

RationalMatrix PartitionedDataSet::point_block(int i, int j) const {
  std::size_t off = 0;
  for (int k = 0; k < j; ++k) off += static_cast<std::size_t>(blocks[k]);
  return points.block(off, static_cast<std::size_t>(i), static_cast<std::size_t>(blocks[j]), 1);
}

std::vector<Violation> PartitionedDataSet::validate() const {
  std::vector<Violation> out;
  if (n < 1) out.push_back({"point count n must be >= 1", "n"});
  if (m < 1) out.push_back({"block count m must be >= 1", "m"});
  if (static_cast<int>(blocks.size()) != m) out.push_back({"blocks length differs from m", "blocks"});
  for (int d : blocks)
    if (d < 1) out.push_back({"block sizes must be >= 1", "blocks"});
  if (out.empty() &&
      (points.rows() != static_cast<std::size_t>(dimension()) ||
       points.cols() != static_cast<std::size_t>(n))) {
    std::ostringstream os;
    os << "points matrix is " << points.rows() << "x" << points.cols() << ", expected "
       << dimension() << "x" << n;
    out.push_back({os.str(), "points"});
  }
  return out;
}

int SubspaceTuple::total_dim() const {
  int s = 0;
  for (const auto& tj : t) s += static_cast<int>(tj.dim());
  return s;
}

QuiverDatum to_representation(const PartitionedDataSet& x) {
  const int d_total = x.dimension();
  QuiverDatum datum;
  Quiver& q = datum.quiver;
  q.bipartite_split = BipartiteSplit{};
  for (int i = 0; i < x.n; ++i) {
    int v = q.add_vertex("x" + std::to_string(i + 1));
    q.bipartite_split->sources.push_back(v);
    datum.rep.dim.push_back(1);
    datum.weight.push_back(d_total);
  }
  for (int j = 0; j < x.m; ++j) {
    int v = q.add_vertex("y" + std::to_string(j + 1));
    q.bipartite_split->sinks.push_back(v);
    datum.rep.dim.push_back(x.blocks[j]);
    datum.weight.push_back(-static_cast<long long>(x.n));
  }
  for (int i = 0; i < x.n; ++i) {
    for (int j = 0; j < x.m; ++j) {
      q.add_arrow("a" + std::to_string(i + 1) + "_" + std::to_string(j + 1), i, x.n + j);
      datum.rep.arrow_matrix.push_back(x.point_block(i, j));
    }
  }
  return datum;
}

namespace {

// v in col(T), decided by rank([T | v]) == rank(T).
bool in_span(const RationalMatrix& v, const SubspaceBasis& t) {
  if (v.is_zero()) return true;
  if (t.dim() == 0) return false;
  return rank(hcat(t.basis(), v)) == t.dim();
}

}  // namespace

std::vector<int> index_set(const PartitionedDataSet& x, const SubspaceTuple& t) {
  if (static_cast<int>(t.t.size()) != x.m)
    throw std::invalid_argument("index_set: tuple size differs from block count");
  std::vector<int> out;
  for (int i = 0; i < x.n; ++i) {
    bool all_in = true;
    for (int j = 0; j < x.m && all_in; ++j) all_in = in_span(x.point_block(i, j), t.t[j]);
    if (all_in) out.push_back(i);
  }
  return out;
}

SrsrEvaluation evaluate(const PartitionedDataSet& x, const SubspaceTuple& t) {
  SrsrEvaluation ev;
  ev.index_set = index_set(x, t);
  const long long d_total = x.dimension();
  ev.pairing_value = d_total * static_cast<long long>(ev.index_set.size()) -
                     static_cast<long long>(x.n) * t.total_dim();
  ev.margin = make_rational(ev.pairing_value, d_total);
  ev.margin.canonicalize();
  return ev;
}

Subrepresentation canonical_subrep(const PartitionedDataSet& x, const SubspaceTuple& t) {
  std::vector<int> idx = index_set(x, t);
  std::vector<bool> in_idx(static_cast<std::size_t>(x.n), false);
  for (int i : idx) in_idx[static_cast<std::size_t>(i)] = true;
  Subrepresentation w;
  for (int i = 0; i < x.n; ++i)
    w.space.push_back(in_idx[static_cast<std::size_t>(i)] ? SubspaceBasis::full(1)
                                                          : SubspaceBasis::zero(1));
  for (int j = 0; j < x.m; ++j) w.space.push_back(t.t[static_cast<std::size_t>(j)]);
  return w;
}

OracleResult brute_force_discrepancy(const PartitionedDataSet& x, int max_n) {
  if (x.n > max_n) {
    std::ostringstream os;
    os << "brute_force_discrepancy: n = " << x.n << " exceeds limit " << max_n;
    throw std::invalid_argument(os.str());
  }
  OracleResult best;
  best.disc = -1;
  std::vector<int> best_subset;
  for (unsigned subset = 0; subset < (1u << x.n); ++subset) {
    std::vector<int> chosen;
    for (int i = 0; i < x.n; ++i)
      if (subset >> i & 1u) chosen.push_back(i);
    SubspaceTuple t;
    for (int j = 0; j < x.m; ++j) {
      RationalMatrix spanning(static_cast<std::size_t>(x.blocks[j]), 0);
      for (int i : chosen) spanning = hcat(spanning, x.point_block(i, j));
      t.t.push_back(SubspaceBasis::span_of(static_cast<std::size_t>(x.blocks[j]), spanning));
    }
    SrsrEvaluation ev = evaluate(x, t);
    bool better = ev.pairing_value > best.disc ||
                  (ev.pairing_value == best.disc && chosen < best_subset);
    if (better) {
      best.disc = ev.pairing_value;
      best.best_subset = chosen;
      best.best_index_set = ev.index_set;
      best.best_tuple = std::move(t);
      best_subset = std::move(chosen);
    }
  }
  return best;
}

}  // namespace qsrsr
