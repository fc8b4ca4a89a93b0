#include "qsrsr/quiver.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace qsrsr {

int Quiver::add_vertex(const std::string& id) {
  auto [it, inserted] = index_of_.emplace(id, static_cast<int>(vertex_ids.size()));
  if (inserted) vertex_ids.push_back(id);
  return it->second;
}

void Quiver::add_arrow(const std::string& id, int tail, int head) {
  arrows.push_back(Arrow{id, tail, head});
}

int Quiver::vertex_index(const std::string& id) const {
  auto it = index_of_.find(id);
  return it == index_of_.end() ? -1 : it->second;
}

std::optional<std::vector<int>> Quiver::topological_order() const {
  const std::size_t n = num_vertices();
  std::vector<int> indeg(n, 0);
  for (const Arrow& a : arrows) ++indeg[a.head];
  std::vector<int> order;
  order.reserve(n);
  std::vector<int> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.push_back(static_cast<int>(v));
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    order.push_back(v);
    for (const Arrow& a : arrows) {
      if (a.tail != v) continue;
      if (--indeg[a.head] == 0) ready.push_back(a.head);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

DimVector Subrepresentation::dims() const {
  DimVector d(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) d[i] = static_cast<int>(space[i].dim());
  return d;
}

long long weight_pairing(const Weight& sigma, const DimVector& d) {
  if (sigma.size() != d.size())
    throw std::invalid_argument("weight_pairing: mismatched vertex sets");
  long long s = 0;
  for (std::size_t i = 0; i < d.size(); ++i) s += sigma[i] * static_cast<long long>(d[i]);
  return s;
}

std::vector<Violation> validate(const QuiverDatum& datum) {
  std::vector<Violation> out;
  const Quiver& q = datum.quiver;
  const std::size_t n = q.num_vertices();
  if (datum.rep.dim.size() != n) {
    out.push_back({"dimension vector size differs from vertex count", "dim"});
    return out;
  }
  if (datum.weight.size() != n) {
    out.push_back({"weight size differs from vertex count", "weight"});
    return out;
  }
  if (datum.rep.arrow_matrix.size() != q.arrows.size()) {
    out.push_back({"arrow matrix count differs from arrow count", "rep"});
    return out;
  }
  if (!q.topological_order()) out.push_back({"quiver has an oriented cycle", "quiver"});
  for (int d : datum.rep.dim)
    if (d < 0) out.push_back({"negative dimension", "dim"});
  for (std::size_t k = 0; k < q.arrows.size(); ++k) {
    const Arrow& a = q.arrows[k];
    const RationalMatrix& m = datum.rep.arrow_matrix[k];
    if (m.rows() != static_cast<std::size_t>(datum.rep.dim[a.head]) ||
        m.cols() != static_cast<std::size_t>(datum.rep.dim[a.tail])) {
      std::ostringstream os;
      os << "matrix shape " << m.rows() << "x" << m.cols() << " does not match d(head)="
         << datum.rep.dim[a.head] << ", d(tail)=" << datum.rep.dim[a.tail];
      out.push_back({os.str(), "arrow " + a.id});
    }
  }
  if (out.empty()) {
    long long p = weight_pairing(datum.weight, datum.rep.dim);
    if (p != 0) {
      std::ostringstream os;
      os << "sigma . dim V = " << p << " != 0";
      out.push_back({os.str(), "weight"});
    }
  }
  return out;
}

bool is_subrepresentation(const QuiverDatum& datum, const Subrepresentation& w) {
  const Quiver& q = datum.quiver;
  if (w.space.size() != q.num_vertices()) return false;
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (w.space[v].ambient() != static_cast<std::size_t>(datum.rep.dim[v])) return false;
  }
  for (std::size_t k = 0; k < q.arrows.size(); ++k) {
    const Arrow& a = q.arrows[k];
    const SubspaceBasis& wt = w.space[a.tail];
    const SubspaceBasis& wh = w.space[a.head];
    if (wt.dim() == 0) continue;
    SubspaceBasis img = image(datum.rep.arrow_matrix[k] * wt.basis());
    if (!is_contained(img, wh)) return false;
  }
  return true;
}

BipartizeResult bipartize(const QuiverDatum& datum, std::size_t path_cap) {
  const Quiver& q = datum.quiver;
  auto topo = q.topological_order();
  if (!topo) throw std::invalid_argument("bipartize: quiver has an oriented cycle");

  BipartizeResult out;
  bool already_bipartite = true;
  for (const Arrow& a : q.arrows) {
    if (!(datum.weight[a.tail] > 0 && datum.weight[a.head] < 0)) {
      already_bipartite = false;
      break;
    }
  }
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (datum.weight[v] == 0 && datum.rep.dim[v] > 0) out.zero_weight_vertices_present = true;
  }

  Quiver bq;
  bq.bipartite_split = BipartiteSplit{};
  std::vector<int> new_index(q.num_vertices(), -1);
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (datum.weight[v] > 0) {
      new_index[v] = bq.add_vertex(q.vertex_ids[v]);
      bq.bipartite_split->sources.push_back(new_index[v]);
      out.vertex_origin.push_back(static_cast<int>(v));
    }
  }
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (datum.weight[v] < 0) {
      new_index[v] = bq.add_vertex(q.vertex_ids[v]);
      bq.bipartite_split->sinks.push_back(new_index[v]);
      out.vertex_origin.push_back(static_cast<int>(v));
    }
  }

  Representation brep;
  brep.dim.resize(bq.num_vertices());
  Weight bweight(bq.num_vertices());
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (new_index[v] >= 0) {
      brep.dim[new_index[v]] = datum.rep.dim[v];
      bweight[new_index[v]] = datum.weight[v];
    }
  }

  // Arrows out of each vertex, in declaration order.
  std::vector<std::vector<std::size_t>> out_arrows(q.num_vertices());
  for (std::size_t k = 0; k < q.arrows.size(); ++k) out_arrows[q.arrows[k].tail].push_back(k);

  std::size_t path_count = 0;
  // One arrow per oriented path from a positive to a negative vertex; the
  // path matrix is the composition of the arrow matrices along the path.
  // Paths may pass through vertices of any weight, including other
  // endpoints; only the start (positive) and end (negative) are constrained.
  std::function<void(int, int, const RationalMatrix&)> walk =
      [&](int start, int at, const RationalMatrix& product) {
        if (datum.weight[at] < 0) {
          if (++path_count > path_cap) {
            std::ostringstream os;
            os << "bipartize: path count exceeds cap " << path_cap;
            throw PathExplosionError(os.str());
          }
          std::ostringstream id;
          id << "p" << path_count << ":" << q.vertex_ids[start] << "->" << q.vertex_ids[at];
          bq.add_arrow(id.str(), new_index[start], new_index[at]);
          brep.arrow_matrix.push_back(product);
        }
        for (std::size_t k : out_arrows[at]) {
          const Arrow& a = q.arrows[k];
          walk(start, a.head, datum.rep.arrow_matrix[k] * product);
        }
      };
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    if (datum.weight[v] <= 0) continue;
    RationalMatrix ident = RationalMatrix::identity(static_cast<std::size_t>(datum.rep.dim[v]));
    walk(static_cast<int>(v), static_cast<int>(v), ident);
  }

  out.datum = QuiverDatum{std::move(bq), std::move(brep), std::move(bweight)};
  out.was_already_bipartite = already_bipartite;
  out.path_count = path_count;
  return out;
}

}  // namespace qsrsr
