#include "qsrsr/blops.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsrsr {

SigmaLayout build_layout(const QuiverDatum& datum) {
  const Quiver& q = datum.quiver;
  SigmaLayout lay;
  std::vector<int> slot_of(q.num_vertices(), -1);
  std::vector<bool> is_source(q.num_vertices(), false);
  for (std::size_t v = 0; v < q.num_vertices(); ++v) {
    long long s = datum.weight[v];
    if (s == 0) {
      throw std::invalid_argument("layout: zero weight on vertex " + q.vertex_ids[v]);
    }
    if (s > 0) {
      slot_of[v] = static_cast<int>(lay.sources.size());
      is_source[v] = true;
      lay.sources.push_back(static_cast<int>(v));
      lay.sigma_pos.push_back(s);
      lay.dim_source.push_back(datum.rep.dim[v]);
    } else {
      slot_of[v] = static_cast<int>(lay.sinks.size());
      lay.sinks.push_back(static_cast<int>(v));
      lay.sigma_neg.push_back(-s);
      lay.dim_sink.push_back(datum.rep.dim[v]);
    }
  }
  for (const Arrow& a : q.arrows) {
    if (!is_source[a.tail] || is_source[a.head])
      throw std::invalid_argument("layout: arrow " + a.id +
                                  " does not go from a positive to a negative vertex");
  }

  long long n_from_sources = 0;
  for (std::size_t i = 0; i < lay.sources.size(); ++i)
    n_from_sources += lay.sigma_pos[i] * lay.dim_source[i];
  long long n_from_sinks = 0;
  for (std::size_t j = 0; j < lay.sinks.size(); ++j)
    n_from_sinks += lay.sigma_neg[j] * lay.dim_sink[j];
  if (n_from_sources != n_from_sinks)
    throw std::invalid_argument("layout: sigma . dim V != 0");
  lay.N = static_cast<std::size_t>(n_from_sources);

  std::size_t off = 0;
  for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
    std::size_t begin = lay.row_blocks.size();
    for (long long c = 0; c < lay.sigma_neg[j]; ++c) {
      lay.row_blocks.push_back({static_cast<int>(j), off, lay.dim_sink[j]});
      off += static_cast<std::size_t>(lay.dim_sink[j]);
    }
    lay.row_range.emplace_back(begin, lay.row_blocks.size());
  }
  lay.M = lay.row_blocks.size();

  off = 0;
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    std::size_t begin = lay.col_blocks.size();
    for (long long c = 0; c < lay.sigma_pos[i]; ++c) {
      lay.col_blocks.push_back({static_cast<int>(i), off, lay.dim_source[i]});
      off += static_cast<std::size_t>(lay.dim_source[i]);
    }
    lay.col_range.emplace_back(begin, lay.col_blocks.size());
  }
  lay.Mp = lay.col_blocks.size();
  return lay;
}

KrausSet::KrausSet(const QuiverDatum& datum, SigmaLayout layout) : layout_(std::move(layout)) {
  std::vector<int> source_slot(datum.quiver.num_vertices(), -1);
  std::vector<int> sink_slot(datum.quiver.num_vertices(), -1);
  for (std::size_t i = 0; i < layout_.sources.size(); ++i)
    source_slot[layout_.sources[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < layout_.sinks.size(); ++j)
    sink_slot[layout_.sinks[j]] = static_cast<int>(j);

  by_sink_.resize(layout_.sinks.size());
  by_source_.resize(layout_.sources.size());

  // Payloads are grouped in tuple-enumeration order: source slot, then sink
  // slot, then arrow declaration order.
  for (std::size_t i = 0; i < layout_.sources.size(); ++i) {
    for (std::size_t j = 0; j < layout_.sinks.size(); ++j) {
      for (std::size_t k = 0; k < datum.quiver.arrows.size(); ++k) {
        const Arrow& a = datum.quiver.arrows[k];
        if (source_slot[a.tail] != static_cast<int>(i) ||
            sink_slot[a.head] != static_cast<int>(j))
          continue;
        by_sink_[j].push_back(arrows_.size());
        by_source_[i].push_back(arrows_.size());
        tuple_start_.push_back(total_);
        total_ += static_cast<std::size_t>(layout_.sigma_neg[j]) *
                  static_cast<std::size_t>(layout_.sigma_pos[i]);
        if (datum.rep.arrow_matrix[k].cols() > 1) rank_one_ = false;
        arrows_.push_back({k, static_cast<int>(i), static_cast<int>(j),
                           datum.rep.arrow_matrix[k]});
      }
    }
  }
}

KrausTuple KrausSet::tuple_at(std::size_t k) const {
  assert(k < total_);
  // Find the payload whose tuple range contains k.
  std::size_t lo = 0, hi = arrows_.size();
  while (lo + 1 < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (tuple_start_[mid] <= k)
      lo = mid;
    else
      hi = mid;
  }
  const ArrowPayload& ap = arrows_[lo];
  std::size_t rel = k - tuple_start_[lo];
  std::size_t width = static_cast<std::size_t>(layout_.sigma_pos[ap.i]);
  std::size_t q = layout_.row_range[ap.j].first + rel / width;
  std::size_t r = layout_.col_range[ap.i].first + rel % width;
  return {ap.i, ap.j, ap.arrow, q, r};
}

RationalMatrix KrausSet::materialize(std::size_t k) const {
  KrausTuple t = tuple_at(k);
  RationalMatrix full(layout_.N, layout_.N);
  const RationalMatrix& payload = [&]() -> const RationalMatrix& {
    for (const ArrowPayload& ap : arrows_)
      if (ap.arrow == t.a && ap.i == t.i && ap.j == t.j) return ap.payload;
    throw std::logic_error("materialize: tuple without payload");
  }();
  full.set_block(layout_.row_blocks[t.q].offset, layout_.col_blocks[t.r].offset, payload);
  return full;
}

KrausSet build_kraus(const QuiverDatum& datum) { return KrausSet(datum, build_layout(datum)); }

BlockPSD BlockPSD::identity(const SigmaLayout& layout, Side side) {
  BlockPSD y;
  y.side = side;
  if (side == Side::Domain) {
    for (const auto& cb : layout.col_blocks)
      y.blocks.push_back(RationalMatrix::identity(static_cast<std::size_t>(cb.width)));
  } else {
    for (const auto& rb : layout.row_blocks)
      y.blocks.push_back(RationalMatrix::identity(static_cast<std::size_t>(rb.height)));
  }
  return y;
}

BlockPSD BlockPSD::zero(const SigmaLayout& layout, Side side) {
  BlockPSD y = identity(layout, side);
  for (auto& b : y.blocks) b = RationalMatrix(b.rows(), b.cols());
  return y;
}

BlockPSD BlockPSD::from_full(const SigmaLayout& layout, Side side, const RationalMatrix& full) {
  assert(full.rows() == layout.N && full.cols() == layout.N);
  BlockPSD y;
  y.side = side;
  if (side == Side::Domain) {
    for (const auto& cb : layout.col_blocks)
      y.blocks.push_back(full.block(cb.offset, cb.offset, static_cast<std::size_t>(cb.width),
                                    static_cast<std::size_t>(cb.width)));
  } else {
    for (const auto& rb : layout.row_blocks)
      y.blocks.push_back(full.block(rb.offset, rb.offset, static_cast<std::size_t>(rb.height),
                                    static_cast<std::size_t>(rb.height)));
  }
  return y;
}

RationalMatrix BlockPSD::to_full(const SigmaLayout& layout) const {
  RationalMatrix full(layout.N, layout.N);
  if (side == Side::Domain) {
    for (std::size_t r = 0; r < layout.col_blocks.size(); ++r)
      full.set_block(layout.col_blocks[r].offset, layout.col_blocks[r].offset, blocks[r]);
  } else {
    for (std::size_t q = 0; q < layout.row_blocks.size(); ++q)
      full.set_block(layout.row_blocks[q].offset, layout.row_blocks[q].offset, blocks[q]);
  }
  return full;
}

Rational BlockPSD::trace() const {
  Rational t = 0;
  for (const auto& b : blocks) t += b.trace();
  return t;
}

long long BlockPSD::rank_block_diagonal() const {
  long long r = 0;
  for (const auto& b : blocks) r += static_cast<long long>(rank(b));
  return r;
}

BlockPSD apply(const KrausSet& k, const BlockPSD& y) {
  const SigmaLayout& lay = k.layout();
  if (y.side != BlockPSD::Side::Domain || y.blocks.size() != lay.Mp)
    throw std::invalid_argument("apply: expected a domain-side block view");
  // Per-source aggregate S_i = sum_{r in I_i^+} Y_r.
  std::vector<RationalMatrix> agg;
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    RationalMatrix s(static_cast<std::size_t>(lay.dim_source[i]),
                     static_cast<std::size_t>(lay.dim_source[i]));
    for (std::size_t r = lay.col_range[i].first; r < lay.col_range[i].second; ++r)
      s = s + y.blocks[r];
    agg.push_back(std::move(s));
  }
  BlockPSD out;
  out.side = BlockPSD::Side::Codomain;
  out.blocks.resize(lay.M);
  for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
    RationalMatrix c(static_cast<std::size_t>(lay.dim_sink[j]),
                     static_cast<std::size_t>(lay.dim_sink[j]));
    for (std::size_t idx : k.arrows_into(static_cast<int>(j))) {
      const auto& ap = k.arrows()[idx];
      c = c + ap.payload * agg[ap.i] * ap.payload.transposed();
    }
    for (std::size_t q = lay.row_range[j].first; q < lay.row_range[j].second; ++q)
      out.blocks[q] = c;
  }
  return out;
}

BlockPSD apply_dual(const KrausSet& k, const BlockPSD& x) {
  const SigmaLayout& lay = k.layout();
  if (x.side != BlockPSD::Side::Codomain || x.blocks.size() != lay.M)
    throw std::invalid_argument("apply_dual: expected a codomain-side block view");
  std::vector<RationalMatrix> agg;
  for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
    RationalMatrix s(static_cast<std::size_t>(lay.dim_sink[j]),
                     static_cast<std::size_t>(lay.dim_sink[j]));
    for (std::size_t q = lay.row_range[j].first; q < lay.row_range[j].second; ++q)
      s = s + x.blocks[q];
    agg.push_back(std::move(s));
  }
  BlockPSD out;
  out.side = BlockPSD::Side::Domain;
  out.blocks.resize(lay.Mp);
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    RationalMatrix g(static_cast<std::size_t>(lay.dim_source[i]),
                     static_cast<std::size_t>(lay.dim_source[i]));
    for (std::size_t idx : k.arrows_from(static_cast<int>(i))) {
      const auto& ap = k.arrows()[idx];
      g = g + ap.payload.transposed() * agg[ap.j] * ap.payload;
    }
    for (std::size_t r = lay.col_range[i].first; r < lay.col_range[i].second; ++r)
      out.blocks[r] = g;
  }
  return out;
}

MarginalSingularity exact_singular_precheck(const KrausSet& k) {
  const SigmaLayout& lay = k.layout();
  MarginalSingularity out;
  // col(T(I) block j) = sum of payload column spaces into j.
  for (std::size_t j = 0; j < lay.sinks.size() && !out.t_singular; ++j) {
    RationalMatrix stacked(static_cast<std::size_t>(lay.dim_sink[j]), 0);
    for (std::size_t idx : k.arrows_into(static_cast<int>(j)))
      stacked = hcat(stacked, k.arrows()[idx].payload);
    if (rank(stacked) < static_cast<std::size_t>(lay.dim_sink[j])) out.t_singular = true;
  }
  for (std::size_t i = 0; i < lay.sources.size() && !out.tstar_singular; ++i) {
    RationalMatrix stacked(0, static_cast<std::size_t>(lay.dim_source[i]));
    for (std::size_t idx : k.arrows_from(static_cast<int>(i)))
      stacked = vcat(stacked, k.arrows()[idx].payload);
    if (rank(stacked) < static_cast<std::size_t>(lay.dim_source[i])) out.tstar_singular = true;
  }
  return out;
}

double ds_from_marginals(const ScaledMarginals& m, const std::vector<long long>& sigma_pos,
                         const std::vector<long long>& sigma_neg) {
  double total = 0.0;
  for (std::size_t j = 0; j < m.c.size(); ++j) {
    Eigen::MatrixXd d = m.c[j] - Eigen::MatrixXd::Identity(m.c[j].rows(), m.c[j].cols());
    total += static_cast<double>(sigma_neg[j]) * (d * d).trace();
  }
  for (std::size_t i = 0; i < m.g.size(); ++i) {
    Eigen::MatrixXd d = m.g[i] - Eigen::MatrixXd::Identity(m.g[i].rows(), m.g[i].cols());
    total += static_cast<double>(sigma_pos[i]) * (d * d).trace();
  }
  return total;
}

ScaledKraus::ScaledKraus(const KrausSet& k) : layout_(&k.layout()) {
  double max_abs = 0.0;
  for (const auto& ap : k.arrows()) {
    payload_source_.push_back(ap.i);
    payload_sink_.push_back(ap.j);
    Eigen::MatrixXd m(ap.payload.rows(), ap.payload.cols());
    for (std::size_t a = 0; a < ap.payload.rows(); ++a)
      for (std::size_t b = 0; b < ap.payload.cols(); ++b) {
        m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            to_double(ap.payload.at(a, b));
        max_abs = std::max(max_abs, std::abs(m(static_cast<Eigen::Index>(a),
                                               static_cast<Eigen::Index>(b))));
      }
    payloads_.push_back(std::move(m));
  }
  if (max_abs > 0.0) {
    const double scale = std::exp2(-std::floor(std::log2(max_abs)));
    for (auto& m : payloads_) m *= scale;
  }
  for (int d : layout_->dim_source) right_acc_.push_back(Eigen::MatrixXd::Identity(d, d));
  for (int d : layout_->dim_sink) left_acc_.push_back(Eigen::MatrixXd::Identity(d, d));
}

ScaledMarginals ScaledKraus::marginals() const {
  ScaledMarginals m;
  for (std::size_t j = 0; j < layout_->sinks.size(); ++j)
    m.c.push_back(Eigen::MatrixXd::Zero(layout_->dim_sink[j], layout_->dim_sink[j]));
  for (std::size_t i = 0; i < layout_->sources.size(); ++i)
    m.g.push_back(Eigen::MatrixXd::Zero(layout_->dim_source[i], layout_->dim_source[i]));
  for (std::size_t p = 0; p < payloads_.size(); ++p) {
    const Eigen::MatrixXd& v = payloads_[p];
    const int i = payload_source_[p];
    const int j = payload_sink_[p];
    m.c[j] += static_cast<double>(layout_->sigma_pos[i]) * (v * v.transpose());
    m.g[i] += static_cast<double>(layout_->sigma_neg[j]) * (v.transpose() * v);
  }
  return m;
}

double ScaledKraus::ds() const {
  return ds_from_marginals(marginals(), layout_->sigma_pos, layout_->sigma_neg);
}

double ScaledKraus::max_factor_magnitude() const {
  double mx = 0.0;
  for (const auto& f : right_acc_)
    if (f.size() > 0) mx = std::max(mx, f.cwiseAbs().maxCoeff());
  for (const auto& f : left_acc_)
    if (f.size() > 0) mx = std::max(mx, f.cwiseAbs().maxCoeff());
  return mx;
}

namespace {

// Inverse square root of a symmetric PSD block; throws when the block is
// numerically singular relative to its largest eigenvalue.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& s, const char* side, std::size_t slot) {
  if (s.rows() == 0) return s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double lambda_max = ev.maxCoeff();
  if (lambda_max <= 0.0 || ev.minCoeff() < ScaledKraus::kSingularRel * lambda_max) {
    std::ostringstream os;
    os << "singular " << side << " marginal block at slot " << slot;
    throw SingularScaleError(os.str());
  }
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index t = 0; t < ev.size(); ++t)
    inv(t) = 1.0 / std::sqrt(std::max(ev(t), ScaledKraus::kClampRel * lambda_max));
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

void ScaledKraus::normalize_right() {
  ScaledMarginals m = marginals();
  std::vector<Eigen::MatrixXd> factor;
  for (std::size_t i = 0; i < m.g.size(); ++i)
    factor.push_back(inverse_sqrt(m.g[i], "domain", i));
  for (std::size_t p = 0; p < payloads_.size(); ++p)
    payloads_[p] = payloads_[p] * factor[payload_source_[p]];
  for (std::size_t i = 0; i < right_acc_.size(); ++i) right_acc_[i] = right_acc_[i] * factor[i];
}

void ScaledKraus::normalize_left() {
  ScaledMarginals m = marginals();
  std::vector<Eigen::MatrixXd> factor;
  for (std::size_t j = 0; j < m.c.size(); ++j)
    factor.push_back(inverse_sqrt(m.c[j], "codomain", j));
  for (std::size_t p = 0; p < payloads_.size(); ++p)
    payloads_[p] = factor[payload_sink_[p]] * payloads_[p];
  for (std::size_t j = 0; j < left_acc_.size(); ++j) left_acc_[j] = factor[j] * left_acc_[j];
}

mpz_class integerized_magnitude(const KrausSet& k) {
  mpz_class lcm_den = 1;
  for (const auto& ap : k.arrows())
    for (std::size_t a = 0; a < ap.payload.rows(); ++a)
      for (std::size_t b = 0; b < ap.payload.cols(); ++b) {
        mpz_class den = ap.payload.at(a, b).get_den();
        mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
      }
  mpz_class max_mag = 0;
  for (const auto& ap : k.arrows())
    for (std::size_t a = 0; a < ap.payload.rows(); ++a)
      for (std::size_t b = 0; b < ap.payload.cols(); ++b) {
        mpq_class scaled = ap.payload.at(a, b) * Rational(lcm_den);
        mpz_class mag = abs(scaled.get_num());
        if (mag > max_mag) max_mag = mag;
      }
  if (max_mag < 1) max_mag = 1;
  return max_mag;
}

}  // namespace qsrsr
