#include "qsrsr/recovery.hpp"

#include <chrono>
#include <sstream>
#include <stdexcept>

namespace qsrsr {

namespace {

long long rank_of_structured_apply(const KrausSet& k, const RationalMatrix& y) {
  BlockPSD yd = BlockPSD::from_full(k.layout(), BlockPSD::Side::Domain, y);
  return apply(k, yd).rank_block_diagonal();
}

}  // namespace

Witness witness_from_shrunk(const KrausSet& k, const ShrunkCertificate& cert) {
  if (cert.c < 1) throw std::invalid_argument("witness_from_shrunk: certificate has c < 1");
  Witness w;
  w.y = projector(cert.u);
  w.rank_y = static_cast<long long>(rank(w.y));
  w.rank_ty = rank_of_structured_apply(k, w.y);
  if (w.gap() < cert.c)
    throw std::logic_error("witness_from_shrunk: projector gap below the shrink value");
  return w;
}

Witness witness_from_subrep_srsr(const PartitionedDataSet& x, const SubspaceTuple& t) {
  const long long d_total = x.dimension();
  const std::size_t n_dim = static_cast<std::size_t>(d_total) * static_cast<std::size_t>(x.n);
  std::vector<int> idx = index_set(x, t);
  Witness w;
  w.y = RationalMatrix(n_dim, n_dim);
  for (int i : idx) {
    const std::size_t off = static_cast<std::size_t>(i) * static_cast<std::size_t>(d_total);
    for (std::size_t p = 0; p < static_cast<std::size_t>(d_total); ++p) w.y.at(off + p, off + p) = 1;
  }
  w.rank_y = d_total * static_cast<long long>(idx.size());
  KrausSet k = build_kraus(to_representation(x));
  w.rank_ty = rank_of_structured_apply(k, w.y);
  return w;
}

Witness witness_from_subrep_general(const KrausSet& k, const Subrepresentation& w_sub) {
  const SigmaLayout& lay = k.layout();
  Witness w;
  w.y = RationalMatrix(lay.N, lay.N);
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    RationalMatrix p = projector(w_sub.space[lay.sources[i]]);
    for (std::size_t r = lay.col_range[i].first; r < lay.col_range[i].second; ++r)
      w.y.set_block(lay.col_blocks[r].offset, lay.col_blocks[r].offset, p);
  }
  w.rank_y = static_cast<long long>(rank(w.y));
  w.rank_ty = rank_of_structured_apply(k, w.y);
  return w;
}

SrsrRecovery recover_srsr(const PartitionedDataSet& x, const Witness& w) {
  if (w.gap() < 1) throw std::invalid_argument("recover_srsr: witness is not rank-decreasing");
  const std::size_t d_total = static_cast<std::size_t>(x.dimension());
  SrsrRecovery rec;
  // Support: point blocks I_i with a nonzero diagonal entry. For PSD Y a
  // zero diagonal entry forces the whole row and column to vanish, so this
  // reads off exactly the points Y touches.
  for (int i = 0; i < x.n; ++i) {
    const std::size_t off = static_cast<std::size_t>(i) * d_total;
    bool hit = false;
    for (std::size_t p = 0; p < d_total && !hit; ++p) hit = w.y.at(off + p, off + p) != 0;
    if (hit) rec.support.push_back(i);
  }
  for (int j = 0; j < x.m; ++j) {
    RationalMatrix spanning(static_cast<std::size_t>(x.blocks[j]), 0);
    for (int i : rec.support) spanning = hcat(spanning, x.point_block(i, j));
    rec.tuple.t.push_back(SubspaceBasis::span_of(static_cast<std::size_t>(x.blocks[j]), spanning));
  }
  rec.eval = evaluate(x, rec.tuple);
  rec.subrep = canonical_subrep(x, rec.tuple);
  if (rec.eval.pairing_value < w.gap())
    throw std::logic_error("recover_srsr: recovered pairing below the witness gap");
  return rec;
}

GeneralRecovery recover_general(const KrausSet& k, const QuiverDatum& datum, const Witness& w) {
  if (w.gap() < 1) throw std::invalid_argument("recover_general: witness is not rank-decreasing");
  const SigmaLayout& lay = k.layout();
  GeneralRecovery rec;
  rec.subrep.space.resize(datum.quiver.num_vertices());
  // W(x_i): the column space of the diagonal blocks of Y over I_i^+ (for PSD
  // blocks this equals the span of their scaled spectral vectors).
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    const std::size_t d = static_cast<std::size_t>(lay.dim_source[i]);
    RationalMatrix gathered(d, 0);
    for (std::size_t r = lay.col_range[i].first; r < lay.col_range[i].second; ++r)
      gathered = hcat(gathered, w.y.block(lay.col_blocks[r].offset, lay.col_blocks[r].offset, d, d));
    rec.subrep.space[lay.sources[i]] = SubspaceBasis::span_of(d, gathered);
  }
  for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
    const std::size_t d = static_cast<std::size_t>(lay.dim_sink[j]);
    RationalMatrix gathered(d, 0);
    for (std::size_t idx : k.arrows_into(static_cast<int>(j))) {
      const auto& ap = k.arrows()[idx];
      const SubspaceBasis& ws = rec.subrep.space[lay.sources[ap.i]];
      if (ws.dim() == 0) continue;
      gathered = hcat(gathered, ap.payload * ws.basis());
    }
    rec.subrep.space[lay.sinks[j]] = SubspaceBasis::span_of(d, gathered);
  }
  if (!is_subrepresentation(datum, rec.subrep))
    throw std::logic_error("recover_general: reconstruction is not a subrepresentation");
  rec.pairing = weight_pairing(datum.weight, rec.subrep.dims());
  if (rec.pairing < w.gap())
    throw std::logic_error("recover_general: pairing below the witness gap");
  return rec;
}

namespace {

CertificateInfo certificate_info(const AlgorithmPResult& p, const Witness* w) {
  CertificateInfo info;
  info.seed = p.certificate.b.seed;
  info.sample_bound = p.certificate.b.sample_bound;
  info.attempts = p.attempts;
  info.alpha = p.certificate.b.coefficients;
  info.wong_dims = p.certificate.wong_dims;
  info.corank_b = p.certificate.corank_b;
  info.rank_b = -1;  // filled by callers that know N
  if (w) {
    info.rank_y = w->rank_y;
    info.rank_ty = w->rank_ty;
  }
  return info;
}

}  // namespace

DiscrepancyResult discrepancy(const QuiverDatum& datum, const SolveOptions& opts) {
  KrausSet k = build_kraus(datum);
  AlgorithmPResult p = algorithm_p(k, opts.epsilon, opts.seed, opts.max_retries);
  DiscrepancyResult out;
  if (p.certificate.c == 0) {
    // An invertible combination bounds every shrunk value by 0, for any
    // Kraus set: disc = 0 exactly.
    out.value = 0;
    out.exact = true;
    out.certificate = certificate_info(p, nullptr);
    out.certificate->rank_b = static_cast<long long>(k.layout().N);
    return out;
  }
  Witness w = witness_from_shrunk(k, p.certificate);
  GeneralRecovery rec = recover_general(k, datum, w);
  if (rec.pairing != p.certificate.c)
    throw std::logic_error("discrepancy: pairing does not match the certified shrink value");
  out.value = rec.pairing;
  out.exact = k.rank_one();
  out.witness_subrep = std::move(rec.subrep);
  out.certificate = certificate_info(p, &w);
  out.certificate->rank_b =
      static_cast<long long>(k.layout().N) - p.certificate.corank_b;
  return out;
}

std::string to_string(SolveVerdict v) {
  return v == SolveVerdict::SemiStable ? "SemiStable" : "Unstable";
}

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::Scaling: return "Scaling";
    case SolveMethod::WongRandomized: return "WongRandomized";
    case SolveMethod::Oracle: return "Oracle";
  }
  return "?";
}

namespace {

ScalingTrace run_screen(const KrausSet& k, const SolveOptions& opts) {
  ScalingConfig cfg;
  cfg.max_iters = opts.screen_max_iters;
  cfg.exact_precheck = opts.exact_precheck;
  return capacity_positive(k, cfg);
}

void reconcile_screen(RecoveryReport& report) {
  if (!report.scaling) return;
  const bool screen_stable = report.scaling->verdict == CapacityVerdict::CapacityPositive;
  const bool exact_stable = report.verdict == SolveVerdict::SemiStable;
  if (screen_stable != exact_stable && !report.verdict_heuristic) {
    report.scaling_disagreed = true;
    report.notes.push_back(
        "scaling screen verdict disagreed with the exact route; the exact verdict stands");
  }
}

}  // namespace

RecoveryReport solve_srsr(const PartitionedDataSet& x, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (auto violations = x.validate(); !violations.empty())
    throw std::invalid_argument("invalid data set: " + violations.front().what);

  QuiverDatum datum = to_representation(x);
  KrausSet k = build_kraus(datum);

  RecoveryReport report;
  report.options = opts;
  if (opts.run_scaling_screen) report.scaling = run_screen(k, opts);

  AlgorithmPResult p = algorithm_p(k, opts.epsilon, opts.seed, opts.max_retries);
  if (p.certificate.c == 0) {
    report.verdict = SolveVerdict::SemiStable;
    report.method = SolveMethod::WongRandomized;
    report.discrepancy = 0;
    report.discrepancy_exact = true;
    report.certificate = certificate_info(p, nullptr);
    report.certificate->rank_b = static_cast<long long>(k.layout().N);
  } else {
    Witness w = witness_from_shrunk(k, p.certificate);
    SrsrRecovery rec = recover_srsr(x, w);
    if (rec.eval.pairing_value != p.certificate.c)
      throw std::logic_error("solve_srsr: pairing does not match the certified shrink value");
    report.verdict = SolveVerdict::Unstable;
    report.method = SolveMethod::WongRandomized;
    report.pairing_value = rec.eval.pairing_value;
    report.margin = rec.eval.margin;
    report.discrepancy = rec.eval.pairing_value;
    report.discrepancy_exact = true;
    report.solution_tuple = std::move(rec.tuple);
    report.solution_index_set = rec.eval.index_set;
    report.solution_subrep = std::move(rec.subrep);
    report.certificate = certificate_info(p, &w);
    report.certificate->rank_b =
        static_cast<long long>(k.layout().N) - p.certificate.corank_b;
  }
  reconcile_screen(report);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RecoveryReport check_datum(const QuiverDatum& input, const SolveOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  if (auto violations = validate(input); !violations.empty())
    throw std::invalid_argument("invalid quiver datum: " + violations.front().what + " (" +
                                violations.front().where + ")");

  RecoveryReport report;
  report.options = opts;

  const QuiverDatum* datum = &input;
  QuiverDatum bipartized_storage;
  bool directly_layoutable = true;
  try {
    build_layout(input);
  } catch (const std::invalid_argument&) {
    directly_layoutable = false;
  }
  if (!directly_layoutable) {
    BipartizeResult b = bipartize(input);
    report.bipartized = true;
    report.zero_weight_vertices = b.zero_weight_vertices_present;
    if (report.zero_weight_vertices)
      report.notes.push_back(
          "zero-weight vertices with nonzero dimension were dropped from the bipartite quiver; "
          "the certificate lives on the bipartized representation");
    bipartized_storage = std::move(b.datum);
    datum = &bipartized_storage;
  }

  KrausSet k = build_kraus(*datum);
  if (opts.run_scaling_screen) report.scaling = run_screen(k, opts);

  try {
    AlgorithmPResult p = algorithm_p(k, opts.epsilon, opts.seed, opts.max_retries);
    if (p.certificate.c == 0) {
      report.verdict = SolveVerdict::SemiStable;
      report.method = SolveMethod::WongRandomized;
      report.discrepancy = 0;
      report.discrepancy_exact = true;
      report.certificate = certificate_info(p, nullptr);
      report.certificate->rank_b = static_cast<long long>(k.layout().N);
    } else {
      Witness w = witness_from_shrunk(k, p.certificate);
      GeneralRecovery rec = recover_general(k, *datum, w);
      if (rec.pairing != p.certificate.c)
        throw std::logic_error("check_datum: pairing does not match the certified shrink value");
      report.verdict = SolveVerdict::Unstable;
      report.method = SolveMethod::WongRandomized;
      report.pairing_value = rec.pairing;
      report.discrepancy = rec.pairing;
      report.discrepancy_exact = k.rank_one();
      report.solution_subrep = std::move(rec.subrep);
      report.certificate = certificate_info(p, &w);
      report.certificate->rank_b =
          static_cast<long long>(k.layout().N) - p.certificate.corank_b;
    }
  } catch (const RetriesExhausted& e) {
    if (k.rank_one() || !report.scaling) throw;
    // Non-rank-one Kraus sets can defeat the randomized route structurally;
    // fall back to the scaling screen and say so.
    report.verdict = report.scaling->verdict == CapacityVerdict::CapacityPositive
                         ? SolveVerdict::SemiStable
                         : SolveVerdict::Unstable;
    report.method = SolveMethod::Scaling;
    report.verdict_heuristic = true;
    report.discrepancy_exact = false;
    report.notes.push_back(std::string("randomized route failed (") + e.what() +
                           "); verdict taken from the scaling screen");
  }
  reconcile_screen(report);
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qsrsr
