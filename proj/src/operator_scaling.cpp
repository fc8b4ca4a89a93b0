#include "qsrsr/operator_scaling.hpp"

#include <cmath>

namespace qsrsr {

std::uint64_t scaling_budget(std::size_t n_dim, const mpz_class& magnitude) {
  if (n_dim == 0) return 0;
  const double n = static_cast<double>(n_dim);
  const double m = std::max(1.0, mpz_get_d(magnitude.get_mpz_t()));
  const double steps = 4.0 * n * n * n * (1.0 + 10.0 * n * n * std::log(m * n));
  return static_cast<std::uint64_t>(std::ceil(steps));
}

ScalingTrace capacity_positive(const KrausSet& k, const ScalingConfig& cfg) {
  ScalingTrace trace;
  const std::size_t n_dim = k.layout().N;
  trace.n_dim = n_dim;
  const mpz_class magnitude = integerized_magnitude(k);
  trace.m_magnitude = magnitude.get_str();
  trace.default_budget = scaling_budget(n_dim, magnitude);
  trace.effective_budget = cfg.max_iters.value_or(trace.default_budget);
  const double n3 = static_cast<double>(n_dim) * n_dim * n_dim;
  trace.threshold = cfg.ds_threshold.value_or(n_dim == 0 ? 0.0 : 1.0 / (4.0 * n3));
  trace.exact_precheck_used = cfg.exact_precheck;

  if (cfg.exact_precheck) {
    MarginalSingularity sing = exact_singular_precheck(k);
    if (sing.t_singular || sing.tstar_singular) {
      trace.verdict = CapacityVerdict::CapacityZero;
      trace.reason = ScalingReason::SingularStart;
      return trace;
    }
  }

  ScaledKraus scaled(k);
  double ds = scaled.ds();
  if (cfg.record_ds_history) trace.ds_history.push_back(ds);
  if (ds <= trace.threshold) {
    trace.verdict = CapacityVerdict::CapacityPositive;
    trace.reason = ScalingReason::ThresholdReached;
    return trace;
  }
  for (std::uint64_t step = 1; step <= trace.effective_budget; ++step) {
    try {
      if (step % 2 == 1)
        scaled.normalize_right();
      else
        scaled.normalize_left();
    } catch (const SingularScaleError&) {
      // A numerically singular marginal mid-run is the float-side signature
      // of a vanishing capacity; the exact route re-checks downstream.
      trace.verdict = CapacityVerdict::CapacityZero;
      trace.reason = ScalingReason::SingularStart;
      trace.iterations_used = step;
      trace.singular_mid_run = step > 1;
      return trace;
    }
    ds = scaled.ds();
    trace.iterations_used = step;
    if (cfg.record_ds_history) trace.ds_history.push_back(ds);
    if (ds <= trace.threshold) {
      trace.verdict = CapacityVerdict::CapacityPositive;
      trace.reason = ScalingReason::ThresholdReached;
      return trace;
    }
    if (scaled.max_factor_magnitude() > cfg.divergence_bound) {
      trace.verdict = CapacityVerdict::CapacityZero;
      trace.reason = ScalingReason::BudgetExhausted;
      trace.factor_divergence = true;
      return trace;
    }
  }
  trace.verdict = CapacityVerdict::CapacityZero;
  trace.reason = ScalingReason::BudgetExhausted;
  return trace;
}

std::string to_string(CapacityVerdict v) {
  return v == CapacityVerdict::CapacityPositive ? "CapacityPositive" : "CapacityZero";
}

std::string to_string(ScalingReason r) {
  switch (r) {
    case ScalingReason::SingularStart: return "SingularStart";
    case ScalingReason::ThresholdReached: return "ThresholdReached";
    case ScalingReason::BudgetExhausted: return "BudgetExhausted";
  }
  return "?";
}

}  // namespace qsrsr
