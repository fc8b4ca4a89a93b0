#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsrsr/blops.hpp"

namespace qsrsr {

struct ScalingConfig {
  std::optional<std::uint64_t> max_iters;   // default: the full budget below
  std::optional<double> ds_threshold;       // default: 1 / (4 N^3)
  bool exact_precheck = true;               // rational singularity test of T(I), T*(I)
  bool record_ds_history = true;
  // Stop once the accumulated scaling factors exceed this magnitude. A
  // divergent scaling is the signature of vanishing capacity; past roughly
  // 1e14 the double-precision operator degenerates to a reducible one and
  // its ds reading becomes meaningless, so the guard fires well before.
  double divergence_bound = 1e8;
};

enum class CapacityVerdict { CapacityPositive, CapacityZero };
enum class ScalingReason { SingularStart, ThresholdReached, BudgetExhausted };

struct ScalingTrace {
  CapacityVerdict verdict = CapacityVerdict::CapacityZero;
  ScalingReason reason = ScalingReason::SingularStart;
  std::uint64_t iterations_used = 0;
  std::vector<double> ds_history;  // ds after 0,1,2,... normalization steps
  double threshold = 0.0;
  std::uint64_t default_budget = 0;    // ceil(4N^3 (1 + 10 N^2 ln(MN)))
  std::uint64_t effective_budget = 0;  // after any override
  std::string m_magnitude;             // integerized max entry magnitude
  std::size_t n_dim = 0;               // N
  bool exact_precheck_used = false;
  bool singular_mid_run = false;     // singularity arose after step 1
  bool factor_divergence = false;    // stopped by the divergence guard
  double divergence_bound = 0.0;
};

// Default iteration budget, natural logarithm, rounded up.
std::uint64_t scaling_budget(std::size_t n_dim, const mpz_class& magnitude);

// Decides positivity of the capacity by alternating normalizations:
// right at odd steps, left at even steps, starting from the input operator.
// CapacityPositive as soon as ds <= 1/(4N^3) (a sufficient condition);
// CapacityZero when T(I) or T*(I) is singular at the start, when a marginal
// block becomes numerically singular mid-run, or when the budget runs out
// with ds still above the threshold.
ScalingTrace capacity_positive(const KrausSet& k, const ScalingConfig& cfg = {});

std::string to_string(CapacityVerdict v);
std::string to_string(ScalingReason r);

}  // namespace qsrsr
