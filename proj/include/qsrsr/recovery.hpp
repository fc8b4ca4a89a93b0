#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qsrsr/operator_scaling.hpp"
#include "qsrsr/partitioned_data.hpp"
#include "qsrsr/wong_shrunk.hpp"

namespace qsrsr {

// PSD matrix Y with rank T(Y) < rank Y; the gap lower-bounds the pairing of
// the recovered subrepresentation. Both ranks are exact.
struct Witness {
  RationalMatrix y;  // N x N
  long long rank_y = 0;
  long long rank_ty = 0;

  long long gap() const { return rank_y - rank_ty; }
};

// Y = orthogonal projector onto the shrunk subspace; gap >= c.
Witness witness_from_shrunk(const KrausSet& k, const ShrunkCertificate& cert);

// Y = 0/1 diagonal supported on the point blocks of I_T; gap >= sigma0.dim W_T.
Witness witness_from_subrep_srsr(const PartitionedDataSet& x, const SubspaceTuple& t);

// Y = block-diagonal projectors onto W(x_i), replicated over I_i^+;
// gap >= sigma . dim W.
Witness witness_from_subrep_general(const KrausSet& k, const Subrepresentation& w);

struct SrsrRecovery {
  std::vector<int> support;  // I from the nonzero diagonal entries of Y
  SubspaceTuple tuple;       // T_j = span{v_i^j : i in I}
  Subrepresentation subrep;  // the canonical W_T (index set re-enlarged)
  SrsrEvaluation eval;       // of the recovered tuple
};

// Lemma-style reconstruction for the SRSR encoding: the support of a
// rank-decreasing witness yields an SRSR solution with pairing >= gap >= 1.
SrsrRecovery recover_srsr(const PartitionedDataSet& x, const Witness& w);

struct GeneralRecovery {
  Subrepresentation subrep;
  long long pairing = 0;  // sigma . dim W >= gap
};

// General bipartite reconstruction: W(x_i) from the column spaces of Y's
// diagonal blocks, W(y_j) from the arrow images.
GeneralRecovery recover_general(const KrausSet& k, const QuiverDatum& datum, const Witness& w);

struct CertificateInfo {
  std::uint64_t seed = 0;
  std::uint64_t sample_bound = 0;
  int attempts = 0;
  std::vector<long long> alpha;
  std::vector<std::size_t> wong_dims;
  long long rank_b = 0;
  long long corank_b = 0;
  long long rank_y = 0;
  long long rank_ty = 0;
};

struct DiscrepancyResult {
  long long value = 0;
  bool exact = false;  // exact for rank-one Kraus sets; lower bound otherwise
  std::optional<Subrepresentation> witness_subrep;
  std::optional<CertificateInfo> certificate;
};

struct SolveOptions {
  Rational epsilon = Rational(1, 2);
  std::uint64_t seed = 0;
  int max_retries = 8;
  bool run_scaling_screen = true;
  // Practical cap for the screen; the published budget formula is not
  // executable at any scale (it is ~1e10 steps even for toy inputs) and the
  // screen's zero verdicts are re-established exactly by the Wong route.
  std::uint64_t screen_max_iters = 2000;
  bool exact_precheck = true;
  int oracle_max_n = 12;
};

enum class SolveVerdict { SemiStable, Unstable };
enum class SolveMethod { Scaling, WongRandomized, Oracle };

struct RecoveryReport {
  SolveVerdict verdict = SolveVerdict::SemiStable;
  SolveMethod method = SolveMethod::WongRandomized;

  // SRSR solutions (set when the input was a partitioned data set).
  std::optional<SubspaceTuple> solution_tuple;
  std::optional<std::vector<int>> solution_index_set;
  // Certifying subrepresentation (always set for Unstable; on bipartized
  // inputs this lives on the bipartite quiver).
  std::optional<Subrepresentation> solution_subrep;

  long long pairing_value = 0;
  Rational margin;  // pairing / D for SRSR inputs; 0 otherwise

  long long discrepancy = 0;
  bool discrepancy_exact = false;

  std::optional<CertificateInfo> certificate;
  std::optional<ScalingTrace> scaling;
  bool scaling_disagreed = false;  // float screen vs exact route; exact wins
  bool verdict_heuristic = false;  // only reachable for non-rank-one data
  bool bipartized = false;
  bool zero_weight_vertices = false;

  // Effective configuration, echoed for replay.
  SolveOptions options;

  std::vector<std::string> notes;
  double elapsed_seconds = 0.0;
};

// Full SRSR pipeline: encode, scaling screen, exact Wong route, recovery,
// optimality (the returned pairing equals disc(V_X, sigma0)).
RecoveryReport solve_srsr(const PartitionedDataSet& x, const SolveOptions& opts);

// General semi-stability check on a quiver datum; applies the bipartization
// when the quiver is not already bipartite with signed weights.
RecoveryReport check_datum(const QuiverDatum& datum, const SolveOptions& opts);

// disc(V, sigma) via the randomized shrunk-subspace route. Exact for
// rank-one Kraus sets; otherwise the value is a certified lower bound.
DiscrepancyResult discrepancy(const QuiverDatum& datum, const SolveOptions& opts);

std::string to_string(SolveVerdict v);
std::string to_string(SolveMethod m);

}  // namespace qsrsr
