#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "qsrsr/quiver.hpp"

namespace qsrsr {

// Index layout for the blow-up family of a bipartite quiver datum.
//
// Sources x_i carry sigma_pos(i) = sigma(x_i) > 0, sinks y_j carry
// sigma_neg(j) = -sigma(y_j) > 0. Matrices are N x N with
//   N = sum_i sigma_pos(i) d(x_i) = sum_j sigma_neg(j) d(y_j),
// viewed as M x M' block matrices: M = sum_j sigma_neg(j) row blocks (q-th
// has height d(y_j) for q in the contiguous range I_j^-) and
// M' = sum_i sigma_pos(i) column blocks (r-th has width d(x_i) for r in
// I_i^+).
struct SigmaLayout {
  struct RowBlock {
    int sink;           // slot into `sinks`
    std::size_t offset;  // first row
    int height;
  };
  struct ColBlock {
    int source;
    std::size_t offset;
    int width;
  };

  std::vector<int> sources;  // vertex indices, declaration order
  std::vector<int> sinks;
  std::vector<long long> sigma_pos;  // per source slot
  std::vector<long long> sigma_neg;  // per sink slot (positive magnitude)
  std::vector<int> dim_source;
  std::vector<int> dim_sink;

  std::size_t N = 0;
  std::size_t M = 0;   // row block count
  std::size_t Mp = 0;  // column block count

  std::vector<RowBlock> row_blocks;                        // q in [M]
  std::vector<ColBlock> col_blocks;                        // r in [M']
  std::vector<std::pair<std::size_t, std::size_t>> row_range;  // I_j^- as [begin, end)
  std::vector<std::pair<std::size_t, std::size_t>> col_range;  // I_i^+
};

// Requires sigma > 0 on every source, sigma < 0 on every sink, no other
// vertices, and sigma . dim = 0.
SigmaLayout build_layout(const QuiverDatum& datum);

struct KrausTuple {
  int i;          // source slot
  int j;          // sink slot
  std::size_t a;  // arrow index in the datum's quiver
  std::size_t q;  // row block
  std::size_t r;  // column block
};

// The Kraus family {V^{i,j,a}_{q,r}} held implicitly: one payload matrix per
// arrow plus the index ranges. Tuples are enumerated in fixed order
// (i, j, a, q, r), which also fixes the meaning of coefficient vectors.
class KrausSet {
 public:
  KrausSet(const QuiverDatum& datum, SigmaLayout layout);

  const SigmaLayout& layout() const { return layout_; }
  std::size_t size() const { return total_; }  // L = |S_sigma|
  bool rank_one() const { return rank_one_; }

  struct ArrowPayload {
    std::size_t arrow;  // index into the datum's arrows
    int i;              // tail source slot
    int j;              // head sink slot
    RationalMatrix payload;
  };
  const std::vector<ArrowPayload>& arrows() const { return arrows_; }
  const std::vector<std::size_t>& arrows_into(int j) const { return by_sink_[j]; }
  const std::vector<std::size_t>& arrows_from(int i) const { return by_source_[i]; }

  KrausTuple tuple_at(std::size_t k) const;
  // Full N x N blow-up matrix for tuple k (test and debug use only).
  RationalMatrix materialize(std::size_t k) const;

 private:
  SigmaLayout layout_;
  std::vector<ArrowPayload> arrows_;
  std::vector<std::vector<std::size_t>> by_sink_;
  std::vector<std::vector<std::size_t>> by_source_;
  std::vector<std::size_t> tuple_start_;  // per arrow payload, cumulative
  std::size_t total_ = 0;
  bool rank_one_ = true;
};

KrausSet build_kraus(const QuiverDatum& datum);

// Block-diagonal view of an N x N PSD matrix: one diagonal block per column
// block (domain side) or per row block (codomain side). The operators T and
// T* consume only these blocks and produce genuinely block-diagonal output,
// so this is lossless where it is used.
struct BlockPSD {
  enum class Side { Domain, Codomain };

  Side side = Side::Domain;
  std::vector<RationalMatrix> blocks;

  static BlockPSD identity(const SigmaLayout& layout, Side side);
  static BlockPSD zero(const SigmaLayout& layout, Side side);
  // Extracts the diagonal blocks of a full N x N matrix.
  static BlockPSD from_full(const SigmaLayout& layout, Side side, const RationalMatrix& full);

  RationalMatrix to_full(const SigmaLayout& layout) const;
  Rational trace() const;
  // Valid when the underlying matrix is block diagonal (always true for
  // outputs of apply/apply_dual).
  long long rank_block_diagonal() const;
};

// T(Y) = sum_k A_k Y A_k^T. The (q,q) block for q in I_j^- is
//   sum_i sum_{a : x_i -> y_j} V(a) (sum_{r in I_i^+} Y_r) V(a)^T,
// so the computation never materializes the L blow-ups.
BlockPSD apply(const KrausSet& k, const BlockPSD& y);

// T*(X) = sum_k A_k^T X A_k, with the mirror-image block formula.
BlockPSD apply_dual(const KrausSet& k, const BlockPSD& x);

// Exact rational singularity test of T(I) and T*(I), via ranks of stacked
// payloads (col T(I)|_j = sum of payload column spaces).
struct MarginalSingularity {
  bool t_singular = false;
  bool tstar_singular = false;
};
MarginalSingularity exact_singular_precheck(const KrausSet& k);

// ---------------------------------------------------------------------------
// Floating-point scaling state.
//
// The alternating normalizations operate on per-arrow payload copies in
// doubles; the exact Kraus data above stays immutable. Right normalization
// multiplies payloads by G_i^{-1/2} (G_i the per-source block of T*(I)),
// left normalization by C_j^{-1/2} on the other side, which is exactly the
// action of the block-diagonal congruence factors on the blow-up family.
// ---------------------------------------------------------------------------

struct ScaledMarginals {
  std::vector<Eigen::MatrixXd> c;  // per sink: block of T(I)
  std::vector<Eigen::MatrixXd> g;  // per source: block of T*(I)
};

// tr((T(I)-I)^2) + tr((T*(I)-I)^2) for block-repeated marginals.
double ds_from_marginals(const ScaledMarginals& m, const std::vector<long long>& sigma_pos,
                         const std::vector<long long>& sigma_neg);

class SingularScaleError : public std::runtime_error {
 public:
  explicit SingularScaleError(const std::string& what) : std::runtime_error(what) {}
};

class ScaledKraus {
 public:
  // Relative eigenvalue below which a marginal block is declared singular.
  static constexpr double kSingularRel = 1e-10;
  // Clamp applied before inversion (never binds once the gate above passed).
  static constexpr double kClampRel = 1e-14;

  explicit ScaledKraus(const KrausSet& k);

  const SigmaLayout& layout() const { return *layout_; }
  ScaledMarginals marginals() const;
  double ds() const;

  // Largest entry magnitude across the accumulated scaling factors. For
  // vanishing capacity the factors diverge while the coupling payload
  // entries decay toward rounding noise; callers use this to stop before
  // the float operator degenerates to a reducible one.
  double max_factor_magnitude() const;

  // Scales payloads so that T*(I) = I (right) or T(I) = I (left); throws
  // SingularScaleError when a marginal block is numerically singular, which
  // signals capacity zero upstream.
  void normalize_right();
  void normalize_left();

  // Global exact power-of-two rescale applied at construction so the largest
  // payload magnitude lands in [1, 2); the capacity verdict is invariant
  // under it.
  const std::vector<Eigen::MatrixXd>& payloads() const { return payloads_; }
  const std::vector<Eigen::MatrixXd>& right_factors() const { return right_acc_; }
  const std::vector<Eigen::MatrixXd>& left_factors() const { return left_acc_; }

 private:
  const SigmaLayout* layout_;
  std::vector<int> payload_source_;  // per payload: tail slot
  std::vector<int> payload_sink_;    // per payload: head slot
  std::vector<Eigen::MatrixXd> payloads_;
  std::vector<Eigen::MatrixXd> right_acc_;  // per source, accumulated
  std::vector<Eigen::MatrixXd> left_acc_;   // per sink, accumulated
};

// Max magnitude of the integerized payload entries: all denominators are
// cleared by the global LCM first (a single scalar on the whole family, so
// the capacity verdict is unchanged).
mpz_class integerized_magnitude(const KrausSet& k);

}  // namespace qsrsr
