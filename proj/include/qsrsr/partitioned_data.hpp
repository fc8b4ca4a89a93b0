#pragma once

#include <vector>

#include "qsrsr/quiver.hpp"

namespace qsrsr {

// n points in Q^D whose coordinates split into m typed blocks of sizes
// d_1,...,d_m. Point i's block j is the column slice v_i^j in Q^{d_j}.
struct PartitionedDataSet {
  int n = 0;
  int m = 0;
  std::vector<int> blocks;
  RationalMatrix points;  // D x n, one column per point

  int dimension() const;  // D = sum of block sizes
  RationalMatrix point_block(int i, int j) const;  // v_i^j as a d_j x 1 matrix
  std::vector<Violation> validate() const;
};

// Per-block subspaces T_j <= Q^{d_j}.
struct SubspaceTuple {
  std::vector<SubspaceBasis> t;

  int total_dim() const;
};

struct SrsrEvaluation {
  std::vector<int> index_set;  // I_T, 0-based point indices
  long long pairing_value = 0; // D |I_T| - n sum dim T_j = sigma0 . dim W_T
  Rational margin;             // |I_T| - (sum dim T_j / D) n = pairing / D
};

// Encodes X as a representation of the complete bipartite quiver K_{n,m}
// with weight sigma0(x_i) = D, sigma0(y_j) = -n. Vertices are ordered
// x1..xn, y1..ym; arrow a_{i,j} from x_i to y_j carries v_i^j.
QuiverDatum to_representation(const PartitionedDataSet& x);

// I_T = {i : v_i^j in T_j for all j}, by exact rank membership tests.
std::vector<int> index_set(const PartitionedDataSet& x, const SubspaceTuple& t);

// margin > 0 iff T is an SRSR solution.
SrsrEvaluation evaluate(const PartitionedDataSet& x, const SubspaceTuple& t);

// The subrepresentation W_T of V_X: Q at x_i for i in I_T (else 0), T_j at
// y_j. Among subrepresentations with the given sink spaces it maximizes
// sigma0 . dim.
Subrepresentation canonical_subrep(const PartitionedDataSet& x, const SubspaceTuple& t);

struct OracleResult {
  long long disc = 0;
  std::vector<int> best_subset;     // the enumerated I achieving the maximum
  std::vector<int> best_index_set;  // its enlarged I_T
  SubspaceTuple best_tuple;
};

// Independent exhaustive oracle: for every I subseteq [n] takes T_j =
// span{v_i^j : i in I}, evaluates with the (possibly enlarged) index set,
// and returns the maximum pairing value, which equals disc(V_X, sigma0).
// Ties are broken by the lexicographically smallest enumerated subset.
// The empty subset is included, so the result is always >= 0.
OracleResult brute_force_discrepancy(const PartitionedDataSet& x, int max_n = 12);

}  // namespace qsrsr
