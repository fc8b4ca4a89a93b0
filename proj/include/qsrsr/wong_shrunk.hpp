#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qsrsr/blops.hpp"

namespace qsrsr {

// B = sum_k alpha_k A_k with alpha_k drawn uniformly from {1,...,s},
// enumerated in the Kraus tuple order. s = ceil(2 N^2 / epsilon), which for
// the SRSR encoding is the classical 2 n^2 D^2 / epsilon bound.
struct RandomCombination {
  std::vector<long long> coefficients;  // one per tuple, enumeration order
  std::uint64_t seed = 0;
  std::uint64_t sample_bound = 0;  // s
  RationalMatrix b;                // N x N, exact; carries the block structure
};

RandomCombination random_b(const KrausSet& k, const Rational& epsilon, std::uint64_t seed);

// W_0 = 0, W_t = sum_k A_k(B^-1(W_{t-1})), all exact. The chain is
// ascending and stabilizes within N steps.
struct WongState {
  std::vector<SubspaceBasis> chain;  // W_0, W_1, ..., W_* (last repeated entry dropped)
  std::size_t stabilized_at = 0;     // first t with W_t = W_{t+1}

  const SubspaceBasis& limit() const { return chain.back(); }
  std::vector<std::size_t> dims() const;
};

WongState wong_limit(const KrausSet& k, const RationalMatrix& b);

// Image sum A(U) = sum_k A_k(U), computed blockwise from the payloads.
SubspaceBasis kraus_image_sum(const KrausSet& k, const SubspaceBasis& u);

struct ShrunkCertificate {
  SubspaceBasis u;          // B^-1(W*)
  long long c = 0;          // dim U - dim sum A(U), recomputed exactly
  long long corank_b = 0;   // equals c whenever the certificate is produced
  RandomCombination b;
  std::vector<std::size_t> wong_dims;
};

struct NotContained {};  // W* is not inside Im B; retry with fresh coefficients

using ShrunkOutcome = std::variant<ShrunkCertificate, NotContained>;

// If W* <= Im B, returns U = B^-1(W*) with its exactly verified shrink value
// (c = corank(B); c = 0 happens exactly when B is invertible, which proves
// that no shrunk subspace exists at all). Otherwise NotContained.
ShrunkOutcome shrunk_from_wong(const KrausSet& k, const RandomCombination& b);

class RetriesExhausted : public std::runtime_error {
 public:
  explicit RetriesExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct AlgorithmPResult {
  ShrunkCertificate certificate;
  int attempts = 1;  // number of coefficient draws used
};

// Draws fresh coefficients (seed + attempt index) until shrunk_from_wong
// succeeds. For rank-one Kraus sets each attempt succeeds with probability
// >= 1 - epsilon; a c = 0 certificate proves semi-stability. Throws
// RetriesExhausted after max_retries failures (for non-rank-one sets this
// can be structural, not bad luck).
AlgorithmPResult algorithm_p(const KrausSet& k, const Rational& epsilon, std::uint64_t seed,
                             int max_retries = 8);

}  // namespace qsrsr
