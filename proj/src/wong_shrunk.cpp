#include "qsrsr/wong_shrunk.hpp"

#include <random>
#include <sstream>

namespace qsrsr {

namespace {

// Deterministic uniform draw from {1,...,bound} via rejection sampling on
// mt19937_64 (std::uniform_int_distribution is implementation-defined, which
// would break cross-platform replay).
long long draw_uniform(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return static_cast<long long>(v % bound) + 1;
}

}  // namespace

RandomCombination random_b(const KrausSet& k, const Rational& epsilon, std::uint64_t seed) {
  if (!(epsilon > 0 && epsilon < 1))
    throw std::invalid_argument("random_b: epsilon must lie in (0, 1)");
  const SigmaLayout& lay = k.layout();
  RandomCombination out;
  out.seed = seed;
  // s = ceil(2 N^2 / epsilon)
  Rational s_exact = make_rational(2 * static_cast<long long>(lay.N) * static_cast<long long>(lay.N)) / epsilon;
  mpz_class s_int;
  mpz_cdiv_q(s_int.get_mpz_t(), s_exact.get_num().get_mpz_t(), s_exact.get_den().get_mpz_t());
  out.sample_bound = static_cast<std::uint64_t>(mpz_get_ui(s_int.get_mpz_t()));
  if (out.sample_bound == 0) out.sample_bound = 1;

  std::mt19937_64 rng(seed);
  out.coefficients.reserve(k.size());
  out.b = RationalMatrix(lay.N, lay.N);
  // Tuple order (i, j, a, q, r): for each payload, q sweeps I_j^- and r
  // sweeps I_i^+ row-major.
  for (const auto& ap : k.arrows()) {
    for (std::size_t q = lay.row_range[ap.j].first; q < lay.row_range[ap.j].second; ++q) {
      for (std::size_t r = lay.col_range[ap.i].first; r < lay.col_range[ap.i].second; ++r) {
        long long alpha = draw_uniform(rng, out.sample_bound);
        out.coefficients.push_back(alpha);
        const std::size_t row0 = lay.row_blocks[q].offset;
        const std::size_t col0 = lay.col_blocks[r].offset;
        for (std::size_t a = 0; a < ap.payload.rows(); ++a)
          for (std::size_t bcol = 0; bcol < ap.payload.cols(); ++bcol)
            out.b.at(row0 + a, col0 + bcol) += make_rational(alpha) * ap.payload.at(a, bcol);
      }
    }
  }
  return out;
}

SubspaceBasis kraus_image_sum(const KrausSet& k, const SubspaceBasis& u) {
  const SigmaLayout& lay = k.layout();
  // Per-source aggregate S_i: span of all column-block slices of U's basis.
  std::vector<SubspaceBasis> source_span;
  for (std::size_t i = 0; i < lay.sources.size(); ++i) {
    RationalMatrix slices(static_cast<std::size_t>(lay.dim_source[i]), 0);
    for (std::size_t r = lay.col_range[i].first; r < lay.col_range[i].second; ++r) {
      if (u.dim() == 0) break;
      slices = hcat(slices, u.basis().block(lay.col_blocks[r].offset, 0,
                                            static_cast<std::size_t>(lay.col_blocks[r].width),
                                            u.dim()));
    }
    source_span.push_back(SubspaceBasis::span_of(static_cast<std::size_t>(lay.dim_source[i]), slices));
  }
  // Per-sink image F_j = sum_{i, a} V(a)(S_i); the full-space image sum is
  // the direct sum of F_j placed at every row block q in I_j^-.
  std::vector<SubspaceBasis> sink_span;
  for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
    RationalMatrix gathered(static_cast<std::size_t>(lay.dim_sink[j]), 0);
    for (std::size_t idx : k.arrows_into(static_cast<int>(j))) {
      const auto& ap = k.arrows()[idx];
      if (source_span[ap.i].dim() == 0) continue;
      gathered = hcat(gathered, ap.payload * source_span[ap.i].basis());
    }
    sink_span.push_back(SubspaceBasis::span_of(static_cast<std::size_t>(lay.dim_sink[j]), gathered));
  }
  std::size_t total = 0;
  for (std::size_t q = 0; q < lay.M; ++q) total += sink_span[lay.row_blocks[q].sink].dim();
  RationalMatrix assembled(lay.N, total);
  std::size_t col = 0;
  for (std::size_t q = 0; q < lay.M; ++q) {
    const SubspaceBasis& f = sink_span[lay.row_blocks[q].sink];
    assembled.set_block(lay.row_blocks[q].offset, col, f.basis());
    col += f.dim();
  }
  return SubspaceBasis::span_of(lay.N, assembled);
}

std::vector<std::size_t> WongState::dims() const {
  std::vector<std::size_t> out;
  out.reserve(chain.size());
  for (const auto& w : chain) out.push_back(w.dim());
  return out;
}

WongState wong_limit(const KrausSet& k, const RationalMatrix& b) {
  const SigmaLayout& lay = k.layout();
  if (b.rows() != lay.N || b.cols() != lay.N)
    throw std::invalid_argument("wong_limit: B has the wrong shape");
  WongState state;
  state.chain.push_back(SubspaceBasis::zero(lay.N));
  for (std::size_t step = 0; step <= lay.N; ++step) {
    SubspaceBasis pre = preimage(b, state.chain.back());
    SubspaceBasis next = kraus_image_sum(k, pre);
    if (next == state.chain.back()) {
      state.stabilized_at = step;
      return state;
    }
    state.chain.push_back(std::move(next));
  }
  // Unreachable: an ascending chain in Q^N stabilizes within N steps.
  throw std::logic_error("wong_limit: chain failed to stabilize");
}

ShrunkOutcome shrunk_from_wong(const KrausSet& k, const RandomCombination& b) {
  WongState wong = wong_limit(k, b.b);
  const SubspaceBasis& limit = wong.limit();
  SubspaceBasis im_b = image(b.b);
  if (!is_contained(limit, im_b)) return NotContained{};
  ShrunkCertificate cert;
  cert.u = preimage(b.b, limit);
  cert.corank_b = static_cast<long long>(k.layout().N) - static_cast<long long>(im_b.dim());
  SubspaceBasis au = kraus_image_sum(k, cert.u);
  cert.c = static_cast<long long>(cert.u.dim()) - static_cast<long long>(au.dim());
  cert.b = b;
  cert.wong_dims = wong.dims();
  if (cert.c < cert.corank_b) {
    // Contradicts the shrunk-subspace contract; treat as a failed draw
    // rather than emit an unsound certificate.
    return NotContained{};
  }
  return cert;
}

AlgorithmPResult algorithm_p(const KrausSet& k, const Rational& epsilon, std::uint64_t seed,
                             int max_retries) {
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    RandomCombination b = random_b(k, epsilon, seed + static_cast<std::uint64_t>(attempt));
    ShrunkOutcome outcome = shrunk_from_wong(k, b);
    if (auto* cert = std::get_if<ShrunkCertificate>(&outcome)) {
      AlgorithmPResult result{std::move(*cert), attempt + 1};
      return result;
    }
  }
  std::ostringstream os;
  os << "no shrunk subspace found after " << max_retries << " coefficient draws";
  if (!k.rank_one())
    os << " (the Kraus set has payloads of rank > 1, where the search can fail structurally)";
  throw RetriesExhausted(os.str());
}

}  // namespace qsrsr
