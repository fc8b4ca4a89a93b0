#pragma once

// Shared fixtures and independent oracles for the test suites. Everything in
// here deliberately avoids the structured fast paths it is used to check:
// the naive operators below materialize every blow-up matrix and multiply
// dense.

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "qsrsr/blops.hpp"
#include "qsrsr/json_io.hpp"
#include "qsrsr/partitioned_data.hpp"

namespace qsrsr::testing {

#ifndef QSRSR_DATA_DIR
#error "QSRSR_DATA_DIR must point at the bundled data files"
#endif

inline PartitionedDataSet load_example(const std::string& name) {
  std::ifstream in(std::string(QSRSR_DATA_DIR) + "/" + name + ".json");
  nlohmann::json j;
  in >> j;
  return data_from_json(j);
}

// --- independent naive operators (dense, no block shortcuts) ---------------

inline RationalMatrix naive_apply(const KrausSet& k, const RationalMatrix& y) {
  RationalMatrix out(k.layout().N, k.layout().N);
  for (std::size_t t = 0; t < k.size(); ++t) {
    RationalMatrix a = k.materialize(t);
    out = out + a * y * a.transposed();
  }
  return out;
}

inline RationalMatrix naive_apply_dual(const KrausSet& k, const RationalMatrix& x) {
  RationalMatrix out(k.layout().N, k.layout().N);
  for (std::size_t t = 0; t < k.size(); ++t) {
    RationalMatrix a = k.materialize(t);
    out = out + a.transposed() * x * a;
  }
  return out;
}

inline SubspaceBasis naive_image_sum(const KrausSet& k, const SubspaceBasis& u) {
  RationalMatrix gathered(k.layout().N, 0);
  if (u.dim() > 0) {
    for (std::size_t t = 0; t < k.size(); ++t)
      gathered = hcat(gathered, k.materialize(t) * u.basis());
  }
  return SubspaceBasis::span_of(k.layout().N, gathered);
}

// --- deterministic random instances -----------------------------------------

struct InstanceParams {
  int max_n = 8;
  int max_d = 6;
  int max_m = 3;
};

inline Rational random_rational(std::mt19937_64& rng) {
  static const int dens[] = {1, 1, 2, 4, 5};
  long long num = static_cast<long long>(rng() % 19) - 9;
  long long den = dens[rng() % 5];
  return make_rational(num, den);
}

// Mixed stable/unstable partitioned data sets; odd draws plant a
// low-dimensional structure with enough points inside to force instability.
inline PartitionedDataSet random_instance(std::uint64_t seed, const InstanceParams& p = {}) {
  std::mt19937_64 rng(seed);
  PartitionedDataSet x;
  x.n = 2 + static_cast<int>(rng() % static_cast<unsigned>(p.max_n - 1));
  x.m = 1 + static_cast<int>(rng() % static_cast<unsigned>(p.max_m));
  int budget = p.max_d - x.m;  // each block gets >= 1
  for (int j = 0; j < x.m; ++j) {
    int extra = budget > 0 ? static_cast<int>(rng() % static_cast<unsigned>(budget + 1)) : 0;
    x.blocks.push_back(1 + extra);
    budget -= extra;
  }
  const int d_total = x.dimension();
  x.points = RationalMatrix(static_cast<std::size_t>(d_total), static_cast<std::size_t>(x.n));
  for (int i = 0; i < x.n; ++i)
    for (int t = 0; t < d_total; ++t)
      x.points.at(static_cast<std::size_t>(t), static_cast<std::size_t>(i)) = random_rational(rng);

  if (rng() % 2 == 1) {
    // Plant: per-block subspaces of total dimension < D, and enough points
    // inside them that D * k > n * total_dim.
    std::vector<int> tdims;
    int total = 0;
    for (int j = 0; j < x.m; ++j) {
      int tj = static_cast<int>(rng() % static_cast<unsigned>(x.blocks[j]));  // < d_j
      tdims.push_back(tj);
      total += tj;
    }
    int k_needed = static_cast<int>((static_cast<long long>(x.n) * total) / d_total) + 1;
    if (k_needed <= x.n) {
      std::vector<RationalMatrix> bases;
      for (int j = 0; j < x.m; ++j) {
        RationalMatrix b(static_cast<std::size_t>(x.blocks[j]), static_cast<std::size_t>(tdims[j]));
        for (std::size_t rr = 0; rr < b.rows(); ++rr)
          for (std::size_t cc = 0; cc < b.cols(); ++cc) b.at(rr, cc) = random_rational(rng);
        bases.push_back(std::move(b));
      }
      for (int i = 0; i < k_needed; ++i) {
        std::size_t off = 0;
        for (int j = 0; j < x.m; ++j) {
          RationalMatrix coeff(static_cast<std::size_t>(tdims[j]), 1);
          for (std::size_t cc = 0; cc < coeff.rows(); ++cc) coeff.at(cc, 0) = random_rational(rng);
          RationalMatrix v = bases[static_cast<std::size_t>(j)] * coeff;
          for (std::size_t t = 0; t < v.rows(); ++t)
            x.points.at(off + t, static_cast<std::size_t>(i)) = v.at(t, 0);
          off += static_cast<std::size_t>(x.blocks[j]);
        }
      }
    }
  }
  return x;
}

// Small random bipartite quiver datum with payloads of width > 1 allowed.
inline QuiverDatum random_bipartite_datum(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QuiverDatum datum;
  const int n_src = 1 + static_cast<int>(rng() % 2);
  const int n_snk = 1 + static_cast<int>(rng() % 2);
  std::vector<int> sdim, kdim;
  for (int i = 0; i < n_src; ++i) sdim.push_back(1 + static_cast<int>(rng() % 3));
  for (int j = 0; j < n_snk; ++j) kdim.push_back(1 + static_cast<int>(rng() % 3));
  // Weights: sigma_pos free, last sink weight balances the pairing to zero.
  std::vector<long long> spos, sneg;
  long long lhs = 0;
  for (int i = 0; i < n_src; ++i) {
    spos.push_back(1 + static_cast<long long>(rng() % 3));
    lhs += spos.back() * sdim[i];
  }
  long long acc = 0;
  for (int j = 0; j + 1 < n_snk; ++j) {
    sneg.push_back(1 + static_cast<long long>(rng() % 2));
    acc += sneg.back() * kdim[j];
  }
  long long rem = lhs - acc;
  // Retry the tail block dimension until it divides the remainder.
  while (rem <= 0 || rem % kdim[n_snk - 1] != 0) {
    if (rem <= 0) {
      spos[0] += 1;
      lhs += sdim[0];
      rem = lhs - acc;
      continue;
    }
    kdim[n_snk - 1] = 1;  // always divides
    break;
  }
  sneg.push_back(rem / kdim[n_snk - 1]);

  for (int i = 0; i < n_src; ++i) {
    datum.quiver.add_vertex("x" + std::to_string(i + 1));
    datum.rep.dim.push_back(sdim[i]);
    datum.weight.push_back(spos[i]);
  }
  for (int j = 0; j < n_snk; ++j) {
    datum.quiver.add_vertex("y" + std::to_string(j + 1));
    datum.rep.dim.push_back(kdim[j]);
    datum.weight.push_back(-sneg[j]);
  }
  for (int i = 0; i < n_src; ++i)
    for (int j = 0; j < n_snk; ++j) {
      int copies = 1 + static_cast<int>(rng() % 2);
      for (int c = 0; c < copies; ++c) {
        datum.quiver.add_arrow(
            "a" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(c),
            i, n_src + j);
        RationalMatrix m(static_cast<std::size_t>(kdim[j]), static_cast<std::size_t>(sdim[i]));
        for (std::size_t rr = 0; rr < m.rows(); ++rr)
          for (std::size_t cc = 0; cc < m.cols(); ++cc) m.at(rr, cc) = random_rational(rng);
        datum.rep.arrow_matrix.push_back(std::move(m));
      }
    }
  return datum;
}

// The 3x3 skew-symmetric payload family: commutative corank 1 but no shrunk
// subspace at all, so the randomized route must always report NotContained.
inline QuiverDatum skew_payload_datum() {
  QuiverDatum datum;
  datum.quiver.add_vertex("x1");
  datum.quiver.add_vertex("y1");
  datum.rep.dim = {3, 3};
  datum.weight = {1, -1};
  const char* mats[3][3][3] = {
      {{"0", "1", "0"}, {"-1", "0", "0"}, {"0", "0", "0"}},
      {{"0", "0", "1"}, {"0", "0", "0"}, {"-1", "0", "0"}},
      {{"0", "0", "0"}, {"0", "0", "1"}, {"0", "-1", "0"}},
  };
  for (int a = 0; a < 3; ++a) {
    datum.quiver.add_arrow("a" + std::to_string(a), 0, 1);
    RationalMatrix m(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m.at(i, j) = parse_rational(mats[a][i][j]);
    datum.rep.arrow_matrix.push_back(std::move(m));
  }
  return datum;
}

inline RationalMatrix random_psd(std::mt19937_64& rng, std::size_t n) {
  RationalMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = random_rational(rng);
  return r * r.transposed();
}

}  // namespace qsrsr::testing
