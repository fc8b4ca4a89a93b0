#include <doctest.h>

#include "qsrsr/wong_shrunk.hpp"
#include "support.hpp"

using namespace qsrsr;

TEST_CASE("random_b") {
  KrausSet k = build_kraus(to_representation(testing::load_example("ex4")));
  SUBCASE("sample bound matches 2 n^2 D^2 / epsilon for the SRSR encoding") {
    RandomCombination b = random_b(k, Rational(1, 2), 7);
    CHECK(b.sample_bound == 3600);  // N = 30
    CHECK(b.coefficients.size() == 360);
    for (long long a : b.coefficients) {
      CHECK(a >= 1);
      CHECK(a <= 3600);
    }
  }
  SUBCASE("identical seeds replay identical combinations") {
    RandomCombination b1 = random_b(k, Rational(1, 2), 42);
    RandomCombination b2 = random_b(k, Rational(1, 2), 42);
    CHECK(b1.coefficients == b2.coefficients);
    CHECK(b1.b == b2.b);
    RandomCombination b3 = random_b(k, Rational(1, 2), 43);
    CHECK(b1.coefficients != b3.coefficients);
  }
  SUBCASE("a single Kraus operator gives B = alpha A") {
    QuiverDatum d;
    d.quiver.add_vertex("x1");
    d.quiver.add_vertex("y1");
    d.rep.dim = {1, 1};
    d.weight = {1, -1};
    d.quiver.add_arrow("a", 0, 1);
    d.rep.arrow_matrix.push_back(RationalMatrix::from_strings({{"3"}}));
    KrausSet k1 = build_kraus(d);
    RandomCombination b = random_b(k1, Rational(1, 2), 5);
    REQUIRE(b.coefficients.size() == 1);
    CHECK(b.b == make_rational(b.coefficients[0]) * k1.materialize(0));
    CHECK(rank(b.b) == rank(k1.materialize(0)));
  }
  SUBCASE("epsilon outside (0,1) is rejected") {
    CHECK_THROWS_AS(random_b(k, Rational(0), 1), std::invalid_argument);
    CHECK_THROWS_AS(random_b(k, Rational(3, 2), 1), std::invalid_argument);
  }
}

TEST_CASE("wong_limit") {
  SUBCASE("invertible B stops immediately at W* = 0") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex1")));
    RandomCombination b = random_b(k, Rational(1, 2), 11);
    REQUIRE(rank(b.b) == k.layout().N);  // semi-stable instance, max rank
    WongState w = wong_limit(k, b.b);
    CHECK(w.limit().dim() == 0);
    CHECK(w.stabilized_at == 0);
  }
  SUBCASE("zero Kraus set gives W* = 0") {
    PartitionedDataSet x;
    x.n = 1;
    x.m = 1;
    x.blocks = {1};
    x.points = RationalMatrix(1, 1);
    KrausSet k = build_kraus(to_representation(x));
    RandomCombination b = random_b(k, Rational(1, 2), 3);
    WongState w = wong_limit(k, b.b);
    CHECK(w.limit().dim() == 0);
  }
  SUBCASE("the chain ascends strictly and stabilizes within N steps") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex4")));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      RandomCombination b = random_b(k, Rational(1, 2), seed);
      WongState w = wong_limit(k, b.b);
      CHECK(w.stabilized_at <= k.layout().N);
      for (std::size_t t = 1; t < w.chain.size(); ++t) {
        CHECK(is_contained(w.chain[t - 1], w.chain[t]));
        CHECK(w.chain[t - 1].dim() < w.chain[t].dim());
      }
    }
  }
  SUBCASE("image sums match the naive materialized route") {
    KrausSet k = build_kraus(to_representation(testing::random_instance(17, {4, 4, 2})));
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
      RationalMatrix m(k.layout().N, 2);
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = testing::random_rational(rng);
      SubspaceBasis u = SubspaceBasis::span_of(k.layout().N, m);
      CHECK(kraus_image_sum(k, u) == testing::naive_image_sum(k, u));
    }
  }
}

TEST_CASE("shrunk_from_wong") {
  SUBCASE("on the (6,2,(2,3)) example the certificate has c = corank(B) = 2") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex4")));
    RandomCombination b = random_b(k, Rational(1, 2), 1);
    REQUIRE(rank(b.b) == 28);  // max rank = N - disc
    ShrunkOutcome outcome = shrunk_from_wong(k, b);
    auto* cert = std::get_if<ShrunkCertificate>(&outcome);
    REQUIRE(cert != nullptr);
    CHECK(cert->c == 2);
    CHECK(cert->corank_b == 2);
    // Re-verify the defining inequality through the naive route.
    SubspaceBasis au = testing::naive_image_sum(k, cert->u);
    CHECK(static_cast<long long>(cert->u.dim()) - static_cast<long long>(au.dim()) == cert->c);
  }
  SUBCASE("an invertible combination yields the trivial c = 0 certificate") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex2")));
    RandomCombination b = random_b(k, Rational(1, 2), 2);
    REQUIRE(rank(b.b) == k.layout().N);
    ShrunkOutcome outcome = shrunk_from_wong(k, b);
    auto* cert = std::get_if<ShrunkCertificate>(&outcome);
    REQUIRE(cert != nullptr);
    CHECK(cert->c == 0);
    CHECK(cert->u.dim() == 0);
  }
  SUBCASE("skew-symmetric payloads always refuse: W* never lands in Im B") {
    KrausSet k = build_kraus(testing::skew_payload_datum());
    REQUIRE(!k.rank_one());
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      RandomCombination b = random_b(k, Rational(1, 2), seed);
      CHECK(rank(b.b) == 2);  // skew 3x3 is never invertible
      ShrunkOutcome outcome = shrunk_from_wong(k, b);
      CHECK(std::holds_alternative<NotContained>(outcome));
    }
  }
}

TEST_CASE("algorithm_p") {
  SUBCASE("certificates on the unstable examples") {
    KrausSet k4 = build_kraus(to_representation(testing::load_example("ex4")));
    AlgorithmPResult p4 = algorithm_p(k4, Rational(1, 2), 9);
    CHECK(p4.certificate.c == 2);

    KrausSet k3 = build_kraus(to_representation(testing::load_example("ex3")));
    AlgorithmPResult p3 = algorithm_p(k3, Rational(1, 2), 9);
    CHECK(p3.certificate.c == 1);
  }
  SUBCASE("semi-stable input returns the trivial certificate") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex1")));
    AlgorithmPResult p = algorithm_p(k, Rational(1, 2), 9);
    CHECK(p.certificate.c == 0);
  }
  SUBCASE("structural failure on the skew family exhausts retries") {
    KrausSet k = build_kraus(testing::skew_payload_datum());
    CHECK_THROWS_AS(algorithm_p(k, Rational(1, 2), 9, 4), RetriesExhausted);
  }
  SUBCASE("replays are deterministic") {
    KrausSet k = build_kraus(to_representation(testing::load_example("ex4")));
    AlgorithmPResult a = algorithm_p(k, Rational(1, 2), 1234);
    AlgorithmPResult b = algorithm_p(k, Rational(1, 2), 1234);
    CHECK(a.certificate.b.coefficients == b.certificate.b.coefficients);
    CHECK(a.certificate.u == b.certificate.u);
    CHECK(a.attempts == b.attempts);
  }
}
