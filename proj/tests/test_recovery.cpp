#include <doctest.h>

#include "qsrsr/json_io.hpp"
#include "qsrsr/recovery.hpp"
#include "support.hpp"

using namespace qsrsr;

namespace {

SolveOptions seeded(std::uint64_t seed) {
  SolveOptions opts;
  opts.seed = seed;
  return opts;
}

SubspaceTuple optimal_ex4_tuple() {
  SubspaceTuple u;
  u.t.push_back(SubspaceBasis::span_of(2, RationalMatrix::from_strings({{"1"}, {"2"}})));
  u.t.push_back(SubspaceBasis::span_of(
      3, RationalMatrix::from_strings({{"1", "3"}, {"1", "1"}, {"1", "3"}})));
  return u;
}

}  // namespace

TEST_CASE("witness_from_shrunk") {
  KrausSet k = build_kraus(to_representation(testing::load_example("ex4")));
  SUBCASE("the pipeline certificate yields gap >= 2") {
    AlgorithmPResult p = algorithm_p(k, Rational(1, 2), 3);
    REQUIRE(p.certificate.c == 2);
    Witness w = witness_from_shrunk(k, p.certificate);
    CHECK(w.rank_y == static_cast<long long>(p.certificate.u.dim()));
    CHECK(w.gap() >= 2);
    CHECK(w.y.is_symmetric());
    CHECK(w.y * w.y == w.y);
    // Independent re-check of rank T(Y) through the naive operator.
    CHECK(static_cast<long long>(rank(testing::naive_apply(k, w.y))) == w.rank_ty);
  }
  SUBCASE("c = 0 certificates are rejected") {
    ShrunkCertificate trivial;
    trivial.u = SubspaceBasis::zero(k.layout().N);
    trivial.c = 0;
    CHECK_THROWS_AS(witness_from_shrunk(k, trivial), std::invalid_argument);
  }
}

TEST_CASE("witness_from_subrep_srsr") {
  PartitionedDataSet ex4 = testing::load_example("ex4");
  SUBCASE("the optimal tuple gives rank Y = 20 and gap >= 2") {
    Witness w = witness_from_subrep_srsr(ex4, optimal_ex4_tuple());
    CHECK(w.rank_y == 20);  // 4 captured points x D = 5
    CHECK(w.gap() >= 2);
  }
  SUBCASE("empty index set gives Y = 0") {
    SubspaceTuple zero;
    zero.t.push_back(SubspaceBasis::zero(2));
    zero.t.push_back(SubspaceBasis::zero(3));
    Witness w = witness_from_subrep_srsr(ex4, zero);
    CHECK(w.rank_y == 0);
    CHECK(w.gap() == 0);
  }
  SUBCASE("full tuple on a semi-stable set is not rank-decreasing") {
    PartitionedDataSet ex1 = testing::load_example("ex1");
    SubspaceTuple full;
    full.t.push_back(SubspaceBasis::full(2));
    full.t.push_back(SubspaceBasis::full(3));
    Witness w = witness_from_subrep_srsr(ex1, full);
    CHECK(w.gap() <= 0);
  }
}

TEST_CASE("witness_from_subrep_general") {
  SUBCASE("W = V on a semi-stable balanced datum gives gap exactly 0") {
    QuiverDatum datum = to_representation(testing::load_example("ex1"));
    KrausSet k = build_kraus(datum);
    Subrepresentation w;
    for (int d : datum.rep.dim) w.space.push_back(SubspaceBasis::full(static_cast<std::size_t>(d)));
    Witness wit = witness_from_subrep_general(k, w);
    CHECK(wit.gap() == 0);
  }
  SUBCASE("W = 0 gives Y = 0") {
    QuiverDatum datum = to_representation(testing::load_example("ex1"));
    KrausSet k = build_kraus(datum);
    Subrepresentation w;
    for (int d : datum.rep.dim) w.space.push_back(SubspaceBasis::zero(static_cast<std::size_t>(d)));
    Witness wit = witness_from_subrep_general(k, w);
    CHECK(wit.y.is_zero());
    CHECK(wit.rank_y == 0);
  }
  SUBCASE("gap >= sigma . dim W on random wide-payload data") {
    for (std::uint64_t seed = 500; seed < 515; ++seed) {
      QuiverDatum datum = testing::random_bipartite_datum(seed);
      REQUIRE(validate(datum).empty());
      KrausSet k = build_kraus(datum);
      // Random subrepresentation: random source spaces, sinks closed under
      // the arrow images.
      std::mt19937_64 rng(seed * 31 + 1);
      Subrepresentation w;
      w.space.resize(datum.quiver.num_vertices());
      const SigmaLayout& lay = k.layout();
      for (std::size_t i = 0; i < lay.sources.size(); ++i) {
        std::size_t d = static_cast<std::size_t>(lay.dim_source[i]);
        RationalMatrix m(d, rng() % (d + 1));
        for (std::size_t r = 0; r < m.rows(); ++r)
          for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = testing::random_rational(rng);
        w.space[lay.sources[i]] = SubspaceBasis::span_of(d, m);
      }
      for (std::size_t j = 0; j < lay.sinks.size(); ++j) {
        std::size_t d = static_cast<std::size_t>(lay.dim_sink[j]);
        RationalMatrix gathered(d, 0);
        for (std::size_t idx : k.arrows_into(static_cast<int>(j))) {
          const auto& ap = k.arrows()[idx];
          const SubspaceBasis& ws = w.space[lay.sources[ap.i]];
          if (ws.dim() > 0) gathered = hcat(gathered, ap.payload * ws.basis());
        }
        w.space[lay.sinks[j]] = SubspaceBasis::span_of(d, gathered);
      }
      REQUIRE(is_subrepresentation(datum, w));
      Witness wit = witness_from_subrep_general(k, w);
      CHECK(wit.gap() >= weight_pairing(datum.weight, w.dims()));
    }
  }
}

TEST_CASE("recover_srsr") {
  SUBCASE("single-block witness support") {
    PartitionedDataSet x;
    x.n = 2;
    x.m = 1;
    x.blocks = {3};
    x.points = RationalMatrix::from_strings({{"1", "2"}, {"0", "0"}, {"0", "0"}});
    Witness w;
    w.y = RationalMatrix(6, 6);
    for (std::size_t t = 0; t < 3; ++t) w.y.at(t, t) = 1;  // block of point 0
    w.rank_y = 3;
    KrausSet k = build_kraus(to_representation(x));
    w.rank_ty = apply(k, BlockPSD::from_full(k.layout(), BlockPSD::Side::Domain, w.y))
                    .rank_block_diagonal();
    REQUIRE(w.gap() == 1);
    SrsrRecovery rec = recover_srsr(x, w);
    CHECK(rec.support == std::vector<int>{0});
    CHECK(rec.tuple.t[0].dim() == 1);
    CHECK(rec.eval.index_set == std::vector<int>{0, 1});  // collinear second point
    CHECK(rec.eval.pairing_value == 3 * 2 - 2 * 1);
  }
  SUBCASE("a non-rank-decreasing witness is refused") {
    PartitionedDataSet x = testing::load_example("ex1");
    Witness w;
    w.y = RationalMatrix::identity(20);
    w.rank_y = 20;
    w.rank_ty = 20;
    CHECK_THROWS_AS(recover_srsr(x, w), std::invalid_argument);
  }
}

TEST_CASE("recover_general round trip") {
  SUBCASE("recovered sources contain the seeding subrepresentation") {
    PartitionedDataSet x = testing::load_example("ex4");
    QuiverDatum datum = to_representation(x);
    KrausSet k = build_kraus(datum);
    Subrepresentation w = canonical_subrep(x, optimal_ex4_tuple());
    Witness wit = witness_from_subrep_general(k, w);
    REQUIRE(wit.gap() >= 1);
    GeneralRecovery rec = recover_general(k, datum, wit);
    const SigmaLayout& lay = k.layout();
    for (std::size_t i = 0; i < lay.sources.size(); ++i)
      CHECK(is_contained(w.space[lay.sources[i]], rec.subrep.space[lay.sources[i]]));
    CHECK(rec.pairing >= weight_pairing(datum.weight, w.dims()));
  }
  SUBCASE("the SRSR path and the general path agree on the examples") {
    for (const char* name : {"ex3", "ex4"}) {
      PartitionedDataSet x = testing::load_example(name);
      QuiverDatum datum = to_representation(x);
      KrausSet k = build_kraus(datum);
      AlgorithmPResult p = algorithm_p(k, Rational(1, 2), 77);
      REQUIRE(p.certificate.c >= 1);
      Witness w = witness_from_shrunk(k, p.certificate);
      SrsrRecovery via_srsr = recover_srsr(x, w);
      GeneralRecovery via_general = recover_general(k, datum, w);
      CHECK(via_srsr.eval.pairing_value == via_general.pairing);
    }
  }
}

TEST_CASE("discrepancy") {
  SUBCASE("(6,2,(2,3)) has exact discrepancy 2") {
    DiscrepancyResult d = discrepancy(to_representation(testing::load_example("ex4")), seeded(5));
    CHECK(d.value == 2);
    CHECK(d.exact);
    REQUIRE(d.witness_subrep.has_value());
    CHECK(weight_pairing(Weight{5, 5, 5, 5, 5, 5, -6, -6}, d.witness_subrep->dims()) == 2);
  }
  SUBCASE("(4,2,(2,3)) has discrepancy 0, certified by an invertible combination") {
    DiscrepancyResult d = discrepancy(to_representation(testing::load_example("ex1")), seeded(5));
    CHECK(d.value == 0);
    CHECK(d.exact);
    CHECK(d.certificate->corank_b == 0);
  }
  SUBCASE("structural failure surfaces as RetriesExhausted") {
    SolveOptions opts = seeded(5);
    opts.max_retries = 3;
    CHECK_THROWS_AS(discrepancy(testing::skew_payload_datum(), opts), RetriesExhausted);
  }
}

TEST_CASE("solve_srsr on the worked examples") {
  SUBCASE("(4,2,(2,3)) first: semi-stable") {
    RecoveryReport r = solve_srsr(testing::load_example("ex1"), seeded(11));
    CHECK(r.verdict == SolveVerdict::SemiStable);
    CHECK(r.discrepancy == 0);
    CHECK(r.discrepancy_exact);
    CHECK(!r.scaling_disagreed);
  }
  SUBCASE("(4,2,(2,3)) second: semi-stable despite blockwise structure") {
    RecoveryReport r = solve_srsr(testing::load_example("ex2"), seeded(11));
    CHECK(r.verdict == SolveVerdict::SemiStable);
  }
  SUBCASE("(5,3,(3,3,2)): unstable with margin 1/8") {
    RecoveryReport r = solve_srsr(testing::load_example("ex3"), seeded(11));
    CHECK(r.verdict == SolveVerdict::Unstable);
    CHECK(r.pairing_value == 1);
    CHECK(r.margin == Rational(1, 8));
    REQUIRE(r.solution_tuple.has_value());
    CHECK(evaluate(testing::load_example("ex3"), *r.solution_tuple).pairing_value == 1);
  }
  SUBCASE("(6,2,(2,3)): unstable, pairing 2, margin 2/5, sink dims (1,2)") {
    RecoveryReport r = solve_srsr(testing::load_example("ex4"), seeded(11));
    CHECK(r.verdict == SolveVerdict::Unstable);
    CHECK(r.pairing_value == 2);
    CHECK(r.margin == Rational(2, 5));
    REQUIRE(r.solution_tuple.has_value());
    CHECK(r.solution_tuple->t[0].dim() == 1);
    CHECK(r.solution_tuple->t[1].dim() == 2);
    REQUIRE(r.solution_index_set.has_value());
    CHECK(*r.solution_index_set == std::vector<int>{1, 2, 3, 4});
  }
  SUBCASE("identical seeds give identical reports") {
    nlohmann::json a = report_to_json(solve_srsr(testing::load_example("ex4"), seeded(321)));
    nlohmann::json b = report_to_json(solve_srsr(testing::load_example("ex4"), seeded(321)));
    a.erase("timings");
    b.erase("timings");
    CHECK(a.dump() == b.dump());
  }
}

TEST_CASE("check_datum") {
  SUBCASE("bipartite quiver data round through the general path") {
    QuiverDatum datum = to_representation(testing::load_example("ex4"));
    RecoveryReport r = check_datum(datum, seeded(19));
    CHECK(r.verdict == SolveVerdict::Unstable);
    CHECK(r.pairing_value == 2);
    CHECK(!r.bipartized);
    REQUIRE(r.solution_subrep.has_value());
    CHECK(is_subrepresentation(datum, *r.solution_subrep));
  }
  SUBCASE("an unstable path quiver is decided after bipartization") {
    // x -> z -> y with a zero composite: the bipartized datum is a single
    // zero arrow, so x survives as a certificate.
    QuiverDatum datum;
    datum.quiver.add_vertex("x");
    datum.quiver.add_vertex("z");
    datum.quiver.add_vertex("y");
    datum.quiver.add_arrow("a", 0, 1);
    datum.quiver.add_arrow("b", 1, 2);
    datum.rep.dim = {1, 1, 1};
    datum.weight = {1, 0, -1};
    datum.rep.arrow_matrix.push_back(RationalMatrix::from_strings({{"1"}}));
    datum.rep.arrow_matrix.push_back(RationalMatrix::from_strings({{"0"}}));
    RecoveryReport r = check_datum(datum, seeded(19));
    CHECK(r.bipartized);
    CHECK(r.zero_weight_vertices);
    CHECK(r.verdict == SolveVerdict::Unstable);
    CHECK(r.pairing_value == 1);
    // Oracle on the bipartized form: the datum encodes one zero point.
    PartitionedDataSet x;
    x.n = 1;
    x.m = 1;
    x.blocks = {1};
    x.points = RationalMatrix(1, 1);
    CHECK(brute_force_discrepancy(x).disc == 1);
  }
  SUBCASE("a semi-stable path quiver is decided after bipartization") {
    QuiverDatum datum;
    datum.quiver.add_vertex("x");
    datum.quiver.add_vertex("z");
    datum.quiver.add_vertex("y");
    datum.quiver.add_arrow("a", 0, 1);
    datum.quiver.add_arrow("b", 1, 2);
    datum.rep.dim = {1, 1, 1};
    datum.weight = {1, 0, -1};
    datum.rep.arrow_matrix.push_back(RationalMatrix::from_strings({{"2"}}));
    datum.rep.arrow_matrix.push_back(RationalMatrix::from_strings({{"3"}}));
    RecoveryReport r = check_datum(datum, seeded(19));
    CHECK(r.verdict == SolveVerdict::SemiStable);
    CHECK(r.discrepancy_exact);
  }
  SUBCASE("unbalanced weights are an input error") {
    QuiverDatum datum;
    datum.quiver.add_vertex("x");
    datum.quiver.add_vertex("y");
    datum.quiver.add_arrow("a", 0, 1);
    datum.rep.dim = {1, 1};
    datum.weight = {1, -2};
    datum.rep.arrow_matrix.push_back(RationalMatrix::identity(1));
    CHECK_THROWS_AS(check_datum(datum, seeded(1)), std::invalid_argument);
  }
  SUBCASE("skew payloads fall back to the scaling screen, loudly") {
    RecoveryReport r = check_datum(testing::skew_payload_datum(), seeded(19));
    CHECK(r.verdict_heuristic);
    CHECK(r.verdict == SolveVerdict::SemiStable);  // capacity is positive here
    CHECK(!r.discrepancy_exact);
    CHECK(!r.notes.empty());
  }
}

TEST_CASE("round-trip inequality on planted instances") {
  int done = 0;
  for (std::uint64_t seed = 900; done < 10; ++seed) {
    PartitionedDataSet x = testing::random_instance(seed, {6, 5, 2});
    OracleResult o = brute_force_discrepancy(x);
    if (o.disc < 1) continue;
    QuiverDatum datum = to_representation(x);
    KrausSet k = build_kraus(datum);
    Subrepresentation w = canonical_subrep(x, o.best_tuple);
    long long pairing = weight_pairing(datum.weight, w.dims());
    Witness wit = witness_from_subrep_general(k, w);
    REQUIRE(wit.gap() >= 1);
    GeneralRecovery rec = recover_general(k, datum, wit);
    CHECK(rec.pairing >= pairing);
    ++done;
  }
}
