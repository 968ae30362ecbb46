#include <doctest.h>

#include <cmath>

#include "gsi/equivalence.hpp"
#include "gsi/fixtures.hpp"
#include "gsi/randwalk.hpp"
#include "support/test_util.hpp"

using namespace gsi;
using namespace gsi::testsupport;

namespace {

// The worked two-vertex example: c01 = 1, c00 = 1, c11 = 0.
WalkModel two_vertex_model() {
  Eigen::VectorXd stay(2);
  stay << 1.0, 0.0;
  return walk_from_conductances(make_combinatorial_graph(2, {{0, 1}}), {1.0},
                                stay);
}

}  // namespace

TEST_CASE("walk construction") {
  SUBCASE("two-vertex example") {
    WalkModel m = two_vertex_model();
    CHECK(m.mass[0] == 2.0);
    CHECK(m.mass[1] == 1.0);
    CHECK(m.P(0, 0) == doctest::Approx(0.5));
    CHECK(m.P(0, 1) == doctest::Approx(0.5));
    CHECK(m.P(1, 0) == doctest::Approx(1.0));
    CHECK(m.P(1, 1) == doctest::Approx(0.0));
  }
  SUBCASE("unit conductances walk uniformly over neighbors") {
    WeightedGraph star = make_combinatorial_graph(4, {{0, 1}, {0, 2}, {0, 3}});
    WalkModel m = walk_from_conductances(star, {1, 1, 1},
                                         Eigen::VectorXd::Zero(4));
    for (int y = 1; y < 4; ++y) CHECK(m.P(0, y) == doctest::Approx(1.0 / 3));
    CHECK(m.P(1, 0) == doctest::Approx(1.0));
  }
  SUBCASE("single vertex with staying weight") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    WalkModel m = walk_from_conductances(g, {}, Eigen::VectorXd::Ones(1));
    CHECK(m.P(0, 0) == 1.0);
  }
  SUBCASE("weights-to-walk") {
    WeightedGraph p2 = make_graph(2, {{0, 1}}, Eigen::Vector2d(2, 2), {1.0});
    WalkModel m = walk_from_weights(p2);
    CHECK(m.P(0, 0) == doctest::Approx(0.5));
    CHECK(m.P(0, 1) == doctest::Approx(0.5));

    AppendixPair pair = appendix_pair(4.0);
    WalkModel left = walk_from_weights(pair.left);
    CHECK(left.P(0, 2) == doctest::Approx(0.25));
    CHECK(left.P(3, 3) == doctest::Approx(0.0));  // degree-4 vertex

    // Exactly tight weights leave no staying probability.
    WeightedGraph tight = make_graph(2, {{0, 1}}, Eigen::Vector2d(1, 1), {1.0});
    WalkModel never = walk_from_weights(tight);
    CHECK(never.stay.cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS(walk_from_weights(path_graph(3)));  // mu = 1 < degree sum
  }
  SUBCASE("invalid conductances") {
    WeightedGraph p2 = make_combinatorial_graph(2, {{0, 1}});
    CHECK_THROWS(walk_from_conductances(p2, {0.0}, Eigen::VectorXd::Zero(2)));
    CHECK_THROWS(walk_from_conductances(
        p2, {1.0}, Eigen::VectorXd::Constant(2, -1.0)));
  }
}

TEST_CASE("occupation probabilities") {
  WalkModel m = two_vertex_model();
  Eigen::MatrixXd occ = occupation_probabilities(m, 0, 2);
  CHECK(occ(0, 0) == 1.0);
  CHECK(occ(2, 1) == doctest::Approx(0.25));  // stay then move

  Rng rng(73);
  WalkModel random = random_walk_model(6, rng);
  Eigen::MatrixXd rows = occupation_probabilities(random, 3, 40);
  for (int t = 0; t <= 40; ++t)
    CHECK(rows.row(t).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("first passage distributions") {
  WalkModel m = two_vertex_model();
  Eigen::VectorXd r01 = first_passage_exact(m, 0, 1, 12);
  for (int t = 1; t <= 12; ++t)
    CHECK(r01[t - 1] == doctest::Approx(std::pow(2.0, -t)).epsilon(1e-14));
  Eigen::VectorXd r11 = first_passage_exact(m, 1, 1, 4);
  CHECK(r11[0] == 0.0);
  CHECK(r11[1] == doctest::Approx(0.5));

  Rng rng(79);
  WalkModel random = random_walk_model(5, rng);
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      CHECK(first_passage_exact(random, x, y, 1)[0] ==
            doctest::Approx(random.P(x, y)));
}

TEST_CASE("renewal identity") {
  WalkModel m = two_vertex_model();
  VertexSubset B{0, 1};
  PassingTimeTable table = passing_time_table(m, B, 30);

  CHECK(renewal_occupation(table, 0, 1, 1) ==
        doctest::Approx(m.P(0, 1)));  // single term
  CHECK(renewal_occupation(table, 0, 1, 2) == doctest::Approx(0.25));

  Rng rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    WalkModel random = random_walk_model(4, rng);
    PassingTimeTable r = passing_time_table(random, {0, 1, 2, 3}, 12);
    for (int x = 0; x < 4; ++x) {
      Eigen::MatrixXd occ = occupation_probabilities(random, x, 8);
      for (int y = 0; y < 4; ++y)
        for (int T = 1; T <= 8; ++T) {
          double via = renewal_occupation(r, x, y, T);
          CHECK(via == doctest::Approx(occ(T, y)).epsilon(1e-12));
          CHECK(composition_sum_oracle(r, x, y, T) ==
                doctest::Approx(via).epsilon(1e-12));
        }
    }
  }

  CHECK_THROWS(renewal_occupation(table, 0, 1, 99));  // beyond horizon
  CHECK_THROWS(composition_sum_oracle(table, 0, 1, 13));
}

TEST_CASE("lazy transform of the model") {
  WalkModel m = two_vertex_model();
  WalkModel lazy = lazy_transform_model(m);
  CHECK(lazy.mass[0] == 4.0);
  CHECK(lazy.mass[1] == 2.0);
  CHECK(lazy.P(0, 0) == doctest::Approx(0.75));
  CHECK(lazy.P(0, 1) == doctest::Approx(0.25));
  CHECK(lazy.P(1, 0) == doctest::Approx(0.5));
  CHECK(lazy.P(1, 1) == doctest::Approx(0.5));

  // Not idempotent; the formula applies again.
  WalkModel twice = lazy_transform_model(lazy);
  CHECK((twice.P - 0.5 * (Eigen::MatrixXd::Identity(2, 2) + lazy.P))
            .cwiseAbs()
            .maxCoeff() < 1e-15);

  Rng rng(89);
  WalkModel random = random_walk_model(6, rng);
  WalkModel randomLazy = lazy_transform_model(random);
  for (int x = 0; x < 6; ++x) CHECK(randomLazy.P(x, x) >= 0.5);
}

TEST_CASE("lazy transform of the data") {
  SUBCASE("binomial delay weights") {
    auto q2 = lazy_delay_weights(2);
    auto q3 = lazy_delay_weights(3);
    CHECK(q2[1] == doctest::Approx(0.25));
    CHECK(q3[1] == doctest::Approx(0.25));
    // Rows keep their total mass of 1/2 (they are exact dyadics).
    for (int t : {1, 5, 40, 300}) {
      auto row = lazy_delay_weights(t);
      double sum = 0;
      for (double v : row) sum += v;
      CHECK(sum == doctest::Approx(0.5).epsilon(1e-15));
    }
  }
  SUBCASE("one-step values match the lazy chain") {
    WalkModel m = two_vertex_model();
    PassingTimeTable table = passing_time_table(m, {0, 1}, 20);
    PassingTimeTable lazy = lazy_transform_data(table, 18);
    WalkModel lazyModel = lazy_transform_model(m);
    CHECK(lazy.r[0](0, 1) == doctest::Approx(lazyModel.P(0, 1)));
    CHECK(lazy.r[0](1, 1) == doctest::Approx(lazyModel.P(1, 1)));
  }
  SUBCASE("data-side and model-side transforms commute") {
    Rng rng(97);
    for (int trial = 0; trial < 10; ++trial) {
      WalkModel random = random_walk_model(5, rng);
      VertexSubset B{0, 1, 2, 3, 4};
      PassingTimeTable viaData =
          lazy_transform_data(passing_time_table(random, B, 40), 40);
      PassingTimeTable viaModel =
          passing_time_table(lazy_transform_model(random), B, 40);
      for (int t = 0; t < 40; ++t)
        CHECK((viaData.r[t] - viaModel.r[t]).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("horizon guard") {
    WalkModel m = two_vertex_model();
    PassingTimeTable table = passing_time_table(m, {0, 1}, 5);
    CHECK_THROWS(lazy_transform_data(table, 6));
  }
}

TEST_CASE("stationary state") {
  WalkModel m = two_vertex_model();
  Eigen::VectorXd s = stationary_state(m);
  CHECK(s[0] == doctest::Approx(2.0 / 3));
  CHECK(s[1] == doctest::Approx(1.0 / 3));
  CHECK((stationary_state(lazy_transform_model(m)) - s).cwiseAbs().maxCoeff() <
        1e-15);

  // No staying weights and unit conductances: proportional to degree.
  WeightedGraph p3 = path_graph(3);
  WalkModel unit =
      walk_from_conductances(p3, {1, 1}, Eigen::VectorXd::Zero(3));
  Eigen::VectorXd sp = stationary_state(unit);
  CHECK(sp[1] == doctest::Approx(0.5));

  // Left fixed point of P.
  Rng rng(101);
  WalkModel random = random_walk_model(6, rng);
  Eigen::VectorXd pi = stationary_state(random);
  CHECK((pi.transpose() * random.P - pi.transpose()).cwiseAbs().maxCoeff() <
        1e-12);

  WeightedGraph disconnected = make_combinatorial_graph(2, {});
  CHECK_THROWS(stationary_state(
      walk_from_conductances(disconnected, {}, Eigen::VectorXd::Ones(2))));
}

TEST_CASE("walk recovery from passing times") {
  SUBCASE("worked two-vertex example, exact values") {
    WalkModel m = two_vertex_model();
    PassingTimeTable table = passing_time_table(m, {0, 1}, 2000);
    RecoveredWalkData rec = recover_walk_data_on_B(table, 2000);
    CHECK(rec.normalizationVertex == 0);
    CHECK(std::abs(rec.massA0[0] - 1.0) < 1e-9);
    CHECK(std::abs(rec.massA0[1] - 0.5) < 1e-9);
    CHECK(std::abs(rec.cA0(0, 1) - 0.25) < 1e-9);
    REQUIRE(rec.stayKnown[0]);
    REQUIRE(rec.stayKnown[1]);
    CHECK(std::abs(rec.cA0(0, 0) - 0.25) < 1e-9);
    CHECK(std::abs(rec.cA0(1, 1) - 0.0) < 1e-9);
  }
  SUBCASE("full observation recovers conductances up to one scalar") {
    Rng rng(103);
    for (int trial = 0; trial < 5; ++trial) {
      WalkModel model = random_walk_model(4, rng);
      VertexSubset B{0, 1, 2, 3};
      PassingTimeTable table = passing_time_table(model, B, 2000);
      RecoveredWalkData rec = recover_walk_data_on_B(table, 2000);
      // One global scalar links recovered and true conductances.
      double alpha = 0.0;
      int edges = 0;
      for (size_t k = 0; k < model.graph.edges.size(); ++k) {
        auto [i, j] = model.graph.edges[k];
        alpha += rec.cA0(i, j) / model.c[k];
        ++edges;
      }
      alpha /= edges;
      for (size_t k = 0; k < model.graph.edges.size(); ++k) {
        auto [i, j] = model.graph.edges[k];
        CHECK(std::abs(rec.cA0(i, j) - alpha * model.c[k]) < 1e-6);
      }
      for (int x = 0; x < 4; ++x) {
        REQUIRE(rec.stayKnown[x]);
        CHECK(std::abs(rec.cA0(x, x) - alpha * model.stay[x]) < 1e-6);
      }
    }
  }
  SUBCASE("gauge consistency: scaling all conductances changes nothing") {
    WalkModel m = two_vertex_model();
    Eigen::VectorXd stay(2);
    stay << 7.0, 0.0;
    WalkModel scaled = walk_from_conductances(
        make_combinatorial_graph(2, {{0, 1}}), {7.0}, stay);
    auto recA = recover_walk_data_on_B(passing_time_table(m, {0, 1}, 1500),
                                       1500);
    auto recB = recover_walk_data_on_B(
        passing_time_table(scaled, {0, 1}, 1500), 1500);
    CHECK((recA.massA0 - recB.massA0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((recA.cA0 - recB.cA0).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("the counterexample pair yields identical recovered data") {
    AppendixPair pair = appendix_pair(4.0);
    auto left = recover_walk_data_on_B(
        passing_time_table(walk_from_weights(pair.left), pair.B, 1200), 1200);
    auto right = recover_walk_data_on_B(
        passing_time_table(walk_from_weights(pair.right), pair.B, 1200),
        1200);
    CHECK((left.massA0 - right.massA0).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((left.cA0 - right.cA0).cwiseAbs().maxCoeff() < 1e-9);
    // v1 has neighbors outside B on both graphs.
    CHECK(!left.stayKnown[0]);
    CHECK(!right.stayKnown[0]);
  }
}

TEST_CASE("simulation and observation") {
  SUBCASE("single vertex never moves") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    WalkModel m = walk_from_conductances(g, {}, Eigen::VectorXd::Ones(1));
    auto traj = simulate(m, 0, 10, 42);
    for (int v : traj) CHECK(v == 0);
  }
  SUBCASE("deterministic swap alternates") {
    WalkModel m = walk_from_conductances(make_combinatorial_graph(2, {{0, 1}}),
                                         {1.0}, Eigen::VectorXd::Zero(2));
    auto traj = simulate(m, 0, 9, 7);
    for (size_t t = 0; t < traj.size(); ++t)
      CHECK(traj[t] == static_cast<int>(t % 2));
  }
  SUBCASE("same seed, same trajectory") {
    Rng rng(107);
    WalkModel m = random_walk_model(5, rng);
    CHECK(simulate(m, 2, 1000, 99) == simulate(m, 2, 1000, 99));
    CHECK(simulate(m, 2, 1000, 99) != simulate(m, 2, 1000, 100));
  }
  SUBCASE("empirical first-passage histogram matches the exact law") {
    WalkModel m = two_vertex_model();
    Eigen::VectorXd exact = first_passage_exact(m, 0, 1, 6);
    const int runs = 100000;
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(6);
    for (int run = 0; run < runs; ++run) {
      auto traj = simulate(m, 0, 6, 1000 + run);
      for (int t = 1; t <= 6; ++t)
        if (traj[t] == 1) {
          counts[t - 1] += 1;
          break;
        }
    }
    for (int t = 1; t <= 6; ++t) {
      double p = exact[t - 1];
      double se = std::sqrt(p * (1 - p) / runs);
      CHECK(std::abs(counts[t - 1] / runs - p) < 4 * se + 1e-12);
    }
  }
  SUBCASE("observation masks vertices outside B") {
    std::vector<int> traj{0, 1, 2, 1, 0};
    ObservedTrajectory obs = observe_on_B(traj, {0, 2});
    CHECK(obs.symbols == std::vector<int>{0, kHiddenState, 2, kHiddenState, 0});
    CHECK(observe_on_B(traj, {0, 1, 2}).symbols == traj);
    for (int s : observe_on_B(traj, {}).symbols) CHECK(s == kHiddenState);
  }
}

TEST_CASE("single-realization estimator") {
  SUBCASE("deterministic swap is certain") {
    WalkModel m = walk_from_conductances(make_combinatorial_graph(2, {{0, 1}}),
                                         {1.0}, Eigen::VectorXd::Zero(2));
    auto obs = observe_on_B(simulate(m, 0, 2000, 5), {0, 1});
    auto est = estimate_occupation_from_realization(obs, 1, 1, 2);
    CHECK(est.estimate == 1.0);
    CHECK(est.count >= 10);
  }
  SUBCASE("single vertex") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    WalkModel m = walk_from_conductances(g, {}, Eigen::VectorXd::Ones(1));
    auto obs = observe_on_B(simulate(m, 0, 500, 5), {0});
    auto est = estimate_occupation_from_realization(obs, 0, 0, 3);
    CHECK(est.estimate == 1.0);
  }
  SUBCASE("estimates approach the exact occupation probabilities") {
    WalkModel lazy = lazy_transform_model(two_vertex_model());
    auto obs = observe_on_B(simulate(lazy, 0, 1000000, 12345), {0, 1});
    for (int y = 0; y < 2; ++y) {
      Eigen::MatrixXd occ = occupation_probabilities(lazy, y, 4);
      for (int z = 0; z < 2; ++z)
        for (int T = 1; T <= 4; ++T) {
          auto est = estimate_occupation_from_realization(obs, y, z, T);
          CHECK(std::abs(est.estimate - occ(T, z)) <
                5.0 / std::sqrt(static_cast<double>(est.count)));
        }
    }
  }
  SUBCASE("too few samples is an error") {
    std::vector<int> tiny{0, 1, 0, 1};
    auto obs = observe_on_B(tiny, {0, 1});
    CHECK_THROWS(estimate_occupation_from_realization(obs, 1, 0, 1));
  }
}

TEST_CASE("passing times to heat data") {
  SUBCASE("single vertex gives the constant-1 table") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    WalkModel m = walk_from_conductances(g, {}, Eigen::VectorXd::Ones(1));
    PassingTimeTable r = passing_time_table(m, {0}, 64);
    HeatKernelTable table = passing_to_heat_table(r, 10, 64);
    for (int t = 0; t <= 10; ++t)
      CHECK(table.frames[t](0, 0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("full observation reproduces the probability kernel") {
    Rng rng(109);
    WalkModel model = random_walk_model(4, rng);
    VertexSubset B{0, 1, 2, 3};
    PassingTimeTable r = passing_time_table(model, B, 1500);
    HeatKernelTable table = passing_to_heat_table(r, 10, 1500);
    for (int x = 0; x < 4; ++x) {
      Eigen::MatrixXd occ = occupation_probabilities(model, x, 10);
      for (int t = 0; t <= 10; ++t)
        for (int z = 0; z < 4; ++z)
          CHECK(table.frames[t](x, z) * table.muOnB[z] ==
                doctest::Approx(occ(t, z)).epsilon(1e-8));
    }
  }
  SUBCASE("feeding the extractor recovers the gauge-fixed spectrum") {
    // End-to-end on P3: passing times -> heat table -> spectral data of the
    // walk Laplacian in the recovered gauge.
    WalkModel model = walk_from_conductances(
        path_graph(3), {1.0, 1.0}, Eigen::VectorXd::Constant(3, 0.5));
    VertexSubset B{0, 1, 2};
    PassingTimeTable r = passing_time_table(model, B, 1500);
    HeatKernelTable table = passing_to_heat_table(r, 2 * 3 + 2, 1500);
    auto ext = extract_spectral_discrete(table, 3, 1e-7);

    RecoveredWalkData rec = recover_walk_data_on_B(r, 1500);
    Eigen::VectorXd muStar = rec.massA0;
    std::vector<double> gStar;
    for (auto [i, j] : model.graph.edges)
      gStar.push_back(2.0 * rec.cA0(i, j));
    WeightedGraph gauge =
        make_graph(3, model.graph.edges, muStar, gStar);
    auto truth = restrict_to_subset(
        eigendecompose(assemble_operator(gauge)), B);
    CHECK(spectral_data_equal(ext.data, truth, 1e-5));
  }
}

TEST_CASE("brute-force identification") {
  WalkModel p3walk = walk_from_conductances(path_graph(3), {1.0, 1.0},
                                            Eigen::VectorXd::Zero(3));
  WalkModel p2walk = walk_from_conductances(
      make_combinatorial_graph(2, {{0, 1}}), {1.0}, Eigen::VectorXd::Zero(2));
  WalkModel c4walk = walk_from_conductances(cycle_graph(4), {1, 1, 1, 1},
                                            Eigen::VectorXd::Zero(4));
  std::vector<CandidateModel> candidates = {
      {p2walk, {0, 1}}, {p3walk, {0, 2}}, {c4walk, {0, 1}}};

  PassingTimeTable data = passing_time_table(p3walk, {0, 2}, 8);
  CHECK(brute_force_identify(data, candidates, 1e-10) ==
        std::vector<int>{1});

  // Observed at ANTIPODAL vertices, the C4 walk folds onto the P3 walk
  // (reflection symmetry identifies the two middle vertices), so that
  // candidate placement would be a genuine impostor. C4 fails the
  // two-points condition at {0,2}, so uniqueness within the condition's
  // class is untouched.
  PassingTimeTable folded = passing_time_table(c4walk, {0, 2}, 8);
  for (int t = 0; t < 8; ++t)
    CHECK((folded.r[t] - data.r[t]).cwiseAbs().maxCoeff() < 1e-15);

  // The isospectral pair stays indistinguishable.
  AppendixPair pair = appendix_pair(4.0);
  std::vector<CandidateModel> isopair = {
      {walk_from_weights(pair.left), pair.B},
      {walk_from_weights(pair.right), pair.B}};
  PassingTimeTable fromLeft =
      passing_time_table(isopair[0].model, pair.B, 24);
  CHECK(brute_force_identify(fromLeft, isopair, 1e-12) ==
        std::vector<int>{0, 1});

  CHECK_THROWS(brute_force_identify(data, {}, 1e-8));
}
