#include <doctest.h>

#include <cmath>
#include <complex>

#include "gsi/equivalence.hpp"
#include "gsi/fixtures.hpp"
#include "support/test_util.hpp"

using namespace gsi;
using namespace gsi::testsupport;

TEST_CASE("matrix pencil on a hand-built signal") {
  // 2 * 0.5^t - 3 * (-0.25)^t
  Eigen::VectorXcd signal(10);
  for (int t = 0; t < 10; ++t)
    signal[t] = 2.0 * std::pow(0.5, t) - 3.0 * std::pow(-0.25, t);
  PencilResult res = matrix_pencil(signal, 4, 1e-10);
  REQUIRE(res.order == 2);
  std::vector<double> bases;
  for (auto b : res.bases) bases.push_back(b.real());
  std::sort(bases.begin(), bases.end());
  CHECK(bases[0] == doctest::Approx(-0.25).epsilon(1e-10));
  CHECK(bases[1] == doctest::Approx(0.5).epsilon(1e-10));

  CHECK_THROWS(matrix_pencil(signal, 1, 1e-10));  // order overflow
  CHECK_THROWS(matrix_pencil(signal.head(3), 4, 1e-10));  // too few samples
}

TEST_CASE("discrete extraction") {
  SUBCASE("single vertex") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    auto table = heat_kernel_table(g, {0}, 5, KernelMode::Discrete);
    auto ext = extract_spectral_discrete(table, 1);
    REQUIRE(ext.data.eigenvalues.size() == 1);
    CHECK(ext.data.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(ext.data.phiOnB(0, 0)) == doctest::Approx(1.0));
  }
  SUBCASE("P2 with both vertices observed") {
    auto table = heat_kernel_table(path_graph(2), {0, 1}, 7,
                                   KernelMode::Discrete);
    auto ext = extract_spectral_discrete(table, 2);
    REQUIRE(ext.data.eigenvalues.size() == 2);
    CHECK(ext.data.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(ext.data.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-8));
    auto grams = gram_matrices(ext.data);
    Eigen::Matrix2d q1, q2;
    q1 << 0.5, 0.5, 0.5, 0.5;
    q2 << 0.5, -0.5, -0.5, 0.5;
    CHECK((grams[0].second - q1).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((grams[1].second - q2).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("P3 exercises the eigenvalue-1 completion") {
    auto table = heat_kernel_table(path_graph(3), {0, 2}, 9,
                                   KernelMode::Discrete);
    auto ext = extract_spectral_discrete(table, 3);
    REQUIRE(ext.data.groups.size() == 3);
    CHECK(ext.data.groups[1].eigenvalue == doctest::Approx(1.0));
    // The completed group was reported with base zero.
    bool sawZeroBase = false;
    for (auto& mode : ext.poles.modes)
      if (std::abs(mode.base) < 1e-12) sawZeroBase = true;
    CHECK(sawZeroBase);
  }
  SUBCASE("the isospectral pair produces one pole estimate") {
    AppendixPair pair = appendix_pair();
    auto left = extract_spectral_discrete(
        heat_kernel_table(pair.left, pair.B, 14, KernelMode::Discrete), 6);
    auto right = extract_spectral_discrete(
        heat_kernel_table(pair.right, pair.B, 14, KernelMode::Discrete), 6);
    REQUIRE(left.poles.modes.size() == right.poles.modes.size());
    for (size_t k = 0; k < left.poles.modes.size(); ++k) {
      CHECK(std::abs(left.poles.modes[k].base - right.poles.modes[k].base) <
            1e-7);
      CHECK((left.poles.modes[k].residue - right.poles.modes[k].residue)
                .cwiseAbs()
                .maxCoeff() < 1e-7);
    }
    CHECK(spectral_data_equal(left.data, right.data, 1e-7));
  }
  SUBCASE("horizon and order guards") {
    auto table = heat_kernel_table(path_graph(3), {0, 2}, 4,
                                   KernelMode::Discrete);
    CHECK_THROWS(extract_spectral_discrete(table, 3));  // horizon too short
    auto longer = heat_kernel_table(path_graph(3), {0, 1, 2}, 8,
                                    KernelMode::Discrete);
    CHECK_THROWS(extract_spectral_discrete(longer, 1));  // nMax too small
  }
}

TEST_CASE("continuous extraction") {
  SUBCASE("P2 at dt = 0.1 over 40 samples") {
    auto table = heat_kernel_table(path_graph(2), {0, 1}, 40,
                                   KernelMode::Continuous, 0.1);
    auto ext = extract_spectral_continuous(table, 2);
    REQUIRE(ext.data.eigenvalues.size() == 2);
    CHECK(ext.data.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(std::abs(ext.data.eigenvalues[1] - 2.0) < 1e-7);
  }
  SUBCASE("single vertex with potential c recovers lambda = c") {
    WeightedGraph g = make_graph(1, {}, Eigen::VectorXd::Ones(1), {},
                                 Eigen::VectorXd::Constant(1, 1.7));
    auto table = heat_kernel_table(g, {0}, 6, KernelMode::Continuous, 0.3);
    auto ext = extract_spectral_continuous(table, 1);
    CHECK(ext.data.eigenvalues[0] == doctest::Approx(1.7).epsilon(1e-10));
  }
  SUBCASE("appendix left graph: rank-1 residue at the double eigenvalue") {
    AppendixPair pair = appendix_pair();
    auto table = heat_kernel_table(pair.left, pair.B, 20,
                                   KernelMode::Continuous, 0.25);
    auto ext = extract_spectral_continuous(table, 6);
    REQUIRE(ext.data.groups.size() == 5);
    for (int j = 0; j < 5; ++j)
      CHECK(std::abs(ext.data.groups[j].eigenvalue -
                     pair.exactGramOnB[j].first) < 1e-6);
    CHECK(ext.data.groups[3].count == 1);  // eigenvalue 3 drops to rank 1
  }
}

TEST_CASE("schrodinger extraction") {
  SUBCASE("single vertex") {
    WeightedGraph g = make_combinatorial_graph(1, {});
    auto table = heat_kernel_table(g, {0}, 5, KernelMode::Schrodinger, 0.3);
    auto ext = extract_spectral_schrodinger(table, 1);
    CHECK(std::abs(ext.data.eigenvalues[0]) < 1e-10);
  }
  SUBCASE("P2 at dt = 0.1") {
    auto table = heat_kernel_table(path_graph(2), {0, 1}, 20,
                                   KernelMode::Schrodinger, 0.1);
    auto ext = extract_spectral_schrodinger(table, 2);
    REQUIRE(ext.data.eigenvalues.size() == 2);
    CHECK(std::abs(ext.data.eigenvalues[0]) < 1e-7);
    CHECK(std::abs(ext.data.eigenvalues[1] - 2.0) < 1e-7);
  }
  SUBCASE("P3 observed at both ends") {
    auto table = heat_kernel_table(path_graph(3), {0, 2}, 20,
                                   KernelMode::Schrodinger, 0.05);
    auto ext = extract_spectral_schrodinger(table, 3);
    REQUIRE(ext.data.eigenvalues.size() == 3);
    CHECK(std::abs(ext.data.eigenvalues[0] - 0.0) < 1e-6);
    CHECK(std::abs(ext.data.eigenvalues[1] - 1.0) < 1e-6);
    CHECK(std::abs(ext.data.eigenvalues[2] - 3.0) < 1e-6);
  }
}

TEST_CASE("residue factorization") {
  SUBCASE("rank-one matrix") {
    Eigen::Matrix2d Q;
    Q << 0.5, 0.5, 0.5, 0.5;
    Eigen::MatrixXd A = factor_residue(Q, 1e-10);
    REQUIRE(A.cols() == 1);
    CHECK((A * A.transpose() - Q).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(A(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  SUBCASE("zero matrix factors to nothing") {
    Eigen::MatrixXd A = factor_residue(Eigen::Matrix3d::Zero(), 1e-10);
    CHECK(A.cols() == 0);
  }
  SUBCASE("reconstruction on small PSD fixtures") {
    for (double v : {1.0 / 8, 2.0 / 15}) {
      Eigen::Matrix2d Q;
      Q << v, v, v, v;
      Eigen::MatrixXd A = factor_residue(Q, 1e-10);
      REQUIRE(A.cols() == 1);
      CHECK((A * A.transpose() - Q).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("negative eigenvalue beyond tolerance is rejected") {
    Eigen::Matrix2d bad;
    bad << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS(factor_residue(bad, 1e-10));
  }
}

TEST_CASE("synthesis is the right inverse of extraction") {
  SUBCASE("round trip on P2") {
    auto table = heat_kernel_table(path_graph(2), {0, 1}, 7,
                                   KernelMode::Discrete);
    auto ext = extract_spectral_discrete(table, 2);
    auto back = synthesize_table(ext.data, KernelMode::Discrete, 7, 1.0);
    for (int t = 0; t <= 7; ++t)
      CHECK((back.frames[t] - table.frames[t]).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((back.muOnB - table.muOnB).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("single zero eigenvalue produces a constant table") {
    InteriorSpectralData data;
    data.B = {0};
    data.eigenvalues = Eigen::VectorXd::Zero(1);
    data.phiOnB = Eigen::MatrixXd::Constant(1, 1, 1.0);
    data.groups = {{0.0, 0, 1}};
    auto table = synthesize_table(data, KernelMode::Discrete, 5, 1.0);
    for (int t = 0; t <= 5; ++t)
      CHECK(table.frames[t](0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("left-graph data synthesizes the right graph's table") {
    AppendixPair pair = appendix_pair();
    auto leftData = extract_spectral_discrete(
        heat_kernel_table(pair.left, pair.B, 14, KernelMode::Discrete), 6);
    auto synth = synthesize_table(leftData.data, KernelMode::Discrete, 10, 1.0);
    auto right =
        heat_kernel_table(pair.right, pair.B, 10, KernelMode::Discrete);
    for (int t = 0; t <= 10; ++t)
      CHECK((synth.frames[t] - right.frames[t]).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("round trip on random graphs with unique continuation") {
  Rng rng(67);
  int done = 0;
  while (done < 10) {
    int n = 3 + static_cast<int>(rng() % 6);
    WeightedGraph graph = random_walk_weight_graph(n, rng);
    auto dec = eigendecompose(assemble_operator(graph));
    // Reject near-degenerate spectra: the forward fixture should be
    // well-posed for a 1e-7 target.
    bool spaced = true;
    for (int j = 1; j < n; ++j)
      if (dec.eigenvalues[j] - dec.eigenvalues[j - 1] < 5e-2) spaced = false;
    if (!spaced) continue;
    VertexSubset B;
    for (int v = 0; v < n; ++v)
      if (rng() % 2) B.push_back(v);
    if (B.empty()) B.push_back(0);
    if (!unique_continuation_check(dec, B).holds) continue;
    auto truth = restrict_to_subset(dec, B);

    auto table = heat_kernel_table(graph, B, 2 * n + 2, KernelMode::Discrete);
    auto ext = extract_spectral_discrete(table, n, 1e-13);
    CHECK(spectral_data_equal(ext.data, truth, 1e-7));
    ++done;
  }
}

TEST_CASE("extraction depends only on the table (gauge invariance)") {
  Rng rng(71);
  WeightedGraph graph = random_walk_weight_graph(5, rng);
  const double c = 2.5;
  std::vector<double> g2 = graph.g;
  for (auto& w : g2) w *= c;
  WeightedGraph scaled =
      make_graph(graph.n, graph.edges, c * graph.mu, g2, graph.q);

  VertexSubset B{0, 1, 2, 3, 4};
  auto a = heat_kernel_table(graph, B, 12, KernelMode::Discrete);
  auto ext = extract_spectral_discrete(a, 5);
  auto b = heat_kernel_table(scaled, B, 12, KernelMode::Discrete);
  // Same operator, so the same bases; residues scale with the table.
  auto ext2 = extract_spectral_discrete(b, 5);
  REQUIRE(ext.poles.modes.size() == ext2.poles.modes.size());
  for (size_t k = 0; k < ext.poles.modes.size(); ++k)
    CHECK(std::abs(ext.poles.modes[k].base - ext2.poles.modes[k].base) <
          1e-9);
  // And the scaled table matches the data of the scaled decomposition.
  auto decScaled = eigendecompose(assemble_operator(scaled));
  CHECK(spectral_data_equal(ext2.data, restrict_to_subset(decScaled, B),
                            1e-7));
}
