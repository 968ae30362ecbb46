#include "gsi/fixtures.hpp"

#include <cmath>
#include <stdexcept>

#include "gsi/randwalk.hpp"
#include "gsi/spectral.hpp"

namespace gsi {

AppendixPair appendix_pair(double C) {
  if (!(C > 0.0)) throw std::invalid_argument("appendix_pair: C must be > 0");
  AppendixPair pair;
  // Vertex naming: v1, v2 are the observation vertices (ids 0, 1). Left
  // graph: v3 upper left, v4 lower middle (degree 4), v5, v6 on the right.
  // Right graph: v3, v5, v6 the lower row, v4 upper right, v6 of degree 1.
  pair.left = make_graph(
      6, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {3, 4}, {3, 5}, {4, 5}},
      Eigen::VectorXd::Constant(6, C), std::vector<double>(7, 1.0));
  pair.right = make_graph(
      6, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}, {3, 4}, {4, 5}},
      Eigen::VectorXd::Constant(6, C), std::vector<double>(7, 1.0));
  pair.B = {0, 1};

  const double s5 = std::sqrt(5.0);
  pair.exactEigenvalues.resize(6);
  pair.exactEigenvalues << 0.0, 3.0 - s5, 2.0, 3.0, 3.0, 3.0 + s5;
  pair.exactEigenvalues /= C;

  // Gram blocks of the orthonormalized eigenbasis restricted to B. The
  // double eigenvalue 3 contributes rank one on B: after orthogonalizing
  // the printed basis, the surviving direction has weight 2/15 per entry.
  auto ones = [](double v) {
    Eigen::Matrix2d M;
    M << v, v, v, v;
    return M;
  };
  Eigen::Matrix2d alt;
  alt << 0.5, -0.5, -0.5, 0.5;
  pair.exactGramOnB = {
      {0.0, ones(1.0 / 6.0) / C},
      {(3.0 - s5) / C, ones(1.0 / 10.0) / C},
      {2.0 / C, alt / C},
      {3.0 / C, ones(2.0 / 15.0) / C},
      {(3.0 + s5) / C, ones(1.0 / 10.0) / C},
  };
  return pair;
}

IsospectralReport verify_isospectral_pair(double C, bool requireWalk) {
  AppendixPair pair = appendix_pair(C);
  IsospectralReport report;
  report.C = C;

  auto dataOf = [&](const WeightedGraph& graph) {
    return restrict_to_subset(eigendecompose(assemble_operator(graph)),
                              pair.B);
  };
  InteriorSpectralData left = dataOf(pair.left);
  InteriorSpectralData right = dataOf(pair.right);
  report.spectralEqual = spectral_data_equal(left, right, 1e-10);

  for (const auto& data : {left, right}) {
    for (int j = 0; j < 6; ++j)
      report.maxEigenvalueError =
          std::max(report.maxEigenvalueError,
                   std::abs(data.eigenvalues[j] - pair.exactEigenvalues[j]));
    auto grams = gram_matrices(data);
    if (grams.size() != pair.exactGramOnB.size())
      throw std::runtime_error(
          "verify_isospectral_pair: unexpected multiplicity structure");
    for (size_t k = 0; k < grams.size(); ++k)
      report.maxGramError = std::max(
          report.maxGramError, (grams[k].second - pair.exactGramOnB[k].second)
                                   .cwiseAbs()
                                   .maxCoeff());
  }

  if (C >= 4.0) {
    report.walkChecked = true;
    WalkModel walkLeft = walk_from_weights(pair.left);
    WalkModel walkRight = walk_from_weights(pair.right);
    for (int y : pair.B) {
      Eigen::MatrixXd occL =
          occupation_probabilities(walkLeft, y, report.walkHorizon);
      Eigen::MatrixXd occR =
          occupation_probabilities(walkRight, y, report.walkHorizon);
      for (int t = 0; t <= report.walkHorizon; ++t)
        for (int z : pair.B)
          report.maxWalkDifference = std::max(
              report.maxWalkDifference, std::abs(occL(t, z) - occR(t, z)));
    }
  } else if (requireWalk) {
    throw std::invalid_argument(
        "verify_isospectral_pair: the walk comparison needs C >= 4 (the "
        "degree-4 vertex leaves no staying probability below that)");
  }
  return report;
}

}  // namespace gsi
