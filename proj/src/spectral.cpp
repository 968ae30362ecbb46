#include "gsi/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace gsi {

OperatorMatrix assemble_operator(const WeightedGraph& graph) {
  const int n = graph.n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    double degree = 0.0;
    for (const auto& [y, w] : graph.adjacency()[x]) {
      A(x, y) = -w / graph.mu[x];
      degree += w;
    }
    A(x, x) = graph.q[x] + degree / graph.mu[x];
  }
  return {std::move(A), graph.mu};
}

namespace {

std::vector<EigenGroup> cluster_eigenvalues(const Eigen::VectorXd& lambda,
                                            double clusterTol) {
  std::vector<EigenGroup> groups;
  const int n = static_cast<int>(lambda.size());
  int first = 0;
  for (int j = 1; j <= n; ++j) {
    double tol = clusterTol >= 0.0
                     ? clusterTol
                     : 1e-8 * std::max(1.0, std::abs(lambda[j - 1]));
    if (j == n || lambda[j] - lambda[j - 1] > tol) {
      EigenGroup grp;
      grp.first = first;
      grp.count = j - first;
      grp.eigenvalue = lambda.segment(first, grp.count).mean();
      groups.push_back(grp);
      first = j;
    }
  }
  return groups;
}

}  // namespace

SpectralDecomposition eigendecompose(const OperatorMatrix& op,
                                     double clusterTol) {
  Eigen::VectorXd sqrtMu = op.mu.array().sqrt();
  Eigen::MatrixXd sym = sqrtMu.asDiagonal() * op.matrix *
                        sqrtMu.cwiseInverse().asDiagonal();
  sym = 0.5 * (sym + sym.transpose());  // drop round-off asymmetry
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecompose: symmetric eigensolver failed");

  SpectralDecomposition dec;
  dec.eigenvalues = solver.eigenvalues();
  dec.eigenvectors = sqrtMu.cwiseInverse().asDiagonal() * solver.eigenvectors();
  dec.mu = op.mu;
  dec.groups = cluster_eigenvalues(dec.eigenvalues, clusterTol);
  return dec;
}

InteriorSpectralData restrict_to_subset(const SpectralDecomposition& dec,
                                        const VertexSubset& B) {
  const int n = static_cast<int>(dec.eigenvalues.size());
  InteriorSpectralData data;
  data.B = B;
  data.eigenvalues = dec.eigenvalues;
  data.groups = dec.groups;
  data.phiOnB.resize(static_cast<int>(B.size()), n);
  for (size_t k = 0; k < B.size(); ++k) {
    int b = B[k];
    if (b < 0 || b >= dec.eigenvectors.rows())
      throw std::invalid_argument("restrict_to_subset: vertex id out of range");
    data.phiOnB.row(static_cast<int>(k)) = dec.eigenvectors.row(b);
  }
  return data;
}

UniqueContinuationResult unique_continuation_check(
    const SpectralDecomposition& dec, const VertexSubset& B, double tol) {
  const int m = static_cast<int>(B.size());
  const int n = static_cast<int>(dec.eigenvalues.size());
  Eigen::MatrixXd restriction(m, n);
  for (size_t k = 0; k < B.size(); ++k)
    restriction.row(static_cast<int>(k)) = dec.eigenvectors.row(B[k]);
  // The cut is scaled by the largest singular value of the FULL restriction
  // matrix: a group whose entire block is numerically zero must fail even
  // though it is trivially "full rank" relative to itself.
  double scale = m > 0 && n > 0
                     ? Eigen::JacobiSVD<Eigen::MatrixXd>(restriction)
                           .singularValues()(0)
                     : 0.0;
  double cut = tol * scale;
  for (const auto& grp : dec.groups) {
    if (m < grp.count) return {false, grp.eigenvalue};
    Eigen::MatrixXd block = restriction.middleCols(grp.first, grp.count);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    const auto& sigma = svd.singularValues();
    if (sigma.size() == 0 || sigma[sigma.size() - 1] <= cut)
      return {false, grp.eigenvalue};
  }
  return {true, std::nullopt};
}

std::vector<std::pair<double, Eigen::MatrixXd>> gram_matrices(
    const InteriorSpectralData& data) {
  std::vector<std::pair<double, Eigen::MatrixXd>> result;
  result.reserve(data.groups.size());
  for (const auto& grp : data.groups) {
    Eigen::MatrixXd block = data.phiOnB.middleCols(grp.first, grp.count);
    result.emplace_back(grp.eigenvalue, block * block.transpose());
  }
  return result;
}

bool spectral_data_equal(const InteriorSpectralData& a,
                         const InteriorSpectralData& b, double tol) {
  if (a.B.size() != b.B.size())
    throw std::invalid_argument("spectral_data_equal: |B| mismatch");
  if (a.phiOnB.cols() != b.phiOnB.cols()) return false;

  auto ga = gram_matrices(a);
  auto gb = gram_matrices(b);

  // Merge both group lists into shared clusters: while eigenvalues from
  // either side stay within tol of the cluster's running range, they belong
  // together. Comparing summed Gram matrices per cluster removes any
  // dependence on how ties were split into groups.
  size_t ia = 0, ib = 0;
  const int m = static_cast<int>(a.B.size());
  auto groupCols = [](const InteriorSpectralData& d, size_t i) {
    return d.groups[i].count;
  };
  while (ia < ga.size() || ib < gb.size()) {
    if (ia >= ga.size() || ib >= gb.size()) return false;
    double hi = std::min(ga[ia].first, gb[ib].first);
    Eigen::MatrixXd sumA = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd sumB = Eigen::MatrixXd::Zero(m, m);
    int colsA = 0, colsB = 0;
    bool grew = true;
    while (grew) {
      grew = false;
      if (ia < ga.size() && ga[ia].first <= hi + tol) {
        hi = std::max(hi, ga[ia].first);
        sumA += ga[ia].second;
        colsA += groupCols(a, ia);
        ++ia;
        grew = true;
      }
      if (ib < gb.size() && gb[ib].first <= hi + tol) {
        hi = std::max(hi, gb[ib].first);
        sumB += gb[ib].second;
        colsB += groupCols(b, ib);
        ++ib;
        grew = true;
      }
    }
    if (colsA != colsB) return false;
    if (colsA == 0) return false;
    if ((sumA - sumB).cwiseAbs().maxCoeff() > tol) return false;
  }
  return true;
}

}  // namespace gsi
