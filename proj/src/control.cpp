#include "gsi/control.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace gsi {

namespace {

constexpr double kRankCut = 1e-9;  // relative singular value threshold

Eigen::MatrixXd step_matrix(const WeightedGraph& graph) {
  OperatorMatrix op = assemble_operator(graph);
  return Eigen::MatrixXd::Identity(graph.n, graph.n) - op.matrix;
}

// Impulse-response matrix: column (z, s) holds (I-A)^{T-1-s} delta_z, the
// end state produced by a unit source at (z, s). Column order: z-major in
// B's order, s = 0..T-1 inside.
Eigen::MatrixXd impulse_response_matrix(const WeightedGraph& graph,
                                        const VertexSubset& B, int T) {
  const int n = graph.n;
  Eigen::MatrixXd M = step_matrix(graph);
  std::vector<Eigen::MatrixXd> powers(T);  // powers[k] = M^k
  powers[0] = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k < T; ++k) powers[k] = M * powers[k - 1];

  Eigen::MatrixXd W(n, static_cast<int>(B.size()) * T);
  int col = 0;
  for (int z : B)
    for (int s = 0; s < T; ++s) W.col(col++) = powers[T - 1 - s].col(z);
  return W;
}

// Solve the group system Phi_J w_J = b_J for the coefficients of one
// eigenvalue cluster; Phi_J has full column rank exactly under UC.
void solve_group(const InteriorSpectralData& data, const EigenGroup& grp,
                 const Eigen::VectorXd& rhs, Eigen::VectorXd& out,
                 bool& singular) {
  Eigen::MatrixXd phi = data.phiOnB.middleCols(grp.first, grp.count);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      phi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma[sigma.size() - 1] <= kRankCut * sigma[0])
    singular = true;
  out.segment(grp.first, grp.count) = svd.solve(rhs);
}

}  // namespace

CoefficientVector extract_coefficients_discrete(
    const Eigen::MatrixXd& measurement, const InteriorSpectralData& data,
    CoefficientMethod method, int tMax) {
  const int m = static_cast<int>(data.B.size());
  const int cols = static_cast<int>(measurement.cols());
  const int nCoeff = static_cast<int>(data.eigenvalues.size());
  if (measurement.rows() != m)
    throw std::invalid_argument(
        "extract_coefficients_discrete: measurement rows must match |B|");

  CoefficientVector result;
  result.method = method;
  result.values = Eigen::VectorXd::Zero(nCoeff);

  if (method == CoefficientMethod::ExactSolve) {
    // Identifiability needs about n time steps; more rows only make the
    // powers swing harder, so cap the window and equilibrate rows.
    const int K = std::min(cols, 2 * nCoeff + 2);
    Eigen::MatrixXd design(m * K, nCoeff);
    Eigen::VectorXd rhs(m * K);
    for (int t = 0; t < K; ++t)
      for (int i = 0; i < m; ++i) {
        int row = t * m + i;
        for (int j = 0; j < nCoeff; ++j)
          design(row, j) =
              std::pow(1.0 - data.eigenvalues[j], t) * data.phiOnB(i, j);
        rhs[row] = measurement(i, t);
      }
    for (int row = 0; row < design.rows(); ++row) {
      double scale = design.row(row).cwiseAbs().maxCoeff();
      if (scale > 0) {
        design.row(row) /= scale;
        rhs[row] /= scale;
      }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    result.conditioning =
        sigma[0] > 0 ? sigma[sigma.size() - 1] / sigma[0] : 0.0;
    result.singular = sigma[0] == 0.0 ||
                      sigma[sigma.size() - 1] <= kRankCut * sigma[0];
    result.values = svd.solve(rhs);
    return result;
  }

  // Limit method: process groups by descending |1 - lambda|; the base-0
  // (eigenvalue 1) groups are completed from the t = 0 residual afterwards.
  std::vector<int> order(data.groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(1.0 - data.groups[a].eigenvalue) >
           std::abs(1.0 - data.groups[b].eigenvalue);
  });

  auto reconstruct = [&](int t) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < nCoeff; ++j)
      if (result.values[j] != 0.0)
        acc += std::pow(1.0 - data.eigenvalues[j], t) * result.values[j] *
               data.phiOnB.col(j);
    return acc;
  };

  for (int gi : order) {
    const EigenGroup& grp = data.groups[gi];
    double base = 1.0 - grp.eigenvalue;
    if (std::abs(base) < 1e-12) continue;  // eigenvalue-1: handled at the end

    Eigen::VectorXd previousAvg = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd peeled = Eigen::VectorXd::Zero(m);
    int stable = 0;
    bool haveEstimate = false;
    double invPow = 1.0;  // base^{-t}
    Eigen::VectorXd cCur(m), cNext(m);
    cCur = measurement.col(0) - reconstruct(0);
    for (int t = 0; t + 1 < std::min(static_cast<int>(measurement.cols()),
                                     tMax);
         ++t) {
      cNext = (measurement.col(t + 1) - reconstruct(t + 1)) * (invPow / base);
      // Averaging consecutive times cancels the mirrored base -(1-lambda_J).
      Eigen::VectorXd avg = 0.5 * (cCur + cNext);
      if (haveEstimate &&
          (avg - previousAvg).cwiseAbs().maxCoeff() < 1e-6) {
        if (++stable >= 5) {
          peeled = avg;
          break;
        }
      } else {
        stable = 0;
      }
      previousAvg = avg;
      peeled = avg;
      haveEstimate = true;
      cCur = cNext;
      invPow /= base;
    }
    if (stable < 5) result.converged = false;
    solve_group(data, grp, peeled, result.values, result.singular);
  }

  // Eigenvalue-1 completion from the t = 0 residual.
  for (const auto& grp : data.groups) {
    if (std::abs(1.0 - grp.eigenvalue) >= 1e-12) continue;
    Eigen::VectorXd residual = measurement.col(0) - reconstruct(0);
    solve_group(data, grp, residual, result.values, result.singular);
  }
  return result;
}

CoefficientVector extract_coefficients_continuous(
    const Eigen::MatrixXd& measurement, double dt,
    const InteriorSpectralData& data, CoefficientMethod method) {
  const int m = static_cast<int>(data.B.size());
  const int cols = static_cast<int>(measurement.cols());
  const int nCoeff = static_cast<int>(data.eigenvalues.size());
  if (measurement.rows() != m)
    throw std::invalid_argument(
        "extract_coefficients_continuous: measurement rows must match |B|");
  if (!(dt > 0))
    throw std::invalid_argument("extract_coefficients_continuous: dt <= 0");

  CoefficientVector result;
  result.method = method;
  result.values = Eigen::VectorXd::Zero(nCoeff);

  if (method == CoefficientMethod::ExactSolve) {
    Eigen::MatrixXd design(m * cols, nCoeff);
    Eigen::VectorXd rhs(m * cols);
    for (int k = 0; k < cols; ++k)
      for (int i = 0; i < m; ++i) {
        int row = k * m + i;
        for (int j = 0; j < nCoeff; ++j)
          design(row, j) =
              std::exp(-data.eigenvalues[j] * k * dt) * data.phiOnB(i, j);
        rhs[row] = measurement(i, k);
      }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        design, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    result.conditioning =
        sigma[0] > 0 ? sigma[sigma.size() - 1] / sigma[0] : 0.0;
    result.singular = sigma[0] == 0.0 ||
                      sigma[sigma.size() - 1] <= kRankCut * sigma[0];
    result.values = svd.solve(rhs);
    return result;
  }

  // Limit method: slowest-decaying group first (ascending eigenvalues).
  auto reconstruct = [&](int k) {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < nCoeff; ++j)
      if (result.values[j] != 0.0)
        acc += std::exp(-data.eigenvalues[j] * k * dt) * result.values[j] *
               data.phiOnB.col(j);
    return acc;
  };
  for (const auto& grp : data.groups) {
    Eigen::VectorXd previous = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd peeled = Eigen::VectorXd::Zero(m);
    int stable = 0;
    bool have = false;
    for (int k = 0; k < cols; ++k) {
      Eigen::VectorXd c = (measurement.col(k) - reconstruct(k)) *
                          std::exp(grp.eigenvalue * k * dt);
      if (have && (c - previous).cwiseAbs().maxCoeff() < 1e-6) {
        if (++stable >= 5) {
          peeled = c;
          break;
        }
      } else {
        stable = 0;
      }
      previous = c;
      peeled = c;
      have = true;
    }
    if (stable < 5) result.converged = false;
    solve_group(data, grp, peeled, result.values, result.singular);
  }
  return result;
}

ReachabilityResult reachability_rank(const WeightedGraph& graph,
                                     const VertexSubset& B, int T) {
  if (T < 1) throw std::invalid_argument("reachability_rank: T < 1");
  Eigen::MatrixXd W = impulse_response_matrix(graph, B, T);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
  const auto& sigma = svd.singularValues();
  int rank = 0;
  if (sigma.size() > 0 && sigma[0] > 0)
    for (int k = 0; k < sigma.size(); ++k)
      if (sigma[k] > kRankCut * sigma[0]) ++rank;
  return {rank, graph.n};
}

ControlResult synthesize_control(const WeightedGraph& graph,
                                 const VertexSubset& B, int T,
                                 const Eigen::VectorXd& target, double tol) {
  if (T < 1) throw std::invalid_argument("synthesize_control: T < 1");
  if (target.size() != graph.n)
    throw std::invalid_argument("synthesize_control: target size");
  Eigen::MatrixXd W = impulse_response_matrix(graph, B, T);
  // Minimum-norm least squares via the SVD pseudoinverse.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(
      W, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(kRankCut);
  Eigen::VectorXd f = svd.solve(target);
  f += svd.solve(target - W * f);  // one refinement pass against conditioning

  ControlResult result;
  result.residual = (W * f - target).norm();
  result.reachable = result.residual <= tol * std::max(1.0, target.norm());
  result.source.support = B;
  result.source.horizon = T;
  result.source.values.resize(static_cast<int>(B.size()), T);
  int col = 0;
  for (int zi = 0; zi < static_cast<int>(B.size()); ++zi)
    for (int s = 0; s < T; ++s) result.source.values(zi, s) = f[col++];
  return result;
}

FieldHistory adjoint_backward_solve(const WeightedGraph& graph,
                                    const Eigen::VectorXd& v, int T) {
  if (T < 1) throw std::invalid_argument("adjoint_backward_solve: T < 1");
  if (v.size() != graph.n)
    throw std::invalid_argument("adjoint_backward_solve: end state size");
  Eigen::MatrixXd M = step_matrix(graph);
  FieldHistory out;
  out.values.resize(graph.n, T + 1);
  out.values.col(T) = v;
  for (int t = T; t >= 1; --t)
    out.values.col(t - 1) = M * out.values.col(t);
  return out;
}

}  // namespace gsi
