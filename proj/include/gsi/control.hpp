// Observability (coefficient extraction from B-measurements of heat flows)
// and controllability (reachability rank and minimum-norm control
// synthesis), including the adjoint backward system.
#pragma once

#include <Eigen/Core>

#include "gsi/evolution.hpp"
#include "gsi/graph.hpp"
#include "gsi/spectral.hpp"

namespace gsi {

enum class CoefficientMethod { ExactSolve, Limit };

/// Coefficients w_j = <w, phi_j>_mu recovered from a B-measurement.
struct CoefficientVector {
  Eigen::VectorXd values;
  CoefficientMethod method = CoefficientMethod::ExactSolve;
  bool converged = true;   // limit method reached its stopping rule
  bool singular = false;   // design matrix rank-deficient (UC violated)
  double conditioning = 0; // sigma_min / sigma_max of the design
};

/// Recover all <w, phi_j>_mu from U_w|_B for the discrete-time heat flow.
/// measurement is |B| x (T+1) in the order of data.B.
///  - ExactSolve: least squares over all (z, t) rows (rows are equilibrated;
///    the system is consistent for exact data, so this is harmless).
///  - Limit: peel groups by descending |1 - lambda|, averaging consecutive
///    times to cancel sign-flip ties; eigenvalue-1 coefficients come last
///    from the t = 0 residual.
CoefficientVector extract_coefficients_discrete(
    const Eigen::MatrixXd& measurement, const InteriorSpectralData& data,
    CoefficientMethod method, int tMax = 200);

/// Continuous-time variant; measurement sampled at k*dt for k = 0..T.
/// The limit method peels groups in ascending eigenvalue order (slowest
/// decay first).
CoefficientVector extract_coefficients_continuous(
    const Eigen::MatrixXd& measurement, double dt,
    const InteriorSpectralData& data, CoefficientMethod method);

struct ReachabilityResult {
  int rank = 0;
  int dimension = 0;
};

/// Rank of f -> U^f(.,T) over sources supported in B x {0..T-1}: the rank
/// of the n x (|B| T) matrix of impulse responses (I-A)^k delta_z.
ReachabilityResult reachability_rank(const WeightedGraph& graph,
                                     const VertexSubset& B, int T);

struct ControlResult {
  SourceTerm source;
  double residual = 0.0;  // |U^f(.,T) - target| in the Euclidean norm
  bool reachable = false; // residual within tolerance
};

/// Minimum-norm source supported in B x {0..T-1} steering zero to the
/// target at time T. When the target has a component outside the reachable
/// space, reachable is false and the residual reports the gap.
ControlResult synthesize_control(const WeightedGraph& graph,
                                 const VertexSubset& B, int T,
                                 const Eigen::VectorXd& target,
                                 double tol = 1e-8);

/// Adjoint system solved backwards from psi(.,T) = v:
/// psi(.,t-1) = (I - A) psi(.,t). Satisfies the duality identity
/// sum_t <psi(.,t+1), f(.,t)>_mu = <U^f(.,T), v>_mu.
FieldHistory adjoint_backward_solve(const WeightedGraph& graph,
                                    const Eigen::VectorXd& v, int T);

}  // namespace gsi
