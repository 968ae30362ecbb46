// Operator assembly, eigendecomposition in the mu-weighted inner product,
// restriction of eigendata to an observation subset, unique continuation,
// and rotation-invariant comparison of spectral data.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gsi/graph.hpp"

namespace gsi {

/// Matrix of -Delta + q acting on column vectors, together with the vertex
/// weights mu that make it self-adjoint: <Au,v>_mu = <u,Av>_mu.
struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd mu;
};

/// A[x][x] = q(x) + (1/mu_x) sum_{y~x} g_xy,  A[x][y] = -g_xy/mu_x on edges.
OperatorMatrix assemble_operator(const WeightedGraph& graph);

/// Cluster of equal eigenvalues: columns [first, first+count) of the
/// eigenvector matrix.
struct EigenGroup {
  double eigenvalue = 0.0;
  int first = 0;
  int count = 0;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXd eigenvectors;  // column j = phi_j, mu-orthonormal
  Eigen::VectorXd mu;
  std::vector<EigenGroup> groups;
};

/// Full decomposition via the symmetrization D^{1/2} A D^{-1/2}. Adjacent
/// eigenvalues within the cluster tolerance are grouped; clusterTol < 0
/// selects the default rule 1e-8 * max(1, |lambda|).
SpectralDecomposition eigendecompose(const OperatorMatrix& op,
                                     double clusterTol = -1.0);

/// Eigenvalues with eigenvector values restricted to B: the pair
/// (lambda_j, phi_j|_B) plus the multiplicity grouping.
struct InteriorSpectralData {
  VertexSubset B;
  Eigen::VectorXd eigenvalues;  // one entry per column of phiOnB
  Eigen::MatrixXd phiOnB;       // |B| x (#columns), rows follow B's order
  std::vector<EigenGroup> groups;
};

InteriorSpectralData restrict_to_subset(const SpectralDecomposition& dec,
                                        const VertexSubset& B);

struct UniqueContinuationResult {
  bool holds = false;
  std::optional<double> witnessEigenvalue;
};

/// Holds iff no nonzero vector in any eigenspace vanishes on B, i.e. every
/// |B| x |L_j| restriction block has full column rank. The rank cut is
/// sigma_min > tol * sigma_max per block.
UniqueContinuationResult unique_continuation_check(
    const SpectralDecomposition& dec, const VertexSubset& B,
    double tol = 1e-9);

/// One PSD matrix per eigenvalue group: Q_j = Phi_j Phi_j^T with Phi_j the
/// B-restricted columns of group j. Invariant under per-group rotations of
/// the eigenbasis, which makes it the right footprint for comparisons.
std::vector<std::pair<double, Eigen::MatrixXd>> gram_matrices(
    const InteriorSpectralData& data);

/// True iff the eigenvalue lists agree within tol and the per-group Gram
/// matrices agree within tol in max norm. Groups of both sides are merged
/// with the same tolerance before comparing, so the verdict does not depend
/// on how near-degenerate eigenvalues were clustered.
bool spectral_data_equal(const InteriorSpectralData& a,
                         const InteriorSpectralData& b, double tol);

}  // namespace gsi
