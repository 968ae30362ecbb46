// Inverse direction of the source-to-solution maps: recover interior
// spectral data from sampled kernel tables. The transform arguments of the
// underlying lemmas (Z-transform, Laplace transform, Fourier transform of
// the real part) become one finite-sample problem: fit a sum of geometric
// modes to the table, which a Hankel matrix pencil solves directly.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "gsi/evolution.hpp"
#include "gsi/spectral.hpp"

namespace gsi {

/// Pole/residue estimate of a kernel table: one mode per detected base with
/// its |B| x |B| residue matrix, plus conditioning diagnostics.
struct PoleEstimate {
  struct Mode {
    std::complex<double> base;  // (1-lambda), exp(-lambda dt) or exp(i lambda dt)
    Eigen::MatrixXd residue;    // symmetrized, PSD-projected
  };
  std::vector<Mode> modes;
  int nEstimated = 0;               // detected model order
  Eigen::VectorXd singularValues;   // Hankel spectrum used for order selection
  double psdProjectionDistance = 0; // largest eigenvalue clipped to reach PSD
  double fitResidual = 0;           // max abs misfit of the mode model
};

struct ExtractionResult {
  InteriorSpectralData data;
  PoleEstimate poles;
};

/// Discrete map: bases are (1-lambda_j) fitted on samples t >= 1; an
/// eigenvalue-1 group is invisible there (base 0) and is completed from the
/// t = 0 residual frame. Requires table horizon >= 2*nMax+2 samples.
ExtractionResult extract_spectral_discrete(const HeatKernelTable& table,
                                           int nMax, double rankTol = 1e-8);

/// Continuous heat: bases exp(-lambda_j dt) must come out real positive;
/// a nonpositive base signals aliasing (dt too large).
ExtractionResult extract_spectral_continuous(const HeatKernelTable& table,
                                             int nMax, double rankTol = 1e-8);

/// Schrodinger: unit-modulus bases exp(i lambda_j dt); eigenvalues from the
/// principal argument, so dt * (eigenvalue span) must stay below pi.
ExtractionResult extract_spectral_schrodinger(const HeatKernelTable& table,
                                              int nMax, double rankTol = 1e-8);

/// Factor a symmetric PSD matrix as Q = A A^T with A of full column rank r,
/// r = number of eigenvalues above rankTol relative to the largest. Columns
/// of A are an admissible phi|_B basis (unique up to right-orthogonal
/// transforms). Throws if Q has a negative eigenvalue beyond tolerance.
Eigen::MatrixXd factor_residue(const Eigen::MatrixXd& Q, double rankTol);

/// Forward synthesis of the B-restricted kernel from spectral data alone;
/// the right inverse of the extractors. muOnB is reconstructed from the
/// completeness relation at t = 0.
HeatKernelTable synthesize_table(const InteriorSpectralData& data,
                                 KernelMode mode, int T, double timeStep);

/// Hankel matrix-pencil estimation of bases from a uniformly sampled sum of
/// geometric modes. Order is selected by the relative singular value cut;
/// throws if more than nMax bases are present above the cut.
struct PencilResult {
  std::vector<std::complex<double>> bases;
  Eigen::VectorXd singularValues;
  int order = 0;
};
PencilResult matrix_pencil(const Eigen::VectorXcd& signal, int nMax,
                           double rankTol);

}  // namespace gsi
