#include "gsi/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gsi {

namespace {

constexpr double kBaseMergeTol = 1e-6;  // absolute gap between estimated bases
constexpr double kRealSnapTol = 1e-6;   // |Im| allowed on real-mode bases

using Complex = std::complex<double>;

// Fitting sums of decaying exponentials is exponentially ill-conditioned in
// the model order; near ten modes the genuine Hankel spectrum reaches the
// double-precision floor. The pencil and the residue solves therefore run
// in extended precision internally; inputs and outputs stay double.
using Real80 = long double;
using Complex80 = std::complex<Real80>;
using MatrixXc80 = Eigen::Matrix<Complex80, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXc80 = Eigen::Matrix<Complex80, Eigen::Dynamic, 1>;
using VectorX80 = Eigen::Matrix<Real80, Eigen::Dynamic, 1>;

}  // namespace

PencilResult matrix_pencil(const Eigen::VectorXcd& signal, int nMax,
                           double rankTol) {
  const int L = static_cast<int>(signal.size());
  if (nMax < 1) throw std::invalid_argument("matrix_pencil: nMax must be >= 1");
  if (L < 2 * nMax + 2)
    throw std::invalid_argument(
        "matrix_pencil: need at least 2*nMax+2 samples, got " +
        std::to_string(L));
  const int p = L / 2;  // pencil parameter
  const int rows = L - p;

  // Balance growing signals: divide out the dominant growth rate so every
  // base lands in the unit disk. Without this, the Hankel spectrum spans
  // |b_max|^L and slow modes drown in round-off.
  Real80 rho = 1.0L;
  if (L >= 3 && std::abs(signal[L - 3]) > 0.0) {
    double growth =
        std::sqrt(std::abs(signal[L - 1]) / std::abs(signal[L - 3]));
    if (growth > 1.0 && std::isfinite(growth)) rho = growth;
  }
  VectorXc80 s(L);
  {
    Real80 scale = 1.0L;
    for (int k = 0; k < L; ++k, scale /= rho)
      s[k] = Complex80(signal[k].real(), signal[k].imag()) * scale;
  }

  MatrixXc80 Y0(rows, p), Y1(rows, p);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < p; ++j) {
      Y0(i, j) = s[i + j];
      Y1(i, j) = s[i + j + 1];
    }

  Eigen::JacobiSVD<MatrixXc80> svd(Y0,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX80& sigma = svd.singularValues();

  PencilResult result;
  result.singularValues.resize(sigma.size());
  for (int k = 0; k < sigma.size(); ++k)
    result.singularValues[k] = static_cast<double>(sigma[k]);
  if (sigma.size() == 0 || sigma[0] == 0.0L) return result;  // zero signal

  int order = 0;
  for (int k = 0; k < sigma.size(); ++k)
    if (sigma[k] > rankTol * sigma[0]) order = k + 1;
  if (order > nMax)
    throw std::runtime_error(
        "matrix_pencil: model order exceeds nMax (relative singular value " +
        std::to_string(result.singularValues[nMax] /
                       result.singularValues[0]) +
        " above rank tolerance); increase nMax");
  result.order = order;
  if (order == 0) return result;

  MatrixXc80 Um = svd.matrixU().leftCols(order);
  MatrixXc80 Vm = svd.matrixV().leftCols(order);
  VectorX80 sm = sigma.head(order);
  MatrixXc80 A =
      sm.cwiseInverse().asDiagonal() * (Um.adjoint() * Y1 * Vm).eval();
  Eigen::ComplexEigenSolver<MatrixXc80> eig(A);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("matrix_pencil: eigensolver failed");
  result.bases.reserve(order);
  for (int k = 0; k < order; ++k) {
    Complex80 b = eig.eigenvalues()(k) * rho;
    result.bases.emplace_back(static_cast<double>(b.real()),
                              static_cast<double>(b.imag()));
  }
  return result;
}

namespace {

// Block (multichannel) variant over a sequence of |B| x |B| frames: every
// pair signal enters the Hankel structure, which conditions the problem far
// better than the scalar trace, and eigenvalue multiplicities emerge as
// repeated pencil eigenvalues (one per residue rank). The order counts
// columns, so it is still bounded by nMax = |X|.
PencilResult block_pencil(const std::vector<Eigen::MatrixXcd>& frames,
                          int nMax, double rankTol) {
  const int L = static_cast<int>(frames.size());
  if (nMax < 1) throw std::invalid_argument("block_pencil: nMax must be >= 1");
  if (L < 2 * nMax + 2)
    throw std::invalid_argument(
        "block_pencil: need at least 2*nMax+2 samples, got " +
        std::to_string(L));
  const int m = L > 0 ? static_cast<int>(frames[0].rows()) : 0;
  PencilResult result;
  if (m == 0) return result;
  const int p = L / 2;
  const int rows = L - p;

  // Balance growing sequences exactly as in the scalar pencil.
  Real80 rho = 1.0L;
  double late = frames[L - 3].cwiseAbs().maxCoeff();
  if (L >= 3 && late > 0.0) {
    double growth = std::sqrt(frames[L - 1].cwiseAbs().maxCoeff() / late);
    if (growth > 1.0 && std::isfinite(growth)) rho = growth;
  }
  std::vector<MatrixXc80> scaled(L);
  {
    Real80 scale = 1.0L;
    for (int k = 0; k < L; ++k, scale /= rho) {
      scaled[k].resize(m, m);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          scaled[k](a, b) = Complex80(frames[k](a, b).real(),
                                      frames[k](a, b).imag()) *
                            scale;
    }
  }

  MatrixXc80 Y0(rows * m, p * m), Y1(rows * m, p * m);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < p; ++j) {
      Y0.block(i * m, j * m, m, m) = scaled[i + j];
      Y1.block(i * m, j * m, m, m) = scaled[i + j + 1];
    }

  Eigen::JacobiSVD<MatrixXc80> svd(Y0,
                                   Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VectorX80& sigma = svd.singularValues();
  result.singularValues.resize(sigma.size());
  for (int k = 0; k < sigma.size(); ++k)
    result.singularValues[k] = static_cast<double>(sigma[k]);
  if (sigma.size() == 0 || sigma[0] == 0.0L) return result;

  int order = 0;
  for (int k = 0; k < sigma.size(); ++k)
    if (sigma[k] > rankTol * sigma[0]) order = k + 1;
  if (order > nMax)
    throw std::runtime_error(
        "block_pencil: model order exceeds nMax (relative singular value " +
        std::to_string(result.singularValues[nMax] /
                       result.singularValues[0]) +
        " above rank tolerance); increase nMax");
  result.order = order;
  if (order == 0) return result;

  MatrixXc80 Um = svd.matrixU().leftCols(order);
  MatrixXc80 Vm = svd.matrixV().leftCols(order);
  VectorX80 sm = sigma.head(order);
  MatrixXc80 A =
      sm.cwiseInverse().asDiagonal() * (Um.adjoint() * Y1 * Vm).eval();
  Eigen::ComplexEigenSolver<MatrixXc80> eig(A);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("block_pencil: eigensolver failed");
  result.bases.reserve(order);
  for (int k = 0; k < order; ++k) {
    Complex80 b = eig.eigenvalues()(k) * rho;
    result.bases.emplace_back(static_cast<double>(b.real()),
                              static_cast<double>(b.imag()));
  }
  return result;
}

std::vector<Eigen::MatrixXcd> frame_sequence(const HeatKernelTable& table,
                                             int skip) {
  std::vector<Eigen::MatrixXcd> frames;
  frames.reserve(table.steps() - skip);
  for (int k = skip; k < table.steps(); ++k) {
    if (table.mode == KernelMode::Schrodinger)
      frames.push_back(table.cframes[k]);
    else
      frames.push_back(table.frames[k].cast<Complex>());
  }
  return frames;
}

// Merge bases closer than the cluster gap (estimation may split a pole).
std::vector<Complex> merge_bases(std::vector<Complex> bases) {
  std::sort(bases.begin(), bases.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::vector<Complex> merged;
  for (const auto& b : bases) {
    if (!merged.empty() && std::abs(b - merged.back()) <= kBaseMergeTol) {
      merged.back() = 0.5 * (merged.back() + b);
    } else {
      merged.push_back(b);
    }
  }
  return merged;
}

struct ResidueFit {
  std::vector<Eigen::MatrixXd> residues;  // symmetrized, one per base
  double maxMisfit = 0.0;
  double maxImag = 0.0;
  // Absolute uncertainty of the residue entries. True Gram blocks are
  // exactly PSD, so the largest negative eigenvalue across the fitted
  // residues measures the realized error directly.
  double noiseFloor = 0.0;
};

// Joint least squares for the residue matrices: one design matrix over the
// sample times, right-hand sides are the per-pair time signals. Solved in
// extended precision; see the note at the top of this file.
ResidueFit fit_residues(const HeatKernelTable& table,
                        const std::vector<Complex>& bases, int skip) {
  const int m = static_cast<int>(table.B.size());
  const int M = static_cast<int>(bases.size());
  const int S = table.steps() - skip;
  const bool complexTable = table.mode == KernelMode::Schrodinger;

  MatrixXc80 V(S, M);
  for (int j = 0; j < M; ++j) {
    Complex80 base(bases[j].real(), bases[j].imag());
    Complex80 power = 1.0L;
    for (int k = 0; k < skip; ++k) power *= base;
    for (int k = 0; k < S; ++k) {
      V(k, j) = power;
      power *= base;
    }
  }

  const int pairs = m * (m + 1) / 2;
  MatrixXc80 rhs(S, pairs);
  int col = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j, ++col)
      for (int k = 0; k < S; ++k) {
        Complex value = complexTable
                            ? table.cframes[k + skip](i, j)
                            : Complex(table.frames[k + skip](i, j), 0.0);
        rhs(k, col) = Complex80(value.real(), value.imag());
      }

  // Row equilibration flattens the dynamic range across times (the system
  // is consistent for exact data, so reweighting rows is harmless), then
  // column scaling keeps growing and decaying modes comparable.
  for (int k = 0; k < S; ++k) {
    Real80 scale = V.row(k).cwiseAbs().maxCoeff();
    if (scale > 0.0L) {
      V.row(k) /= scale;
      rhs.row(k) /= scale;
    }
  }
  VectorX80 colScale = VectorX80::Ones(M);
  for (int j = 0; j < M; ++j) {
    Real80 norm = V.col(j).norm();
    if (norm > 0.0L) {
      colScale[j] = norm;
      V.col(j) /= norm;
    }
  }

  MatrixXc80 sol = V.colPivHouseholderQr().solve(rhs);
  ResidueFit fit;
  if (rhs.size() > 0)
    fit.maxMisfit =
        static_cast<double>((V * sol - rhs).cwiseAbs().maxCoeff());

  fit.residues.assign(M, Eigen::MatrixXd::Zero(m, m));
  col = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j, ++col)
      for (int mode = 0; mode < M; ++mode) {
        Complex80 value = sol(mode, col) / colScale[mode];
        fit.maxImag = std::max(fit.maxImag,
                               static_cast<double>(std::abs(value.imag())));
        fit.residues[mode](i, j) = static_cast<double>(value.real());
        fit.residues[mode](j, i) = fit.residues[mode](i, j);
      }
  for (const auto& Q : fit.residues) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
    if (eig.eigenvalues().size() > 0)
      fit.noiseFloor = std::max(fit.noiseFloor, -eig.eigenvalues()(0));
  }
  fit.noiseFloor = std::max({fit.noiseFloor, fit.maxMisfit, fit.maxImag});
  return fit;
}

// Clip negative eigenvalues; returns the largest clip applied.
double psd_project(Eigen::MatrixXd& Q) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Q);
  Eigen::VectorXd vals = eig.eigenvalues();
  double clipped = 0.0;
  for (int k = 0; k < vals.size(); ++k)
    if (vals[k] < 0.0) {
      clipped = std::max(clipped, -vals[k]);
      vals[k] = 0.0;
    }
  if (clipped > 0.0)
    Q = eig.eigenvectors() * vals.asDiagonal() *
        eig.eigenvectors().transpose();
  return clipped;
}

// Bases together with eigenvalues, ready for group assembly.
struct RecoveredMode {
  double eigenvalue;
  Complex base;
  Eigen::MatrixXd residue;
};

ExtractionResult assemble(std::vector<RecoveredMode> modes,
                          const HeatKernelTable& table, double rankTol,
                          double noiseFloor, PoleEstimate poles) {
  std::sort(modes.begin(), modes.end(),
            [](const RecoveredMode& a, const RecoveredMode& b) {
              return a.eigenvalue < b.eigenvalue;
            });
  ExtractionResult result;
  result.data.B = table.B;
  const int m = static_cast<int>(table.B.size());

  std::vector<double> eigList;
  std::vector<Eigen::MatrixXd> factors;
  std::vector<EigenGroup> groups;
  for (auto& mode : modes) {
    poles.psdProjectionDistance =
        std::max(poles.psdProjectionDistance, psd_project(mode.residue));
    // Rank decisions never trust structure below the residue noise floor.
    Eigen::MatrixXd factor =
        factor_residue(mode.residue, std::max(rankTol, 30.0 * noiseFloor));
    const int rank = static_cast<int>(factor.cols());
    if (rank == 0) continue;
    EigenGroup grp;
    grp.eigenvalue = mode.eigenvalue;
    grp.first = static_cast<int>(eigList.size());
    grp.count = rank;
    groups.push_back(grp);
    for (int c = 0; c < rank; ++c) eigList.push_back(mode.eigenvalue);
    factors.push_back(std::move(factor));
    poles.modes.push_back({mode.base, mode.residue});
  }

  result.data.eigenvalues =
      Eigen::Map<Eigen::VectorXd>(eigList.data(), eigList.size());
  result.data.phiOnB.resize(m, static_cast<int>(eigList.size()));
  int at = 0;
  for (const auto& f : factors) {
    result.data.phiOnB.middleCols(at, static_cast<int>(f.cols())) = f;
    at += static_cast<int>(f.cols());
  }
  result.data.groups = std::move(groups);
  poles.nEstimated = static_cast<int>(poles.modes.size());
  result.poles = std::move(poles);
  return result;
}

void require_mode(const HeatKernelTable& table, KernelMode mode,
                  const char* who) {
  if (table.mode != mode)
    throw std::invalid_argument(std::string(who) + ": wrong table mode");
}

double require_real(const Complex& base, const char* who) {
  if (std::abs(base.imag()) > kRealSnapTol * (1.0 + std::abs(base)))
    throw std::runtime_error(std::string(who) +
                             ": complex base in a real-mode table "
                             "(inconsistent data)");
  return base.real();
}

}  // namespace

ExtractionResult extract_spectral_discrete(const HeatKernelTable& table,
                                           int nMax, double rankTol) {
  require_mode(table, KernelMode::Discrete, "extract_spectral_discrete");
  if (table.steps() < 2 * nMax + 3)
    throw std::invalid_argument(
        "extract_spectral_discrete: horizon must be >= 2*nMax+2");
  // Samples t >= 1: a base 0 (eigenvalue 1) contributes nothing there and is
  // recovered afterwards from the t = 0 frame.
  PencilResult pencil = block_pencil(frame_sequence(table, 1), nMax, rankTol);
  std::vector<Complex> bases = merge_bases(pencil.bases);
  std::erase_if(bases, [](const Complex& b) { return std::abs(b) < 1e-8; });

  ResidueFit fit = fit_residues(table, bases, 1);
  PoleEstimate poles;
  poles.singularValues = pencil.singularValues;
  poles.fitResidual = std::max(fit.maxMisfit, fit.maxImag);

  std::vector<RecoveredMode> modes;
  for (size_t j = 0; j < bases.size(); ++j) {
    double b = require_real(bases[j], "extract_spectral_discrete");
    modes.push_back({1.0 - b, Complex(b, 0.0), fit.residues[j]});
  }

  // Eigenvalue-1 completion: whatever survives at t = 0 after removing all
  // recovered modes is the Gram block of the eigenvalue-1 group.
  Eigen::MatrixXd gap = table.frames[0];
  for (const auto& mode : modes) gap -= mode.residue;
  double frameScale = std::max(1.0, table.frames[0].cwiseAbs().maxCoeff());
  double cut = std::max(
      std::max(rankTol, 10.0 * poles.fitResidual + 1e-12) * frameScale,
      100.0 * fit.noiseFloor);
  if (gap.cwiseAbs().maxCoeff() > cut) {
    Eigen::MatrixXd block = 0.5 * (gap + gap.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
    if (eig.eigenvalues().minCoeff() < -std::sqrt(cut))
      throw std::runtime_error(
          "extract_spectral_discrete: eigenvalue-1 completion block is not "
          "PSD (inconsistent data)");
    modes.push_back({1.0, Complex(0.0, 0.0), block});
  }
  return assemble(std::move(modes), table, rankTol, fit.noiseFloor,
                  std::move(poles));
}

ExtractionResult extract_spectral_continuous(const HeatKernelTable& table,
                                             int nMax, double rankTol) {
  require_mode(table, KernelMode::Continuous, "extract_spectral_continuous");
  PencilResult pencil = block_pencil(frame_sequence(table, 0), nMax, rankTol);
  std::vector<Complex> bases = merge_bases(pencil.bases);

  ResidueFit fit = fit_residues(table, bases, 0);
  PoleEstimate poles;
  poles.singularValues = pencil.singularValues;
  poles.fitResidual = std::max(fit.maxMisfit, fit.maxImag);

  std::vector<RecoveredMode> modes;
  for (size_t j = 0; j < bases.size(); ++j) {
    double b = require_real(bases[j], "extract_spectral_continuous");
    if (b <= 0.0)
      throw std::runtime_error(
          "extract_spectral_continuous: nonpositive base (aliasing: timeStep "
          "too large)");
    modes.push_back(
        {-std::log(b) / table.timeStep, Complex(b, 0.0), fit.residues[j]});
  }
  return assemble(std::move(modes), table, rankTol, fit.noiseFloor,
                  std::move(poles));
}

ExtractionResult extract_spectral_schrodinger(const HeatKernelTable& table,
                                              int nMax, double rankTol) {
  require_mode(table, KernelMode::Schrodinger, "extract_spectral_schrodinger");
  PencilResult pencil = block_pencil(frame_sequence(table, 0), nMax, rankTol);
  std::vector<Complex> bases = merge_bases(pencil.bases);

  ResidueFit fit = fit_residues(table, bases, 0);
  PoleEstimate poles;
  poles.singularValues = pencil.singularValues;
  poles.fitResidual = fit.maxMisfit;

  std::vector<RecoveredMode> modes;
  for (size_t j = 0; j < bases.size(); ++j) {
    // Principal argument: valid while dt * (eigenvalue span) < pi.
    double lambda = std::arg(bases[j]) / table.timeStep;
    modes.push_back({lambda, bases[j], fit.residues[j]});
  }
  return assemble(std::move(modes), table, rankTol, fit.noiseFloor,
                  std::move(poles));
}

Eigen::MatrixXd factor_residue(const Eigen::MatrixXd& Q, double rankTol) {
  if (Q.rows() != Q.cols())
    throw std::invalid_argument("factor_residue: matrix must be square");
  const int m = static_cast<int>(Q.rows());
  if (m == 0) return Eigen::MatrixXd(0, 0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 *
                                                     (Q + Q.transpose()));
  Eigen::VectorXd vals = eig.eigenvalues();  // ascending
  double top = std::max(0.0, vals[m - 1]);
  double scale = std::max(1.0, top);
  if (vals[0] < -std::max(rankTol, 1e-10) * scale)
    throw std::invalid_argument(
        "factor_residue: matrix has a negative eigenvalue beyond tolerance");
  int rank = 0;
  for (int k = 0; k < m; ++k)
    if (vals[k] > rankTol * scale) ++rank;
  Eigen::MatrixXd A(m, rank);
  // Descending order so the leading column carries the dominant direction.
  for (int c = 0; c < rank; ++c) {
    int k = m - 1 - c;
    A.col(c) = eig.eigenvectors().col(k) * std::sqrt(vals[k]);
  }
  return A;
}

HeatKernelTable synthesize_table(const InteriorSpectralData& data,
                                 KernelMode mode, int T, double timeStep) {
  if (T < 0) throw std::invalid_argument("synthesize_table: T < 0");
  const int m = static_cast<int>(data.B.size());
  HeatKernelTable table;
  table.B = data.B;
  table.mode = mode;
  table.timeStep = mode == KernelMode::Discrete ? 1.0 : timeStep;

  auto grams = gram_matrices(data);
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(m, m);
  for (const auto& [lambda, Q] : grams) total += Q;
  table.muOnB.resize(m);
  for (int i = 0; i < m; ++i) {
    if (!(total(i, i) > 0.0))
      throw std::invalid_argument(
          "synthesize_table: data has no support at a vertex of B");
    table.muOnB[i] = 1.0 / total(i, i);
  }

  if (mode == KernelMode::Schrodinger) {
    const Complex iu(0.0, 1.0);
    for (int k = 0; k <= T; ++k) {
      Eigen::MatrixXcd frame = Eigen::MatrixXcd::Zero(m, m);
      for (const auto& [lambda, Q] : grams)
        frame += std::exp(iu * lambda * (k * timeStep)) * Q.cast<Complex>();
      table.cframes.push_back(std::move(frame));
    }
    return table;
  }

  for (int k = 0; k <= T; ++k) {
    Eigen::MatrixXd frame = Eigen::MatrixXd::Zero(m, m);
    for (const auto& [lambda, Q] : grams) {
      double c;
      if (mode == KernelMode::Discrete) {
        c = 1.0;
        for (int t = 0; t < k; ++t) c *= (1.0 - lambda);
      } else {
        c = std::exp(-lambda * k * timeStep);
      }
      frame += c * Q;
    }
    table.frames.push_back(std::move(frame));
  }
  return table;
}

}  // namespace gsi
