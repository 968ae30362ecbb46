// Forward solvers: discrete-time heat (initial value and sourced),
// sampled continuous heat and Schrodinger flows via spectral expansion,
// the discrete wave equation with Neumann boundary, and source-to-solution
// kernel tables restricted to an observation subset.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "gsi/graph.hpp"
#include "gsi/spectral.hpp"

namespace gsi {

/// Source supported on a vertex list for time steps 0..horizon-1.
struct SourceTerm {
  VertexSubset support;
  Eigen::MatrixXd values;  // |support| x horizon
  int horizon = 0;

  /// Dense n-vector of the source at one time step.
  Eigen::VectorXd at(int n, int t) const;
};

/// Vertex functions stored per time step; column t holds time index t.
struct FieldHistory {
  Eigen::MatrixXd values;  // n x (T+1)
  double timeStep = 1.0;
};

struct ComplexFieldHistory {
  Eigen::MatrixXcd values;
  double timeStep = 1.0;
};

/// u(.,0) = w;  u(.,t+1) = u(.,t) + (Delta - q) u(.,t).
FieldHistory solve_discrete_heat_ivp(const WeightedGraph& graph,
                                     const Eigen::VectorXd& w, int T);

/// u(.,0) = 0;  D_t u = (Delta - q) u + f.
FieldHistory solve_discrete_heat_source(const WeightedGraph& graph,
                                        const SourceTerm& f, int T);

/// Superposition of homogeneous solutions launched at each source step:
/// u^f(.,t) = sum_{s=1..t} u_(s)(.,t) with u_(s)(.,s) = f(.,s-1).
/// Agrees with solve_discrete_heat_source (this is the consistency check
/// behind applying the kernel table to arbitrary sources).
FieldHistory duhamel_superpose(const WeightedGraph& graph, const SourceTerm& f,
                               int T);

enum class KernelMode { Discrete, Continuous, Schrodinger };

/// Two-point kernel on B sampled in time. Entries are the symmetric
/// expansion K(y;z,t) = sum_j c_j(t) phi_j(y) phi_j(z) with
///   c_j(t) = (1-lambda_j)^t      (discrete, integer t)
///   c_j(t) = exp(-lambda_j t)    (continuous heat)
///   c_j(t) = exp(i lambda_j t)   (schrodinger)
/// At t=0 completeness gives K(y;z,0) = delta_yz / mu_y.
struct HeatKernelTable {
  VertexSubset B;
  KernelMode mode = KernelMode::Discrete;
  double timeStep = 1.0;  // 1 for discrete
  Eigen::VectorXd muOnB;
  std::vector<Eigen::MatrixXd> frames;    // discrete/continuous entries
  std::vector<Eigen::MatrixXcd> cframes;  // schrodinger entries

  int steps() const {
    return static_cast<int>(mode == KernelMode::Schrodinger ? cframes.size()
                                                            : frames.size());
  }
};

/// Sample the kernel on B at times {0, dt, ..., T*dt} (dt forced to 1 for
/// the discrete mode, where matrix powers are used instead of the
/// eigendecomposition).
HeatKernelTable heat_kernel_table(const WeightedGraph& graph,
                                  const VertexSubset& B, int T, KernelMode mode,
                                  double timeStep = 1.0);

/// The discrete source-to-solution map applied through the kernel table
/// alone: output (i,t) = u^f(B[i], t) for t = 0..T. Requires
/// supp(f) within table.B and table horizon >= T-1.
Eigen::MatrixXd lambda_d_apply(const HeatKernelTable& table,
                               const SourceTerm& f, int T);

/// Discrete wave on a graph with boundary. Interior update
/// W(x,t+1) = 2W(x,t) - W(x,t-1) + (Delta - q)W(x,t); the first step uses
/// D_t W(.,0) = 0 on the interior. Boundary values for t >= 1 are solved
/// from the Neumann condition (each boundary vertex carries one scalar
/// equation over its interior neighbors). W(.,0) = v is taken as given.
FieldHistory solve_discrete_wave(const GraphWithBoundary& gb,
                                 const Eigen::VectorXd& v, int T);

/// Neumann values (1/mu_z) sum_{x~z, x interior} g_xz (W(x)-W(z)) at each
/// boundary vertex for every stored time step; |boundary| x (T+1).
Eigen::MatrixXd wave_neumann_values(const GraphWithBoundary& gb,
                                    const FieldHistory& wave);

/// Continuous-time heat flow from initial state w sampled at k*dt,
/// k = 0..steps; computed from the spectral expansion.
FieldHistory continuous_heat_ivp(const SpectralDecomposition& dec,
                                 const Eigen::VectorXd& w, int steps,
                                 double dt);

/// Free Schrodinger evolution of psi0 sampled at k*dt (unitary in the
/// mu-inner product).
ComplexFieldHistory schrodinger_ivp(const SpectralDecomposition& dec,
                                    const Eigen::VectorXcd& psi0, int steps,
                                    double dt);

}  // namespace gsi
