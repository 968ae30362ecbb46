#include "gsi/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace gsi {

Eigen::VectorXd SourceTerm::at(int n, int t) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  if (t < 0 || t >= horizon) return f;
  for (size_t k = 0; k < support.size(); ++k)
    f[support[k]] = values(static_cast<int>(k), t);
  return f;
}

namespace {

// One-step matrix of the discrete heat equation: u(t+1) = (I - A) u(t)
// with A = -Delta + q.
Eigen::MatrixXd step_matrix(const WeightedGraph& graph) {
  OperatorMatrix op = assemble_operator(graph);
  return Eigen::MatrixXd::Identity(graph.n, graph.n) - op.matrix;
}

}  // namespace

FieldHistory solve_discrete_heat_ivp(const WeightedGraph& graph,
                                     const Eigen::VectorXd& w, int T) {
  if (T < 0) throw std::invalid_argument("solve_discrete_heat_ivp: T < 0");
  if (w.size() != graph.n)
    throw std::invalid_argument("solve_discrete_heat_ivp: bad initial size");
  Eigen::MatrixXd M = step_matrix(graph);
  FieldHistory out;
  out.values.resize(graph.n, T + 1);
  out.values.col(0) = w;
  for (int t = 0; t < T; ++t) out.values.col(t + 1) = M * out.values.col(t);
  return out;
}

FieldHistory solve_discrete_heat_source(const WeightedGraph& graph,
                                        const SourceTerm& f, int T) {
  if (T < 0) throw std::invalid_argument("solve_discrete_heat_source: T < 0");
  Eigen::MatrixXd M = step_matrix(graph);
  FieldHistory out;
  out.values = Eigen::MatrixXd::Zero(graph.n, T + 1);
  for (int t = 0; t < T; ++t)
    out.values.col(t + 1) = M * out.values.col(t) + f.at(graph.n, t);
  return out;
}

FieldHistory duhamel_superpose(const WeightedGraph& graph, const SourceTerm& f,
                               int T) {
  if (T < 0) throw std::invalid_argument("duhamel_superpose: T < 0");
  Eigen::MatrixXd M = step_matrix(graph);
  FieldHistory out;
  out.values = Eigen::MatrixXd::Zero(graph.n, T + 1);
  // u_(s) starts at time s with value f(.,s-1); accumulate its tail.
  for (int s = 1; s <= T; ++s) {
    Eigen::VectorXd u = f.at(graph.n, s - 1);
    out.values.col(s) += u;
    for (int t = s; t < T; ++t) {
      u = M * u;
      out.values.col(t + 1) += u;
    }
  }
  return out;
}

HeatKernelTable heat_kernel_table(const WeightedGraph& graph,
                                  const VertexSubset& B, int T, KernelMode mode,
                                  double timeStep) {
  if (T < 0) throw std::invalid_argument("heat_kernel_table: T < 0");
  if (mode != KernelMode::Discrete && !(timeStep > 0.0))
    throw std::invalid_argument("heat_kernel_table: timeStep must be positive");
  const int m = static_cast<int>(B.size());
  HeatKernelTable table;
  table.B = B;
  table.mode = mode;
  table.timeStep = mode == KernelMode::Discrete ? 1.0 : timeStep;
  table.muOnB.resize(m);
  for (int i = 0; i < m; ++i) {
    if (B[i] < 0 || B[i] >= graph.n)
      throw std::invalid_argument("heat_kernel_table: B vertex out of range");
    table.muOnB[i] = graph.mu[B[i]];
  }

  if (mode == KernelMode::Discrete) {
    // K_t on B is (I-A)^t D_mu^{-1} restricted to B rows/columns; the matrix
    // power recursion avoids eigensolver round-off in the forward data.
    Eigen::MatrixXd M = step_matrix(graph);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(graph.n, graph.n);
    table.frames.reserve(T + 1);
    for (int t = 0; t <= T; ++t) {
      Eigen::MatrixXd frame(m, m);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          frame(i, j) = P(B[i], B[j]) / graph.mu[B[j]];
      table.frames.push_back(std::move(frame));
      if (t < T) P = M * P;
    }
    return table;
  }

  SpectralDecomposition dec = eigendecompose(assemble_operator(graph));
  Eigen::MatrixXd phiB(m, graph.n);
  for (int i = 0; i < m; ++i) phiB.row(i) = dec.eigenvectors.row(B[i]);
  if (mode == KernelMode::Continuous) {
    table.frames.reserve(T + 1);
    for (int k = 0; k <= T; ++k) {
      Eigen::VectorXd decay =
          (-dec.eigenvalues.array() * (k * timeStep)).exp().matrix();
      table.frames.push_back(phiB * decay.asDiagonal() * phiB.transpose());
    }
  } else {
    table.cframes.reserve(T + 1);
    const std::complex<double> iu(0.0, 1.0);
    Eigen::MatrixXcd phiC = phiB.cast<std::complex<double>>();
    for (int k = 0; k <= T; ++k) {
      Eigen::VectorXcd phase = (dec.eigenvalues.array().cast<std::complex<double>>() *
                                (iu * (k * timeStep)))
                                   .exp()
                                   .matrix();
      table.cframes.push_back(phiC * phase.asDiagonal() * phiC.transpose());
    }
  }
  return table;
}

Eigen::MatrixXd lambda_d_apply(const HeatKernelTable& table,
                               const SourceTerm& f, int T) {
  if (table.mode != KernelMode::Discrete)
    throw std::invalid_argument("lambda_d_apply: table mode must be discrete");
  const int m = static_cast<int>(table.B.size());
  // Map the source support into B positions.
  std::vector<int> pos(f.support.size());
  for (size_t k = 0; k < f.support.size(); ++k) {
    auto it = std::find(table.B.begin(), table.B.end(), f.support[k]);
    if (it == table.B.end())
      throw std::invalid_argument("lambda_d_apply: source support escapes B");
    pos[k] = static_cast<int>(it - table.B.begin());
  }
  if (T >= 1 && table.steps() < T)
    throw std::invalid_argument("lambda_d_apply: table horizon too short");

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, T + 1);
  for (int t = 1; t <= T; ++t)
    for (int s = 1; s <= t; ++s) {
      if (s - 1 >= f.horizon) continue;
      const Eigen::MatrixXd& frame = table.frames[t - s];
      for (size_t k = 0; k < pos.size(); ++k) {
        double amount =
            f.values(static_cast<int>(k), s - 1) * table.muOnB[pos[k]];
        if (amount != 0.0) out.col(t) += amount * frame.col(pos[k]);
      }
    }
  return out;
}

namespace {

struct BoundaryStencil {
  std::vector<std::pair<int, double>> interiorNeighbors;  // (id, g)
  double totalWeight = 0.0;
};

std::vector<BoundaryStencil> boundary_stencils(const GraphWithBoundary& gb) {
  std::vector<BoundaryStencil> stencils;
  stencils.reserve(gb.boundary.size());
  for (int z : gb.boundary) {
    BoundaryStencil st;
    for (const auto& [x, w] : gb.full.adjacency()[z])
      if (x < gb.interiorCount) {
        st.interiorNeighbors.emplace_back(x, w);
        st.totalWeight += w;
      }
    if (st.interiorNeighbors.empty())
      throw std::invalid_argument(
          "solve_discrete_wave: boundary vertex " + std::to_string(z) +
          " has no interior neighbor (Neumann condition degenerate)");
    stencils.push_back(std::move(st));
  }
  return stencils;
}

}  // namespace

FieldHistory solve_discrete_wave(const GraphWithBoundary& gb,
                                 const Eigen::VectorXd& v, int T) {
  if (T < 1) throw std::invalid_argument("solve_discrete_wave: T < 1");
  const int n = gb.full.n;
  const int nInt = gb.interiorCount;
  if (v.size() != n)
    throw std::invalid_argument("solve_discrete_wave: initial value size");
  auto stencils = boundary_stencils(gb);

  FieldHistory out;
  out.values.resize(n, T + 1);
  out.values.col(0) = v;

  auto solve_boundary = [&](int t) {
    for (size_t k = 0; k < gb.boundary.size(); ++k) {
      double acc = 0.0;
      for (const auto& [x, w] : stencils[k].interiorNeighbors)
        acc += w * out.values(x, t);
      out.values(gb.boundary[k], t) = acc / stencils[k].totalWeight;
    }
  };

  // D_t W(.,0) = 0 on the interior; boundary follows the Neumann solve.
  out.values.col(1).head(nInt) = out.values.col(0).head(nInt);
  solve_boundary(1);

  for (int t = 1; t < T; ++t) {
    for (int x = 0; x < nInt; ++x) {
      double lap = 0.0;
      for (const auto& [y, w] : gb.full.adjacency()[x])
        lap += w * (out.values(y, t) - out.values(x, t));
      lap /= gb.full.mu[x];
      out.values(x, t + 1) = 2.0 * out.values(x, t) - out.values(x, t - 1) +
                             lap - gb.full.q[x] * out.values(x, t);
    }
    solve_boundary(t + 1);
  }
  return out;
}

Eigen::MatrixXd wave_neumann_values(const GraphWithBoundary& gb,
                                    const FieldHistory& wave) {
  auto stencils = boundary_stencils(gb);
  const int T = static_cast<int>(wave.values.cols());
  Eigen::MatrixXd out(static_cast<int>(gb.boundary.size()), T);
  for (size_t k = 0; k < gb.boundary.size(); ++k) {
    int z = gb.boundary[k];
    for (int t = 0; t < T; ++t) {
      double acc = 0.0;
      for (const auto& [x, w] : stencils[k].interiorNeighbors)
        acc += w * (wave.values(x, t) - wave.values(z, t));
      out(static_cast<int>(k), t) = acc / gb.full.mu[z];
    }
  }
  return out;
}

FieldHistory continuous_heat_ivp(const SpectralDecomposition& dec,
                                 const Eigen::VectorXd& w, int steps,
                                 double dt) {
  const int n = static_cast<int>(dec.mu.size());
  Eigen::VectorXd coeff =
      dec.eigenvectors.transpose() * dec.mu.asDiagonal() * w;
  FieldHistory out;
  out.timeStep = dt;
  out.values.resize(n, steps + 1);
  for (int k = 0; k <= steps; ++k) {
    Eigen::VectorXd decay =
        (-dec.eigenvalues.array() * (k * dt)).exp().matrix();
    out.values.col(k) = dec.eigenvectors * decay.cwiseProduct(coeff);
  }
  return out;
}

ComplexFieldHistory schrodinger_ivp(const SpectralDecomposition& dec,
                                    const Eigen::VectorXcd& psi0, int steps,
                                    double dt) {
  const int n = static_cast<int>(dec.mu.size());
  Eigen::MatrixXcd phi = dec.eigenvectors.cast<std::complex<double>>();
  Eigen::VectorXcd coeff =
      phi.transpose() * dec.mu.cast<std::complex<double>>().asDiagonal() * psi0;
  ComplexFieldHistory out;
  out.timeStep = dt;
  out.values.resize(n, steps + 1);
  const std::complex<double> iu(0.0, 1.0);
  for (int k = 0; k <= steps; ++k) {
    Eigen::VectorXcd phase = (dec.eigenvalues.array().cast<std::complex<double>>() *
                              (iu * (k * dt)))
                                 .exp()
                                 .matrix();
    out.values.col(k) = phi * phase.cwiseProduct(coeff);
  }
  return out;
}

}  // namespace gsi
