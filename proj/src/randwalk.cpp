#include "gsi/randwalk.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gsi {

WalkModel walk_from_conductances(const WeightedGraph& graph,
                                 std::vector<double> c, Eigen::VectorXd stay) {
  const int n = graph.n;
  if (c.size() != graph.edges.size())
    throw std::invalid_argument(
        "walk_from_conductances: c must align with edges");
  if (stay.size() == 0) stay = Eigen::VectorXd::Zero(n);
  if (stay.size() != n)
    throw std::invalid_argument("walk_from_conductances: stay length");
  for (double v : c)
    if (!(v > 0.0))
      throw std::invalid_argument(
          "walk_from_conductances: edge conductances must be positive");
  for (int x = 0; x < n; ++x)
    if (stay[x] < 0.0)
      throw std::invalid_argument(
          "walk_from_conductances: staying weights must be nonnegative");

  WalkModel model;
  model.graph = graph;
  model.c = std::move(c);
  model.stay = std::move(stay);
  model.mass = model.stay;
  model.P = Eigen::MatrixXd::Zero(n, n);
  for (size_t k = 0; k < graph.edges.size(); ++k) {
    auto [i, j] = graph.edges[k];
    model.mass[i] += model.c[k];
    model.mass[j] += model.c[k];
  }
  for (int x = 0; x < n; ++x)
    if (!(model.mass[x] > 0.0))
      throw std::invalid_argument(
          "walk_from_conductances: vertex " + std::to_string(x) +
          " has zero mass (isolated with no staying weight)");
  for (size_t k = 0; k < graph.edges.size(); ++k) {
    auto [i, j] = graph.edges[k];
    model.P(i, j) = model.c[k] / model.mass[i];
    model.P(j, i) = model.c[k] / model.mass[j];
  }
  for (int x = 0; x < n; ++x) model.P(x, x) = model.stay[x] / model.mass[x];
  return model;
}

WalkModel walk_from_weights(const WeightedGraph& graph) {
  Eigen::VectorXd stay = graph.mu;
  for (int x = 0; x < graph.n; ++x) {
    for (const auto& [y, w] : graph.adjacency()[x]) {
      (void)y;
      stay[x] -= w;
    }
    if (stay[x] < 0.0)
      throw std::invalid_argument(
          "walk_from_weights: mu_x >= sum g_xy violated at vertex " +
          std::to_string(x));
  }
  return walk_from_conductances(graph, graph.g, std::move(stay));
}

Eigen::MatrixXd occupation_probabilities(const WalkModel& model, int x0,
                                         int T) {
  const int n = model.graph.n;
  if (x0 < 0 || x0 >= n)
    throw std::invalid_argument("occupation_probabilities: bad start vertex");
  if (T < 0) throw std::invalid_argument("occupation_probabilities: T < 0");
  Eigen::MatrixXd out(T + 1, n);
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
  row[x0] = 1.0;
  out.row(0) = row;
  for (int t = 1; t <= T; ++t) {
    row = row * model.P;
    out.row(t) = row;
  }
  return out;
}

Eigen::VectorXd first_passage_exact(const WalkModel& model, int x0, int y,
                                    int tMax) {
  const int n = model.graph.n;
  if (x0 < 0 || x0 >= n || y < 0 || y >= n)
    throw std::invalid_argument("first_passage_exact: bad vertex");
  if (tMax < 1) throw std::invalid_argument("first_passage_exact: tMax < 1");
  Eigen::VectorXd r = Eigen::VectorXd::Zero(tMax);
  // Mass that has not hit y yet, indexed over X \ {y}.
  Eigen::RowVectorXd alive = Eigen::RowVectorXd::Zero(n);
  r[0] = model.P(x0, y);
  for (int z = 0; z < n; ++z)
    if (z != y) alive[z] = model.P(x0, z);
  for (int t = 2; t <= tMax; ++t) {
    Eigen::RowVectorXd next = alive * model.P;
    r[t - 1] = next[y];
    next[y] = 0.0;
    alive = next;
  }
  return r;
}

int PassingTimeTable::index_of(int vertex) const {
  auto it = std::find(B.begin(), B.end(), vertex);
  if (it == B.end())
    throw std::invalid_argument("PassingTimeTable: vertex " +
                                std::to_string(vertex) + " not in B");
  return static_cast<int>(it - B.begin());
}

PassingTimeTable passing_time_table(const WalkModel& model,
                                    const VertexSubset& B, int tMax) {
  PassingTimeTable table;
  table.B = B;
  table.tMax = tMax;
  const int m = static_cast<int>(B.size());
  table.r.assign(tMax, Eigen::MatrixXd::Zero(m, m));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd dist = first_passage_exact(model, B[i], B[j], tMax);
      for (int t = 1; t <= tMax; ++t) table.r[t - 1](i, j) = dist[t - 1];
    }
  return table;
}

std::vector<double> renewal_occupation_series(const PassingTimeTable& table,
                                              int x, int y, int tMax) {
  if (tMax > table.tMax)
    throw std::invalid_argument(
        "renewal_occupation: T exceeds the table horizon");
  const int ix = table.index_of(x);
  const int iy = table.index_of(y);
  // Return-time renewal sequence at y.
  std::vector<double> G(tMax + 1, 0.0);
  G[0] = 1.0;
  for (int s = 1; s <= tMax; ++s) {
    double acc = 0.0;
    for (int t = 1; t <= s; ++t) acc += table.r[t - 1](iy, iy) * G[s - t];
    G[s] = acc;
  }
  std::vector<double> occ(tMax + 1, 0.0);
  occ[0] = (x == y) ? 1.0 : 0.0;
  for (int T = 1; T <= tMax; ++T) {
    double acc = 0.0;
    for (int t = 1; t <= T; ++t) acc += table.r[t - 1](ix, iy) * G[T - t];
    occ[T] = acc;
  }
  return occ;
}

double renewal_occupation(const PassingTimeTable& table, int x, int y, int T) {
  return renewal_occupation_series(table, x, y, T)[T];
}

double composition_sum_oracle(const PassingTimeTable& table, int x, int y,
                              int T) {
  if (T > 12)
    throw std::invalid_argument(
        "composition_sum_oracle: T too large for exhaustive enumeration");
  if (T > table.tMax)
    throw std::invalid_argument("composition_sum_oracle: horizon too short");
  if (T < 1) return (x == y) ? 1.0 : 0.0;
  const int ix = table.index_of(x);
  const int iy = table.index_of(y);
  // Passage-time sets {t_1 < ... < t_j = T}: every subset of {1..T-1}
  // prepended to T.
  double total = 0.0;
  const int free = T - 1;
  for (long mask = 0; mask < (1L << free); ++mask) {
    int prev = 0;
    double term = 1.0;
    bool firstLeg = true;
    for (int t = 1; t <= T; ++t) {
      bool hit = (t == T) || (mask & (1L << (t - 1)));
      if (!hit) continue;
      term *= firstLeg ? table.r[t - prev - 1](ix, iy)
                       : table.r[t - prev - 1](iy, iy);
      firstLeg = false;
      prev = t;
    }
    total += term;
  }
  return total;
}

WalkModel lazy_transform_model(const WalkModel& model) {
  return walk_from_conductances(model.graph, model.c,
                                model.stay + model.mass);
}

std::vector<double> lazy_delay_weights(int t) {
  // q(t,n) = C(t-1,n) 2^{-t}; rows follow q(t+1,n) = (q(t,n)+q(t,n-1))/2
  // starting from q(1,0) = 1/2. All operations halve dyadic rationals, so
  // the row is exact in floating point until genuine underflow.
  std::vector<double> row{0.5};
  for (int s = 1; s < t; ++s) {
    std::vector<double> next(s + 1);
    next[0] = row[0] / 2.0;
    for (int n = 1; n < s; ++n) next[n] = (row[n] + row[n - 1]) / 2.0;
    next[s] = row[s - 1] / 2.0;
    row = std::move(next);
  }
  return row;
}

PassingTimeTable lazy_transform_data(const PassingTimeTable& table,
                                     int tMaxOut) {
  if (tMaxOut > table.tMax)
    throw std::invalid_argument(
        "lazy_transform_data: insufficient input horizon");
  const int m = static_cast<int>(table.B.size());
  PassingTimeTable lazy;
  lazy.B = table.B;
  lazy.tMax = tMaxOut;
  lazy.r.assign(tMaxOut, Eigen::MatrixXd::Zero(m, m));

  std::vector<double> q{0.5};  // q(t, .) rolled forward per t
  std::vector<double> qPrev;   // q(t-1, .), needed by the diagonal formula
  for (int t = 1; t <= tMaxOut; ++t) {
    Eigen::MatrixXd& out = lazy.r[t - 1];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        if (i != j) {
          double acc = 0.0;
          for (int n = 0; n <= t - 1; ++n)
            acc += q[n] * table.r[t - n - 1](i, j);
          out(i, j) = acc;
        } else if (t == 1) {
          out(i, i) = 0.5 + 0.5 * table.r[0](i, i);
        } else {
          double acc = 0.0;
          for (int n = 0; n <= t - 2; ++n)
            acc += 0.5 * qPrev[n] * table.r[t - n - 1](i, i);
          out(i, i) = acc;
        }
      }
    // Roll q(t, .) -> q(t+1, .).
    std::vector<double> next(t + 1);
    next[0] = q[0] / 2.0;
    for (int n = 1; n < t; ++n) next[n] = (q[n] + q[n - 1]) / 2.0;
    next[t] = q[t - 1] / 2.0;
    qPrev = std::move(q);
    q = std::move(next);
  }
  return lazy;
}

Eigen::VectorXd stationary_state(const WalkModel& model) {
  if (!is_connected(model.graph) && model.graph.n > 1)
    throw std::invalid_argument(
        "stationary_state: walk must be irreducible (connected graph)");
  return model.mass / model.mass.sum();
}

namespace {

// The x<->y off-diagonal rows of the lazy transform at t = 1 are exactly the
// one-step probabilities of the lazy chain.
Eigen::MatrixXd lazy_one_step(const PassingTimeTable& lazyTable) {
  const int m = static_cast<int>(lazyTable.B.size());
  Eigen::MatrixXd p(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) p(i, j) = lazyTable.r[0](i, j);
  return p;
}

}  // namespace

RecoveredWalkData recover_walk_data_on_B(const PassingTimeTable& table,
                                         int tLimit, double convergenceTol) {
  if (tLimit < 2 || tLimit > table.tMax)
    throw std::invalid_argument(
        "recover_walk_data_on_B: tLimit must lie within the table horizon");
  const int m = static_cast<int>(table.B.size());
  if (m == 0)
    throw std::invalid_argument("recover_walk_data_on_B: empty B");

  PassingTimeTable lazy = lazy_transform_data(table, tLimit);

  // Stationary weights of the lazy chain from the diagonal occupation limit.
  Eigen::VectorXd pi(m);
  for (int i = 0; i < m; ++i) {
    auto series =
        renewal_occupation_series(lazy, table.B[i], table.B[i], tLimit);
    double last = series[tLimit], prev = series[tLimit - 1];
    if (std::abs(last - prev) > convergenceTol)
      throw std::runtime_error(
          "recover_walk_data_on_B: occupation ratios not converged at "
          "tLimit (aperiodic mixing too slow; raise tLimit)");
    pi[i] = last;
    if (!(pi[i] > 0.0))
      throw std::runtime_error(
          "recover_walk_data_on_B: inconsistent table (nonpositive "
          "stationary weight)");
  }

  RecoveredWalkData data;
  data.B = table.B;
  data.normalizationVertex = table.B.front();
  data.massA0 = pi / pi[0];  // A0 m~(x) = pi_x / pi_{x0}

  Eigen::MatrixXd pLazy = lazy_one_step(lazy);
  data.cA0 = Eigen::MatrixXd::Zero(m, m);
  data.stayKnown.assign(m, false);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      // c~ off-diagonal is c itself; symmetrize the two row estimates.
      double fromI = pLazy(i, j) * data.massA0[i];
      double fromJ = pLazy(j, i) * data.massA0[j];
      data.cA0(i, j) = data.cA0(j, i) = 0.5 * (fromI + fromJ);
    }
  for (int i = 0; i < m; ++i) {
    // Full neighborhood of B[i] observable iff one lazy step stays in B.
    double rowMass = pLazy.row(i).sum();
    if (std::abs(rowMass - 1.0) <= 1e-8) {
      double massUnlazy = 0.5 * data.massA0[i];  // A0 m(x) = A0 m~(x)/2
      double diag = massUnlazy - data.cA0.row(i).sum();
      if (diag < -1e-8)
        throw std::runtime_error(
            "recover_walk_data_on_B: inconsistent table (negative staying "
            "weight)");
      data.cA0(i, i) = std::max(diag, 0.0);
      data.stayKnown[i] = true;
    }
  }
  return data;
}

std::vector<int> simulate(const WalkModel& model, int x0, int steps,
                          std::uint64_t seed) {
  const int n = model.graph.n;
  if (x0 < 0 || x0 >= n) throw std::invalid_argument("simulate: bad start");
  if (steps < 0) throw std::invalid_argument("simulate: steps < 0");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<int> traj(steps + 1);
  traj[0] = x0;
  int at = x0;
  for (int t = 1; t <= steps; ++t) {
    double u = uniform();
    double acc = 0.0;
    int next = n - 1;
    for (int z = 0; z < n; ++z) {
      acc += model.P(at, z);
      if (u < acc) {
        next = z;
        break;
      }
    }
    at = next;
    traj[t] = at;
  }
  return traj;
}

ObservedTrajectory observe_on_B(const std::vector<int>& trajectory,
                                const VertexSubset& B) {
  ObservedTrajectory obs;
  obs.B = B;
  obs.symbols.reserve(trajectory.size());
  for (int v : trajectory)
    obs.symbols.push_back(
        std::find(B.begin(), B.end(), v) != B.end() ? v : kHiddenState);
  return obs;
}

RealizationEstimate estimate_occupation_from_realization(
    const ObservedTrajectory& obs, int y, int z, int T, int minSamples) {
  if (std::find(obs.B.begin(), obs.B.end(), y) == obs.B.end())
    throw std::invalid_argument(
        "estimate_occupation_from_realization: y must lie in B");
  if (T < 1)
    throw std::invalid_argument("estimate_occupation_from_realization: T < 1");

  // Passage times of y are exactly observable because y is in B.
  std::vector<long> passages;
  for (size_t t = 1; t < obs.symbols.size(); ++t)
    if (obs.symbols[t] == y) passages.push_back(static_cast<long>(t));

  long hits = 0;
  int count = 0;
  const long stride = 2L * T;
  for (long k = stride; k <= static_cast<long>(passages.size());
       k += stride) {
    long tau = passages[k - 1];
    if (tau + T >= static_cast<long>(obs.symbols.size())) break;
    if (obs.symbols[tau + T] == z) ++hits;
    ++count;
  }
  if (count < minSamples)
    throw std::runtime_error(
        "estimate_occupation_from_realization: only " +
        std::to_string(count) + " usable stopping times (< " +
        std::to_string(minSamples) + ")");
  return {static_cast<double>(hits) / count, count};
}

HeatKernelTable passing_to_heat_table(const PassingTimeTable& table, int T,
                                      int tLimit) {
  tLimit = std::min(tLimit, table.tMax);
  RecoveredWalkData rec = recover_walk_data_on_B(table, tLimit);
  const int m = static_cast<int>(table.B.size());
  if (T < 0) T = table.tMax;
  if (T > table.tMax)
    throw std::invalid_argument("passing_to_heat_table: horizon too short");

  HeatKernelTable out;
  out.B = table.B;
  out.mode = KernelMode::Discrete;
  out.timeStep = 1.0;
  // Gauge fixed at x0: mu = 2 A0 m (the lazy mass) has mu(x0) = 1 exactly,
  // and K(y;z,t) = P(H_t^y = z)/mu(z) is the kernel of the weights
  // (2 A0 m, 2 A0 c), the same Laplacian as (A0 m, A0 c).
  out.muOnB = rec.massA0;

  std::vector<std::vector<double>> occ(m * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      occ[i * m + j] =
          renewal_occupation_series(table, table.B[i], table.B[j], T);

  out.frames.reserve(T + 1);
  for (int t = 0; t <= T; ++t) {
    Eigen::MatrixXd frame(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        frame(i, j) = occ[i * m + j][t] / out.muOnB[j];
    out.frames.push_back(std::move(frame));
  }
  return out;
}

std::vector<int> brute_force_identify(
    const PassingTimeTable& data, const std::vector<CandidateModel>& candidates,
    double tol) {
  if (candidates.empty())
    throw std::invalid_argument("brute_force_identify: empty candidate list");
  std::vector<int> matches;
  for (size_t k = 0; k < candidates.size(); ++k) {
    const auto& cand = candidates[k];
    if (cand.B.size() != data.B.size())
      throw std::invalid_argument(
          "brute_force_identify: candidate B size mismatch");
    PassingTimeTable t = passing_time_table(cand.model, cand.B, data.tMax);
    double diff = 0.0;
    for (int s = 0; s < data.tMax; ++s)
      diff = std::max(diff, (t.r[s] - data.r[s]).cwiseAbs().maxCoeff());
    if (diff <= tol) matches.push_back(static_cast<int>(k));
  }
  return matches;
}

std::vector<int> brute_force_identify(
    const HeatKernelTable& data, const std::vector<CandidateModel>& candidates,
    double tol) {
  if (candidates.empty())
    throw std::invalid_argument("brute_force_identify: empty candidate list");
  if (data.mode != KernelMode::Discrete)
    throw std::invalid_argument(
        "brute_force_identify: heat comparison expects a discrete table");
  const int m = static_cast<int>(data.B.size());
  const int steps = data.steps();
  std::vector<int> matches;
  for (size_t k = 0; k < candidates.size(); ++k) {
    const auto& cand = candidates[k];
    if (cand.B.size() != data.B.size())
      throw std::invalid_argument(
          "brute_force_identify: candidate B size mismatch");
    // Compare probability kernels P(H_t^y = z); the gauge scalar cancels.
    double diff = 0.0;
    for (int i = 0; i < m && diff <= tol; ++i) {
      Eigen::MatrixXd occ =
          occupation_probabilities(cand.model, cand.B[i], steps - 1);
      for (int t = 0; t < steps; ++t)
        for (int j = 0; j < m; ++j)
          diff = std::max(diff, std::abs(data.frames[t](i, j) * data.muOnB[j] -
                                         occ(t, cand.B[j])));
    }
    if (diff <= tol) matches.push_back(static_cast<int>(k));
  }
  return matches;
}

}  // namespace gsi
