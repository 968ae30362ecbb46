// Reversible random walks from conductances, exact first-passage
// distributions, the renewal identity, the lazy-walk transform on both
// models and data, recovery of gauge-normalized walk structure on an
// observation subset, trajectory simulation with the single-realization
// estimator, and the bridge from passing-time data to heat-kernel data.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "gsi/evolution.hpp"
#include "gsi/graph.hpp"

namespace gsi {

/// Walk with transition probabilities p_xy = c_xy / m(x), where
/// m(x) = c_xx + sum of incident edge conductances. Reversible by
/// construction: m(x) p_xy = m(y) p_yx.
struct WalkModel {
  WeightedGraph graph;    // structure carrier; its mu/g are not consulted
  std::vector<double> c;  // edge conductances aligned with graph.edges
  Eigen::VectorXd stay;   // staying weights c_xx >= 0
  Eigen::VectorXd mass;   // m(x)
  Eigen::MatrixXd P;      // dense transition matrix
};

WalkModel walk_from_conductances(const WeightedGraph& graph,
                                 std::vector<double> c, Eigen::VectorXd stay);

/// Walk induced by the graph's own weights: p_xy = g_xy/mu_x with staying
/// probability 1 - (1/mu_x) sum g_xy. Requires mu_x >= sum_y g_xy.
WalkModel walk_from_weights(const WeightedGraph& graph);

/// Rows t = 0..T of the occupation distribution started at x0
/// (row t sums to 1).
Eigen::MatrixXd occupation_probabilities(const WalkModel& model, int x0,
                                         int T);

/// r(t) = P(first hit of y from x0 happens at step t), t = 1..tMax, via the
/// taboo decomposition (power iteration with the y-row/column removed).
Eigen::VectorXd first_passage_exact(const WalkModel& model, int x0, int y,
                                    int tMax);

/// First-passage distributions between all pairs of B.
struct PassingTimeTable {
  VertexSubset B;
  int tMax = 0;
  std::vector<Eigen::MatrixXd> r;  // r[t-1](i,j) = P(tau+(B_i, B_j) = t)

  int index_of(int vertex) const;  // position in B, throws if absent
};

PassingTimeTable passing_time_table(const WalkModel& model,
                                    const VertexSubset& B, int tMax);

/// P(H_T^x = y) from first-passage data through the renewal recursion
/// G(s) = sum_t r(t,y,y) G(s-t). x and y are vertex ids within B.
double renewal_occupation(const PassingTimeTable& table, int x, int y, int T);

/// All values P(H_T^x = y) for T = 0..tMax in one pass.
std::vector<double> renewal_occupation_series(const PassingTimeTable& table,
                                              int x, int y, int tMax);

/// Literal enumeration of the composition identity: sum over strictly
/// increasing passage-time tuples ending at T. Exponential in T; requires
/// T <= 12. Test oracle for renewal_occupation.
double composition_sum_oracle(const PassingTimeTable& table, int x, int y,
                              int T);

/// Lazy chain: staying weight raised by the mass, so the walk moves with
/// probability 1/2 and stays otherwise. m~ = 2m, P~ = (I+P)/2.
WalkModel lazy_transform_model(const WalkModel& model);

/// First-passage data of the lazy chain computed from the original data
/// alone, through the binomial delay weights q(t,n) = C(t-1,n) 2^{-t}.
PassingTimeTable lazy_transform_data(const PassingTimeTable& table,
                                     int tMaxOut);

/// Row of q(t,n) for n = 0..t-1, built by the halved Pascal recursion
/// (exact dyadic arithmetic, no overflow for large t).
std::vector<double> lazy_delay_weights(int t);

/// s_y = m(y) / sum m; the unique stationary state for irreducible chains.
Eigen::VectorXd stationary_state(const WalkModel& model);

/// Walk structure on B recovered from passing-time data, up to one global
/// scalar A0 = 1/m~(x0) fixed at the first vertex of B.
struct RecoveredWalkData {
  VertexSubset B;
  Eigen::VectorXd massA0;      // A0 * m~(x) of the lazy chain; entry x0 is 1
  Eigen::MatrixXd cA0;         // off-diagonal: A0 * c_xy; diagonal: A0 * c_xx
  std::vector<bool> stayKnown; // diagonal entry valid (full neighborhood in B)
  int normalizationVertex = 0;
};

/// Pipeline of the passing-time theorem at finite horizon: lazify the data,
/// take the stationary limit of the lazy return probabilities at tLimit to
/// read off mass ratios, then one-step probabilities give the conductances.
/// The staying weight at x is reported only when the one-step mass out of x
/// stays inside B (full neighborhood observable).
RecoveredWalkData recover_walk_data_on_B(const PassingTimeTable& table,
                                         int tLimit = 2000,
                                         double convergenceTol = 1e-9);

/// Deterministic trajectory: H_0 = x0, each step samples the current row of
/// P by inverse CDF over the fixed vertex order, driven by mt19937_64(seed)
/// with uniforms (next() >> 11) * 2^-53.
std::vector<int> simulate(const WalkModel& model, int x0, int steps,
                          std::uint64_t seed);

constexpr int kHiddenState = -1;

/// Observation of a trajectory on B: vertices outside B become the hidden
/// marker q0.
struct ObservedTrajectory {
  std::vector<int> symbols;  // vertex id in B, or kHiddenState
  VertexSubset B;
};

ObservedTrajectory observe_on_B(const std::vector<int>& trajectory,
                                const VertexSubset& B);

struct RealizationEstimate {
  double estimate = 0.0;
  int count = 0;  // number of independent stopping times used
};

/// Strong-law estimator of P(H_T^y = z) from one observed realization:
/// take every (2T n)-th passage time of y (gaps exceed T, so the samples
/// are independent) and average the indicator of being at z time T later.
RealizationEstimate estimate_occupation_from_realization(
    const ObservedTrajectory& obs, int y, int z, int T, int minSamples = 10);

/// Discrete heat-kernel table of the gauge-fixed walk weights
/// (mu, g) = (A0 m, A0 c): entries P(H_t^y = z) / (A0 m(z)) with the t = 0
/// frame from completeness. T < 0 means the full data horizon.
HeatKernelTable passing_to_heat_table(const PassingTimeTable& table,
                                      int T = -1, int tLimit = 2000);

struct CandidateModel {
  WalkModel model;
  VertexSubset B;
};

/// Indices of candidates whose exact B-data reproduce the input within tol
/// in max norm. The heat-table overload compares probability kernels, which
/// removes the gauge scalar.
std::vector<int> brute_force_identify(const PassingTimeTable& data,
                                      const std::vector<CandidateModel>& candidates,
                                      double tol);
std::vector<int> brute_force_identify(const HeatKernelTable& data,
                                      const std::vector<CandidateModel>& candidates,
                                      double tol);

}  // namespace gsi
