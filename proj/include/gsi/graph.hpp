// Finite weighted graphs: data model, hop distances, extreme points,
// the Two-Points Condition, and the boundary-copy construction.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace gsi {

using VertexSubset = std::vector<int>;

/// Finite undirected simple graph with vertex weights mu, edge weights g
/// and a vertex potential q. Immutable after construction via make_graph.
struct WeightedGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // normalized i < j, no duplicates
  Eigen::VectorXd mu;                      // size n, entries > 0
  std::vector<double> g;                   // aligned with edges, entries > 0
  Eigen::VectorXd q;                       // size n
  std::vector<std::string> labels;         // optional display names
  VertexSubset B;                          // optional observation subset

  /// Neighbor lists (id, edge weight), sorted by neighbor id.
  const std::vector<std::vector<std::pair<int, double>>>& adjacency() const {
    return adj_;
  }
  bool has_edge(int x, int y) const;
  double edge_weight(int x, int y) const;  // 0 if not adjacent

  friend WeightedGraph make_graph(int n, std::vector<std::pair<int, int>> edges,
                                  Eigen::VectorXd mu, std::vector<double> g,
                                  Eigen::VectorXd q,
                                  std::vector<std::string> labels,
                                  VertexSubset B);

 private:
  std::vector<std::vector<std::pair<int, double>>> adj_;
};

/// Validates invariants (simple graph, positive weights) and builds adjacency.
/// Throws std::invalid_argument on violation.
WeightedGraph make_graph(int n, std::vector<std::pair<int, int>> edges,
                         Eigen::VectorXd mu, std::vector<double> g,
                         Eigen::VectorXd q = {},
                         std::vector<std::string> labels = {},
                         VertexSubset B = {});

/// Convenience: mu == 1, g == 1, q == 0 (the combinatorial Laplacian weights).
WeightedGraph make_combinatorial_graph(int n,
                                       std::vector<std::pair<int, int>> edges);

/// Graph with a designated boundary. Interior vertices come first
/// (ids 0..interiorCount-1), boundary vertices follow in listed order.
struct GraphWithBoundary {
  WeightedGraph full;
  int interiorCount = 0;
  VertexSubset boundary;
};

constexpr int kUnreachable = -1;

/// Hop-count shortest-path distance (edge weights ignored).
/// Returns kUnreachable for disconnected pairs.
int graph_distance(const WeightedGraph& graph, int x, int y);

/// All-pairs hop distances by BFS from every vertex; kUnreachable where none.
Eigen::MatrixXi all_pairs_distance(const WeightedGraph& graph);

bool is_connected(const WeightedGraph& graph);

/// All x0 in S such that some b in B has x0 as its strictly unique nearest
/// point of S. Requires S nonempty and the graph connected.
VertexSubset extreme_points(const WeightedGraph& graph, const VertexSubset& S,
                            const VertexSubset& B);

struct TwoPointsResult {
  bool holds = false;
  std::optional<VertexSubset> witness;  // violating S when holds == false
};

/// Exhaustive Two-Points Condition check: every S with |S| >= 2 must have at
/// least two extreme points w.r.t. B. Subsets are scanned in lexicographic
/// order of their sorted member lists; the witness is the first violation in
/// that order. Throws when n exceeds enumerationCap.
TwoPointsResult check_two_points_condition(const WeightedGraph& graph,
                                           const VertexSubset& B,
                                           int enumerationCap = 20);

/// The boundary variant of the condition: subsets range over interior
/// vertices, extreme points are certified from boundary vertices.
TwoPointsResult check_two_points_condition_boundary(const GraphWithBoundary& gb,
                                                    int enumerationCap = 20);

/// Attach one new degree-1 boundary vertex b~ per b in B. Interior structure
/// and weights are preserved; new vertices get weight muBoundary and the new
/// edges get gBoundary.
GraphWithBoundary build_boundary_copy(const WeightedGraph& graph,
                                      const VertexSubset& B,
                                      double muBoundary = 1.0,
                                      double gBoundary = 1.0);

/// Thread cap from the GSI_THREADS environment variable (>=1).
int thread_cap();

}  // namespace gsi
