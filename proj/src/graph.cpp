#include "gsi/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <deque>
#include <set>
#include <stdexcept>
#include <thread>

namespace gsi {

namespace {

void check_vertex(const WeightedGraph& graph, int x, const char* what) {
  if (x < 0 || x >= graph.n)
    throw std::invalid_argument(std::string(what) + ": vertex id " +
                                std::to_string(x) + " out of range [0," +
                                std::to_string(graph.n) + ")");
}

void check_subset(const WeightedGraph& graph, const VertexSubset& S,
                  const char* what) {
  std::set<int> seen;
  for (int v : S) {
    check_vertex(graph, v, what);
    if (!seen.insert(v).second)
      throw std::invalid_argument(std::string(what) + ": duplicate vertex " +
                                  std::to_string(v));
  }
}

}  // namespace

WeightedGraph make_graph(int n, std::vector<std::pair<int, int>> edges,
                         Eigen::VectorXd mu, std::vector<double> g,
                         Eigen::VectorXd q, std::vector<std::string> labels,
                         VertexSubset B) {
  if (n <= 0) throw std::invalid_argument("make_graph: vertex count must be positive");
  WeightedGraph graph;
  graph.n = n;
  if (q.size() == 0) q = Eigen::VectorXd::Zero(n);
  if (mu.size() != n || q.size() != n)
    throw std::invalid_argument("make_graph: mu/q length must equal n");
  if (g.size() != edges.size())
    throw std::invalid_argument("make_graph: g must align with edges");
  for (int x = 0; x < n; ++x)
    if (!(mu[x] > 0.0))
      throw std::invalid_argument("make_graph: mu must be positive");

  std::set<std::pair<int, int>> seen;
  for (size_t k = 0; k < edges.size(); ++k) {
    auto [i, j] = edges[k];
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("make_graph: edge endpoint out of range");
    if (i == j) throw std::invalid_argument("make_graph: self-loops not allowed");
    if (i > j) std::swap(i, j);
    edges[k] = {i, j};
    if (!seen.insert({i, j}).second)
      throw std::invalid_argument("make_graph: duplicate edge");
    if (!(g[k] > 0.0))
      throw std::invalid_argument("make_graph: edge weights must be positive");
  }
  graph.edges = std::move(edges);
  graph.mu = std::move(mu);
  graph.g = std::move(g);
  graph.q = std::move(q);
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("make_graph: labels length must equal n");
  graph.labels = std::move(labels);
  check_subset(graph, B, "make_graph B");
  graph.B = std::move(B);

  graph.adj_.assign(n, {});
  for (size_t k = 0; k < graph.edges.size(); ++k) {
    auto [i, j] = graph.edges[k];
    graph.adj_[i].emplace_back(j, graph.g[k]);
    graph.adj_[j].emplace_back(i, graph.g[k]);
  }
  for (auto& nb : graph.adj_) std::sort(nb.begin(), nb.end());
  return graph;
}

WeightedGraph make_combinatorial_graph(int n,
                                       std::vector<std::pair<int, int>> edges) {
  std::vector<double> g(edges.size(), 1.0);
  return make_graph(n, std::move(edges), Eigen::VectorXd::Ones(n), std::move(g));
}

bool WeightedGraph::has_edge(int x, int y) const {
  return edge_weight(x, y) != 0.0;
}

double WeightedGraph::edge_weight(int x, int y) const {
  if (x < 0 || x >= n || y < 0 || y >= n) return 0.0;
  for (const auto& [v, w] : adj_[x])
    if (v == y) return w;
  return 0.0;
}

namespace {

// BFS distances from a source; kUnreachable where not reached.
std::vector<int> bfs_distances(const WeightedGraph& graph, int source) {
  std::vector<int> dist(graph.n, kUnreachable);
  std::deque<int> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (const auto& [y, w] : graph.adjacency()[x]) {
      (void)w;
      if (dist[y] == kUnreachable) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

}  // namespace

int graph_distance(const WeightedGraph& graph, int x, int y) {
  check_vertex(graph, x, "graph_distance");
  check_vertex(graph, y, "graph_distance");
  return bfs_distances(graph, x)[y];
}

Eigen::MatrixXi all_pairs_distance(const WeightedGraph& graph) {
  Eigen::MatrixXi d(graph.n, graph.n);
  for (int x = 0; x < graph.n; ++x) {
    auto row = bfs_distances(graph, x);
    for (int y = 0; y < graph.n; ++y) d(x, y) = row[y];
  }
  return d;
}

bool is_connected(const WeightedGraph& graph) {
  auto dist = bfs_distances(graph, 0);
  return std::none_of(dist.begin(), dist.end(),
                      [](int d) { return d == kUnreachable; });
}

namespace {

// Extreme points of S w.r.t. B given a precomputed distance matrix. S and B
// are lists of vertex ids; result is the subset of S that is certified by
// some b in B as its strictly unique nearest point of S.
VertexSubset extreme_points_impl(const Eigen::MatrixXi& dist,
                                 const VertexSubset& S, const VertexSubset& B) {
  std::vector<char> isExtreme(S.size(), 0);
  for (int b : B) {
    int best = -1, bestDist = 0;
    bool unique = false;
    for (size_t k = 0; k < S.size(); ++k) {
      int d = dist(b, S[k]);
      if (best < 0 || d < bestDist) {
        best = static_cast<int>(k);
        bestDist = d;
        unique = true;
      } else if (d == bestDist) {
        unique = false;
      }
    }
    if (best >= 0 && unique) isExtreme[best] = 1;
  }
  VertexSubset result;
  for (size_t k = 0; k < S.size(); ++k)
    if (isExtreme[k]) result.push_back(S[k]);
  return result;
}

int count_extreme_at_least(const Eigen::MatrixXi& dist, const VertexSubset& S,
                           const VertexSubset& B, int needed) {
  // Same certification as extreme_points_impl with early exit once `needed`
  // distinct extreme points are found.
  std::vector<char> isExtreme(S.size(), 0);
  int found = 0;
  for (int b : B) {
    int best = -1, bestDist = 0;
    bool unique = false;
    for (size_t k = 0; k < S.size(); ++k) {
      int d = dist(b, S[k]);
      if (best < 0 || d < bestDist) {
        best = static_cast<int>(k);
        bestDist = d;
        unique = true;
      } else if (d == bestDist) {
        unique = false;
      }
    }
    if (best >= 0 && unique && !isExtreme[best]) {
      isExtreme[best] = 1;
      if (++found >= needed) return found;
    }
  }
  return found;
}

}  // namespace

VertexSubset extreme_points(const WeightedGraph& graph, const VertexSubset& S,
                            const VertexSubset& B) {
  if (S.empty()) throw std::invalid_argument("extreme_points: S must be nonempty");
  check_subset(graph, S, "extreme_points S");
  check_subset(graph, B, "extreme_points B");
  if (!is_connected(graph))
    throw std::invalid_argument("extreme_points: graph must be connected");
  return extreme_points_impl(all_pairs_distance(graph), S, B);
}

namespace {

// Scans all subsets S of `universe` with |S| >= 2 in lexicographic order of
// their sorted member lists and returns the first one with fewer than two
// extreme points w.r.t. B. `universe` must be sorted ascending.
std::optional<VertexSubset> first_tpc_violation(const Eigen::MatrixXi& dist,
                                                const VertexSubset& universe,
                                                const VertexSubset& B,
                                                size_t firstIndex) {
  VertexSubset current;
  std::optional<VertexSubset> violation;
  // Iterative DFS over sorted prefixes, visiting extensions in ascending
  // order, which is exactly lexicographic order over member lists.
  struct Frame {
    size_t next;  // next universe index to try appending
  };
  std::vector<Frame> stack;
  current.push_back(universe[firstIndex]);
  stack.push_back({firstIndex + 1});
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next >= universe.size()) {
      stack.pop_back();
      current.pop_back();
      continue;
    }
    size_t idx = top.next++;
    current.push_back(universe[idx]);
    if (current.size() >= 2 &&
        count_extreme_at_least(dist, current, B, 2) < 2)
      return current;
    stack.push_back({idx + 1});
  }
  return violation;
}

}  // namespace

int thread_cap() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("GSI_THREADS")) {
    int requested = std::atoi(env);
    if (requested >= 1) cap = std::min(cap, requested);
  }
  return cap;
}

namespace {

TwoPointsResult tpc_over(const Eigen::MatrixXi& dist,
                         const VertexSubset& universe, const VertexSubset& B,
                         int enumerationCap) {
  if (static_cast<int>(universe.size()) > enumerationCap)
    throw std::invalid_argument(
        "two-points condition: vertex count " +
        std::to_string(universe.size()) + " exceeds enumeration cap " +
        std::to_string(enumerationCap));
  if (universe.size() < 2) return {true, std::nullopt};

  // Partition the scan by the smallest member of S. Partitions are searched
  // concurrently; the merge keeps the violation from the smallest partition,
  // which is the lexicographically first violation overall. Small universes
  // stay serial: thread startup costs more than the whole scan there.
  size_t parts = universe.size() - 1;  // last vertex alone spans no |S|>=2
  int workers = universe.size() < 14
                    ? 1
                    : std::min<int>(thread_cap(), static_cast<int>(parts));
  std::vector<std::optional<VertexSubset>> found(parts);
  if (workers <= 1) {
    for (size_t p = 0; p < parts; ++p) {
      found[p] = first_tpc_violation(dist, universe, B, p);
      if (found[p]) break;  // earlier partitions dominate the merge
    }
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> nextPart{0};
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t p = nextPart++; p < parts; p = nextPart++)
          found[p] = first_tpc_violation(dist, universe, B, p);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& f : found)
    if (f) return {false, std::move(f)};
  return {true, std::nullopt};
}

}  // namespace

TwoPointsResult check_two_points_condition(const WeightedGraph& graph,
                                           const VertexSubset& B,
                                           int enumerationCap) {
  check_subset(graph, B, "check_two_points_condition B");
  if (!is_connected(graph))
    throw std::invalid_argument(
        "check_two_points_condition: graph must be connected");
  VertexSubset universe(graph.n);
  for (int v = 0; v < graph.n; ++v) universe[v] = v;
  return tpc_over(all_pairs_distance(graph), universe, B, enumerationCap);
}

TwoPointsResult check_two_points_condition_boundary(const GraphWithBoundary& gb,
                                                    int enumerationCap) {
  if (!is_connected(gb.full))
    throw std::invalid_argument(
        "check_two_points_condition_boundary: graph must be connected");
  VertexSubset interior(gb.interiorCount);
  for (int v = 0; v < gb.interiorCount; ++v) interior[v] = v;
  return tpc_over(all_pairs_distance(gb.full), interior, gb.boundary,
                  enumerationCap);
}

GraphWithBoundary build_boundary_copy(const WeightedGraph& graph,
                                      const VertexSubset& B, double muBoundary,
                                      double gBoundary) {
  if (B.empty())
    throw std::invalid_argument("build_boundary_copy: B must be nonempty");
  check_subset(graph, B, "build_boundary_copy B");
  if (!(muBoundary > 0.0) || !(gBoundary > 0.0))
    throw std::invalid_argument(
        "build_boundary_copy: boundary weights must be positive");

  int nInterior = graph.n;
  int nTotal = nInterior + static_cast<int>(B.size());
  auto edges = graph.edges;
  auto g = graph.g;
  Eigen::VectorXd mu(nTotal), q = Eigen::VectorXd::Zero(nTotal);
  mu.head(nInterior) = graph.mu;
  q.head(nInterior) = graph.q;
  GraphWithBoundary gb;
  gb.interiorCount = nInterior;
  for (size_t k = 0; k < B.size(); ++k) {
    int copy = nInterior + static_cast<int>(k);
    edges.emplace_back(B[k], copy);
    g.push_back(gBoundary);
    mu[copy] = muBoundary;
    gb.boundary.push_back(copy);
  }
  gb.full = make_graph(nTotal, std::move(edges), std::move(mu), std::move(g),
                       std::move(q));
  return gb;
}

}  // namespace gsi
