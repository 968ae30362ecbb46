#include "graph_enum.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace gsi::testsupport {

namespace {

// Edge-index remap tables for every permutation of [0..n).
std::vector<std::vector<int>> permutation_tables(int n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> tables;
  do {
    std::vector<int> table(n * (n - 1) / 2);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i) {
        int a = perm[i], b = perm[j];
        if (a > b) std::swap(a, b);
        table[edge_index(i, j)] = edge_index(a, b);
      }
    tables.push_back(std::move(table));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return tables;
}

std::uint32_t canonical_mask(std::uint32_t mask, int n,
                             const std::vector<std::vector<int>>& tables) {
  const int bits = n * (n - 1) / 2;
  std::uint32_t best = ~0u;
  for (const auto& table : tables) {
    std::uint32_t mapped = 0;
    for (int e = 0; e < bits; ++e)
      if (mask & (1u << e)) mapped |= 1u << table[e];
    best = std::min(best, mapped);
  }
  return best;
}

}  // namespace

const std::vector<std::uint32_t>& connected_graphs(int n) {
  static std::map<int, std::vector<std::uint32_t>> cache;
  auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;

  if (n == 1) return cache.emplace(1, std::vector<std::uint32_t>{0}).first->second;

  // Every connected graph on n vertices arises from a connected graph on
  // n-1 vertices by attaching vertex n-1 to a nonempty subset (remove a
  // spanning-tree leaf to see this), so augmenting representatives level by
  // level reaches everything once canonicalized.
  const auto& smaller = connected_graphs(n - 1);
  auto tables = permutation_tables(n);
  std::set<std::uint32_t> seen;
  const int added = n - 1;
  for (std::uint32_t base : smaller)
    for (std::uint32_t attach = 1; attach < (1u << added); ++attach) {
      std::uint32_t mask = base;
      for (int i = 0; i < added; ++i)
        if (attach & (1u << i)) mask |= 1u << edge_index(i, added);
      seen.insert(canonical_mask(mask, n, tables));
    }
  return cache.emplace(n, std::vector<std::uint32_t>(seen.begin(), seen.end()))
      .first->second;
}

WeightedGraph graph_from_mask(int n, std::uint32_t mask) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (mask & (1u << edge_index(i, j))) edges.emplace_back(i, j);
  return make_combinatorial_graph(n, std::move(edges));
}

}  // namespace gsi::testsupport
