#pragma once

#include "qtnet/graph.hpp"
#include "qtnet/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace qtnet::test {

inline constexpr std::uint64_t kSeed = 20241014;

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline std::vector<ModelSpec> all_models() {
  return {AbsorptionWireParams{}, DrivenWireParams{}, AppendixParams{}, DirectParams{}};
}

// Connected random multigraph with KMS-consistent rates on c/h/w baths.
inline RateGraph random_multigraph(std::mt19937_64& rng, int n, int extra_edges) {
  RateGraph g;
  for (int i = 0; i < n; ++i) g.add_vertex(0.1 * i);
  g.add_bath(thermal_bath(Bath::cold, 1.0));
  g.add_bath(thermal_bath(Bath::hot, 2.0));
  g.add_bath(thermal_bath(Bath::work, 3.0));
  std::uniform_real_distribution<double> q(0.1, 1.0);
  std::uniform_int_distribution<int> bath(0, 2);
  auto add = [&](int a, int b) {
    const Bath label = static_cast<Bath>(bath(rng));
    const double quantum = q(rng);
    const double down = 1e-3 * q(rng);
    g.add_edge(a, b, label, quantum, down * std::exp(-quantum / g.bath(label).temperature), down);
  };
  // Random spanning tree first so the graph is connected.
  for (int v = 2; v <= n; ++v) add(std::uniform_int_distribution<int>(1, v - 1)(rng), v);
  std::uniform_int_distribution<int> vert(1, n);
  for (int k = 0; k < extra_edges; ++k) {
    int a = vert(rng), b = vert(rng);
    while (b == a) b = vert(rng);
    add(std::min(a, b), std::max(a, b));
  }
  return g;
}

// Brute force: every edge subset in which each touched vertex has degree 2
// and the subset is connected is one simple circuit.
inline std::set<std::set<int>> brute_force_circuit_edge_sets(const RateGraph& g) {
  const auto& edges = g.edges();
  const std::size_t m = edges.size();
  std::set<std::set<int>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<int> degree(static_cast<std::size_t>(g.vertex_count()) + 1, 0);
    std::vector<int> parent(degree.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::set<int> ids;
    for (std::size_t k = 0; k < m; ++k)
      if (mask >> k & 1) {
        ++degree[edges[k].tail];
        ++degree[edges[k].head];
        parent[find(edges[k].tail)] = find(edges[k].head);
        ids.insert(edges[k].id);
      }
    bool ok = true;
    int root = -1;
    for (int v = 1; v <= g.vertex_count() && ok; ++v) {
      if (degree[v] == 0) continue;
      if (degree[v] != 2) ok = false;
      else if (root < 0) root = find(v);
      else if (find(v) != root) ok = false;
    }
    if (ok) out.insert(ids);
  }
  return out;
}

inline std::set<std::set<int>> edge_sets(const std::vector<Circuit>& cs) {
  std::set<std::set<int>> out;
  for (const auto& c : cs) out.insert(std::set<int>(c.edge_ids.begin(), c.edge_ids.end()));
  return out;
}

}  // namespace qtnet::test
