// Simple-circuit enumeration: a cycle-space route (maximal tree, fundamental
// set, XOR closure) and an independent backtracking search.

#include "qtnet/error.hpp"
#include "qtnet/graph.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace qtnet {

namespace {

struct Adjacency {
  // vertex -> (edge id, neighbour), ascending edge id
  std::map<int, std::vector<std::pair<int, int>>> out;

  explicit Adjacency(const RateGraph& g) {
    for (const auto& e : g.edges()) {
      out[e.tail].push_back({e.id, e.head});
      out[e.head].push_back({e.id, e.tail});
    }
    for (auto& [v, list] : out) std::sort(list.begin(), list.end());
  }

  const std::vector<std::pair<int, int>>& of(int v) const {
    static const std::vector<std::pair<int, int>> empty;
    auto it = out.find(v);
    return it == out.end() ? empty : it->second;
  }
};

// Turns an edge set into a circuit if it is exactly one simple closed path.
std::optional<Circuit> as_single_circuit(const std::vector<const Edge*>& edges) {
  if (edges.size() < 2) return std::nullopt;
  std::map<int, std::vector<const Edge*>> incident;
  for (const Edge* e : edges) {
    incident[e->tail].push_back(e);
    incident[e->head].push_back(e);
  }
  for (const auto& [v, list] : incident)
    if (list.size() != 2) return std::nullopt;
  if (incident.size() != edges.size()) return std::nullopt;

  std::vector<int> vs;
  std::vector<int> es;
  const int start = incident.begin()->first;
  int v = start;
  const Edge* prev = nullptr;
  do {
    const auto& list = incident[v];
    const Edge* next = (list[0] != prev) ? list[0] : list[1];
    vs.push_back(v);
    es.push_back(next->id);
    v = (next->tail == v) ? next->head : next->tail;
    prev = next;
  } while (v != start);

  // A closed walk shorter than the edge set means several disjoint loops.
  if (es.size() != edges.size()) return std::nullopt;
  return canonicalize(std::move(vs), std::move(es));
}

}  // namespace

void sort_circuits(std::vector<Circuit>& circuits) {
  std::sort(circuits.begin(), circuits.end(), [](const Circuit& a, const Circuit& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

std::vector<Circuit> fundamental_circuits(const RateGraph& graph, const MaximalTree& tree) {
  const int n = graph.vertex_count();
  std::vector<int> parent(n + 1, 0);
  std::vector<int> parent_edge(n + 1, 0);
  std::vector<int> depth(n + 1, -1);

  std::map<int, std::vector<std::pair<int, int>>> adj;
  for (int id : tree.tree_edge_ids) {
    const Edge& e = graph.edge(id);
    adj[e.tail].push_back({id, e.head});
    adj[e.head].push_back({id, e.tail});
  }
  std::vector<int> queue{1};
  depth[1] = 0;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (auto [id, w] : adj[v]) {
      if (depth[w] >= 0) continue;
      depth[w] = depth[v] + 1;
      parent[w] = v;
      parent_edge[w] = id;
      queue.push_back(w);
    }
  }

  std::vector<Circuit> out;
  for (int chord : tree.chord_edge_ids) {
    const Edge& e = graph.edge(chord);
    // Tree path tail -> head, then the chord closes it.
    std::vector<int> up_v, up_e, down_v, down_e;
    int a = e.tail;
    int b = e.head;
    while (depth[a] > depth[b]) { up_v.push_back(a); up_e.push_back(parent_edge[a]); a = parent[a]; }
    while (depth[b] > depth[a]) { down_v.push_back(b); down_e.push_back(parent_edge[b]); b = parent[b]; }
    while (a != b) {
      up_v.push_back(a); up_e.push_back(parent_edge[a]); a = parent[a];
      down_v.push_back(b); down_e.push_back(parent_edge[b]); b = parent[b];
    }
    std::vector<int> vs = up_v;
    std::vector<int> es = up_e;
    vs.push_back(a);  // common ancestor
    for (std::size_t k = down_v.size(); k-- > 0;) {
      es.push_back(down_e[k]);
      vs.push_back(down_v[k]);
    }
    es.push_back(chord);  // head -> tail
    out.push_back(canonicalize(std::move(vs), std::move(es)));
  }
  return out;
}

std::vector<Circuit> enumerate_circuits(const RateGraph& graph) {
  const MaximalTree tree = spanning_tree_and_chords(graph);
  const std::vector<Circuit> fundamentals = fundamental_circuits(graph, tree);
  const std::size_t k = fundamentals.size();
  if (k > 30) throw graph_error("too many chords for exhaustive XOR closure");

  const auto& edges = graph.edges();
  std::map<int, std::size_t> position;
  for (std::size_t i = 0; i < edges.size(); ++i) position[edges[i].id] = i;

  std::vector<std::vector<char>> masks(k, std::vector<char>(edges.size(), 0));
  for (std::size_t i = 0; i < k; ++i)
    for (int id : fundamentals[i].edge_ids) masks[i][position.at(id)] = 1;

  // Gray-code walk: each step toggles one fundamental circuit in or out.
  std::set<Circuit> found;
  std::vector<char> current(edges.size(), 0);
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto flip = static_cast<std::size_t>(__builtin_ctzll(step));
    for (std::size_t j = 0; j < edges.size(); ++j) current[j] ^= masks[flip][j];

    std::vector<const Edge*> subset;
    for (std::size_t j = 0; j < edges.size(); ++j)
      if (current[j]) subset.push_back(&edges[j]);
    if (auto c = as_single_circuit(subset)) found.insert(std::move(*c));
  }

  std::vector<Circuit> out(found.begin(), found.end());
  sort_circuits(out);
  return out;
}

std::vector<Circuit> enumerate_circuits_oracle(const RateGraph& graph) {
  const Adjacency adj(graph);
  const int n = graph.vertex_count();
  std::set<Circuit> found;

  std::vector<int> path_v;
  std::vector<int> path_e;
  std::vector<char> on_path(n + 1, 0);

  // Circuits are rooted at their smallest vertex: only larger vertices may
  // be visited below the root.
  auto search = [&](auto&& self, int root, int v) -> void {
    for (auto [id, w] : adj.of(v)) {
      if (std::find(path_e.begin(), path_e.end(), id) != path_e.end()) continue;
      if (w == root) {
        auto vs = path_v;
        auto es = path_e;
        es.push_back(id);
        found.insert(canonicalize(std::move(vs), std::move(es)));
        continue;
      }
      if (w < root || on_path[w]) continue;
      on_path[w] = 1;
      path_v.push_back(w);
      path_e.push_back(id);
      self(self, root, w);
      path_e.pop_back();
      path_v.pop_back();
      on_path[w] = 0;
    }
  };

  for (int root = 1; root <= n; ++root) {
    path_v = {root};
    path_e.clear();
    on_path[root] = 1;
    search(search, root, root);
    on_path[root] = 0;
  }

  std::vector<Circuit> out(found.begin(), found.end());
  sort_circuits(out);
  return out;
}

}  // namespace qtnet
