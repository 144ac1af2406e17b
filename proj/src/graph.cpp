#include "qtnet/graph.hpp"

#include "qtnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qtnet {

std::string_view bath_label(Bath b) {
  switch (b) {
    case Bath::cold: return "c";
    case Bath::hot: return "h";
    case Bath::work: return "w";
  }
  return "?";
}

std::optional<Bath> parse_bath(std::string_view label) {
  if (label == "c") return Bath::cold;
  if (label == "h") return Bath::hot;
  if (label == "w") return Bath::work;
  return std::nullopt;
}

int RateGraph::add_vertex(double eigenfrequency) {
  const int index = vertex_count() + 1;
  vertices_.push_back({index, eigenfrequency});
  return index;
}

int RateGraph::add_edge(int tail, int head, Bath bath, double quantum, double rate_up,
                        double rate_down) {
  int id = 1;
  for (const auto& e : edges_) id = std::max(id, e.id + 1);
  edges_.push_back({id, tail, head, bath, quantum, rate_up, rate_down});
  return id;
}

void RateGraph::remove_edge(int id) {
  std::erase_if(edges_, [id](const Edge& e) { return e.id == id; });
}

const Edge& RateGraph::edge(int id) const {
  for (const auto& e : edges_)
    if (e.id == id) return e;
  throw graph_error("no edge with id " + std::to_string(id));
}

const BathSpec& RateGraph::bath(Bath b) const {
  auto it = baths_.find(b);
  if (it == baths_.end())
    throw graph_error("bath '" + std::string(bath_label(b)) + "' is not attached");
  return it->second;
}

bool RateGraph::three_bath() const {
  auto it = baths_.find(Bath::work);
  return it != baths_.end() && it->second.kind == BathKind::thermal;
}

bool ValidationReport::has(ViolationKind k) const {
  return std::any_of(violations.begin(), violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

std::string ValidationReport::summary() const {
  if (ok()) return "pass";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].detail;
  }
  return os.str();
}

ValidationReport validate_graph(const RateGraph& graph) {
  ValidationReport report;
  auto flag = [&](ViolationKind k, std::string detail) {
    report.violations.push_back({k, std::move(detail)});
  };

  const int n = graph.vertex_count();
  for (int i = 0; i < n; ++i) {
    const auto& v = graph.vertices()[i];
    if (v.index != i + 1 || !std::isfinite(v.eigenfrequency))
      flag(ViolationKind::bad_vertex, "vertex " + std::to_string(i + 1) + " malformed");
  }

  std::set<int> ids;
  for (const auto& e : graph.edges()) {
    const std::string name = "edge " + std::to_string(e.id);
    if (!ids.insert(e.id).second) flag(ViolationKind::duplicate_edge_id, name + ": duplicate id");
    if (e.tail < 1 || e.tail > n || e.head < 1 || e.head > n || e.tail == e.head) {
      flag(ViolationKind::bad_vertex, name + ": endpoints out of range");
      continue;
    }
    if (!graph.has_bath(e.bath)) {
      flag(ViolationKind::unknown_bath, name + ": bath '" + std::string(bath_label(e.bath)) +
                                            "' not attached");
      continue;
    }
    if (!(e.rate_up > 0.0) || !(e.rate_down > 0.0) || !std::isfinite(e.rate_up) ||
        !std::isfinite(e.rate_down)) {
      flag(ViolationKind::nonpositive_rate, name + ": nonpositive rate");
      continue;
    }
    if (!(e.quantum >= 0.0)) {
      flag(ViolationKind::negative_quantum, name + ": negative quantum");
      continue;
    }
    const auto& spec = graph.bath(e.bath);
    if (spec.kind != BathKind::thermal) {
      flag(ViolationKind::unknown_bath, name + ": edge owned by a work source");
      continue;
    }
    const double expected = std::exp(-e.quantum / spec.temperature);
    const double ratio = e.rate_up / e.rate_down;
    if (std::abs(ratio - expected) > kKmsTolerance * expected)
      flag(ViolationKind::kms_violation, name + ": rate ratio violates detailed balance");
  }

  if (n > 0) {
    std::vector<int> parent(n + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& e : graph.edges())
      if (e.tail >= 1 && e.tail <= n && e.head >= 1 && e.head <= n)
        parent[find(e.tail)] = find(e.head);
    const int root = find(1);
    for (int v = 2; v <= n; ++v)
      if (find(v) != root) {
        flag(ViolationKind::disconnected, "vertex " + std::to_string(v) + " not connected to 1");
        break;
      }
  }
  return report;
}

RateMatrices rate_matrix(const RateGraph& graph) {
  const auto report = validate_graph(graph);
  if (!report.ok()) throw graph_error("invalid rate graph: " + report.summary());

  const int n = graph.vertex_count();
  RateMatrices m;
  m.total = Eigen::MatrixXd::Zero(n, n);
  for (Bath b : kAllBaths) m.per_bath[b] = Eigen::MatrixXd::Zero(n, n);

  for (const auto& e : graph.edges()) {
    auto& w = m.per_bath[e.bath];
    const int t = e.tail - 1;
    const int h = e.head - 1;
    w(h, t) += e.rate_up;
    w(t, h) += e.rate_down;
    w(t, t) -= e.rate_up;
    w(h, h) -= e.rate_down;
  }
  for (Bath b : kAllBaths) m.total += m.per_bath[b];
  return m;
}

// ---------------------------------------------------------------------------

std::string Circuit::vertex_string() const {
  std::ostringstream os;
  for (int v : vertices) os << v << '-';
  if (!vertices.empty()) os << vertices.front();
  return os.str();
}

Circuit canonicalize(std::vector<int> vertices, std::vector<int> edge_ids) {
  const std::size_t n = vertices.size();
  if (n == 0 || edge_ids.size() != n) return {std::move(vertices), std::move(edge_ids)};

  const auto start = static_cast<std::size_t>(
      std::min_element(vertices.begin(), vertices.end()) - vertices.begin());
  std::rotate(vertices.begin(), vertices.begin() + static_cast<long>(start), vertices.end());
  std::rotate(edge_ids.begin(), edge_ids.begin() + static_cast<long>(start), edge_ids.end());

  // Reversed traversal from the same start: v0, v_{n-1}, ..., v1 with edges
  // e_{n-1}, e_{n-2}, ..., e0.
  if (edge_ids.back() < edge_ids.front()) {
    std::reverse(vertices.begin() + 1, vertices.end());
    std::reverse(edge_ids.begin(), edge_ids.end());
  }
  return {std::move(vertices), std::move(edge_ids)};
}

Circuit canonicalize(const Circuit& c) { return canonicalize(c.vertices, c.edge_ids); }

bool is_simple_circuit(const Circuit& c, const RateGraph& graph) {
  const std::size_t n = c.size();
  if (n < 2 || c.vertices.size() != n) return false;
  std::set<int> vs(c.vertices.begin(), c.vertices.end());
  std::set<int> es(c.edge_ids.begin(), c.edge_ids.end());
  if (vs.size() != n || es.size() != n) return false;
  for (std::size_t k = 0; k < n; ++k) {
    const Edge* e = nullptr;
    for (const auto& cand : graph.edges())
      if (cand.id == c.edge_ids[k]) e = &cand;
    if (!e) return false;
    const int a = c.vertices[k];
    const int b = c.vertices[(k + 1) % n];
    if (!((e->tail == a && e->head == b) || (e->tail == b && e->head == a))) return false;
  }
  return true;
}

std::vector<DirectedStep> directed_steps(const Cycle& cycle, const RateGraph& graph) {
  const auto& c = cycle.circuit;
  const std::size_t n = c.size();
  std::vector<DirectedStep> steps;
  steps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Edge& e = graph.edge(c.edge_ids[k]);
    int from = c.vertices[k];
    int to = c.vertices[(k + 1) % n];
    if (cycle.orientation < 0) std::swap(from, to);
    steps.push_back({&e, from, to, from == e.tail});
  }
  return steps;
}

std::optional<Cycle> cycle_from_path(const RateGraph& graph, const std::vector<int>& path,
                                     const std::vector<Bath>& step_baths) {
  const std::size_t n = path.size();
  if (n < 2) return std::nullopt;
  std::vector<int> edge_ids;
  for (std::size_t k = 0; k < n; ++k) {
    const int a = path[k];
    const int b = path[(k + 1) % n];
    std::vector<const Edge*> candidates;
    for (const auto& e : graph.edges()) {
      const bool joins = (e.tail == a && e.head == b) || (e.tail == b && e.head == a);
      if (!joins) continue;
      if (k < step_baths.size() && e.bath != step_baths[k]) continue;
      if (std::find(edge_ids.begin(), edge_ids.end(), e.id) != edge_ids.end()) continue;
      candidates.push_back(&e);
    }
    if (candidates.size() != 1) return std::nullopt;
    edge_ids.push_back(candidates.front()->id);
  }

  Circuit raw{path, edge_ids};
  if (!is_simple_circuit(raw, graph)) return std::nullopt;
  Cycle cycle{canonicalize(raw), +1};
  for (const auto& s : directed_steps(cycle, graph))
    if (s.edge->id == edge_ids[0]) {
      if (s.from != path[0]) cycle.orientation = -1;
      break;
    }
  return cycle;
}

std::optional<Cycle> find_cycle(const std::vector<Circuit>& circuits, const RateGraph& graph,
                                const std::vector<int>& path,
                                const std::vector<Bath>& step_baths) {
  auto cycle = cycle_from_path(graph, path, step_baths);
  if (!cycle) return std::nullopt;
  if (std::find(circuits.begin(), circuits.end(), cycle->circuit) == circuits.end())
    return std::nullopt;
  return cycle;
}

MaximalTree spanning_tree_and_chords(const RateGraph& graph) {
  const int n = graph.vertex_count();
  if (n == 0) throw graph_error("empty graph");

  std::vector<const Edge*> sorted;
  for (const auto& e : graph.edges()) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto a, auto b) { return a->id < b->id; });

  std::vector<bool> seen(n + 1, false);
  std::vector<int> queue{1};
  seen[1] = true;
  std::set<int> tree;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int v = queue[qi];
    for (const Edge* e : sorted) {
      int other = 0;
      if (e->tail == v) other = e->head;
      else if (e->head == v) other = e->tail;
      else continue;
      if (seen[other]) continue;
      seen[other] = true;
      tree.insert(e->id);
      queue.push_back(other);
    }
  }
  if (static_cast<int>(queue.size()) != n) throw graph_error("graph is disconnected");

  MaximalTree t;
  for (const Edge* e : sorted) {
    if (tree.count(e->id)) t.tree_edge_ids.push_back(e->id);
    else t.chord_edge_ids.push_back(e->id);
  }
  return t;
}

}  // namespace qtnet
