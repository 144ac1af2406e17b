#pragma once

// Master equations in graph form.
//
// Vertices are eigenstates of the system Hamiltonian (1-based, as in the
// usual state labelling); every undirected edge is one bath-assisted
// transition carrying a forward (absorptive) and backward (emissive) rate.
// Parallel edges are allowed, so the graph is a multigraph.
//
// Units throughout: hbar = k_B = omega_0 = 1.

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtnet {

enum class Bath : std::uint8_t { cold = 0, hot = 1, work = 2 };

inline constexpr std::array<Bath, 3> kAllBaths{Bath::cold, Bath::hot, Bath::work};

/// One value per bath, indexed by Bath.
template <typename T>
struct PerBath {
  std::array<T, 3> values{};

  T& operator[](Bath b) { return values[static_cast<std::size_t>(b)]; }
  const T& operator[](Bath b) const { return values[static_cast<std::size_t>(b)]; }
};

std::string_view bath_label(Bath b);  // "c", "h", "w"
std::optional<Bath> parse_bath(std::string_view label);

enum class BathKind { thermal, work_source };

struct BathSpec {
  Bath label = Bath::cold;
  BathKind kind = BathKind::thermal;
  double temperature = 1.0;  // hbar*omega_0/k_B; unused for a work source
  int dimension = 3;
  double coupling = 1e-6;  // gamma, units of omega_0
};

struct Vertex {
  int index = 0;
  double eigenfrequency = 0.0;
};

/// One bath-assisted transition. `tail` is the endpoint that absorbs the
/// quantum from the bath, so `quantum` >= 0 and rate_up is the absorption
/// rate tail->head.
struct Edge {
  int id = 0;
  int tail = 0;
  int head = 0;
  Bath bath = Bath::cold;
  double quantum = 0.0;
  double rate_up = 0.0;    // W_{head,tail}
  double rate_down = 0.0;  // W_{tail,head}
};

class RateGraph {
 public:
  RateGraph() = default;

  int add_vertex(double eigenfrequency);
  int add_edge(int tail, int head, Bath bath, double quantum, double rate_up,
               double rate_down);
  void add_bath(const BathSpec& spec) { baths_[spec.label] = spec; }

  // Raw insertion used by deserialisation and by tests that need
  // deliberately broken graphs.
  void push_edge(const Edge& e) { edges_.push_back(e); }
  void remove_edge(int id);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::map<Bath, BathSpec>& baths() const { return baths_; }

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  /// Throws if no edge has this id.
  const Edge& edge(int id) const;
  const BathSpec& bath(Bath b) const;
  bool has_bath(Bath b) const { return baths_.count(b) != 0; }

  /// True when a thermal work bath is attached. Otherwise the work
  /// exchange is with a classical field and only c and h carry edges.
  bool three_bath() const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::map<Bath, BathSpec> baths_;
};

enum class ViolationKind {
  disconnected,
  nonpositive_rate,
  kms_violation,
  duplicate_edge_id,
  unknown_bath,
  bad_vertex,
  negative_quantum,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const;
  std::string summary() const;
};

/// Relative tolerance on rate_up/rate_down = exp(-quantum/T).
inline constexpr double kKmsTolerance = 1e-12;

ValidationReport validate_graph(const RateGraph& graph);

struct RateMatrices {
  Eigen::MatrixXd total;
  PerBath<Eigen::MatrixXd> per_bath;
};

/// W_{ij} = rate from j to i; every column sums to zero for each bath.
/// Throws ErrorKind::graph on an invalid graph.
RateMatrices rate_matrix(const RateGraph& graph);

// ---------------------------------------------------------------------------
// Circuits

/// A simple closed path. edge_ids[k] joins vertices[k] and
/// vertices[(k+1) % size()]. In canonical form vertices[0] is the smallest
/// vertex and, of the two traversal directions, the one whose first edge has
/// the smaller id is kept.
struct Circuit {
  std::vector<int> vertices;
  std::vector<int> edge_ids;

  std::size_t size() const { return edge_ids.size(); }
  auto operator<=>(const Circuit&) const = default;
  bool operator==(const Circuit&) const = default;

  /// "1-3-4-1"
  std::string vertex_string() const;
};

/// Brings a closed walk given as (vertices, edges) into canonical form.
/// Does not check simplicity; see is_simple_circuit.
Circuit canonicalize(std::vector<int> vertices, std::vector<int> edge_ids);
Circuit canonicalize(const Circuit& c);

bool is_simple_circuit(const Circuit& c, const RateGraph& graph);

/// An oriented circuit: +1 follows the stored traversal, -1 reverses it.
struct Cycle {
  Circuit circuit;
  int orientation = +1;

  Cycle reversed() const { return {circuit, -orientation}; }
};

struct DirectedStep {
  const Edge* edge;
  int from;
  int to;
  bool with_edge;  // from == edge->tail
};

std::vector<DirectedStep> directed_steps(const Cycle& cycle, const RateGraph& graph);

/// Cycle that follows `path` (vertex sequence without the closing vertex).
/// Where two vertices are joined by parallel edges, `step_baths[k]` picks
/// the edge of step k; unambiguous steps may be left out by passing a
/// shorter vector. Returns nullopt if the path is not a simple circuit of
/// the graph.
std::optional<Cycle> cycle_from_path(const RateGraph& graph, const std::vector<int>& path,
                                     const std::vector<Bath>& step_baths = {});

/// As cycle_from_path, additionally requiring the circuit to be in
/// `circuits`.
std::optional<Cycle> find_cycle(const std::vector<Circuit>& circuits, const RateGraph& graph,
                                const std::vector<int>& path,
                                const std::vector<Bath>& step_baths = {});

struct MaximalTree {
  std::vector<int> tree_edge_ids;
  std::vector<int> chord_edge_ids;
};

/// Breadth-first from vertex 1, scanning incident edges in ascending id.
/// Throws ErrorKind::graph if the graph is disconnected.
MaximalTree spanning_tree_and_chords(const RateGraph& graph);

/// Fundamental circuits of `tree`, one per chord, in chord order.
std::vector<Circuit> fundamental_circuits(const RateGraph& graph, const MaximalTree& tree);

/// All simple circuits via XOR-combinations of the fundamental set.
/// Sorted by (length, vertices, edge ids).
std::vector<Circuit> enumerate_circuits(const RateGraph& graph);

/// All simple circuits via backtracking search; independent of the tree route.
std::vector<Circuit> enumerate_circuits_oracle(const RateGraph& graph);

void sort_circuits(std::vector<Circuit>& circuits);

}  // namespace qtnet
