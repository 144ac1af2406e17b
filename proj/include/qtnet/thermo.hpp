#pragma once

// Steady state and circuit-resolved thermodynamics of a rate graph.
//
// Signs: heat currents are positive when energy flows into the system. The
// cycle flux of an oriented circuit is
//
//   I = det(-W|C) * (A(+C) - A(-C)) / D,
//
// with A the product of rates along the cycle, det(-W|C) the minor of -W
// with the circuit's vertices removed (1 when nothing is left) and D the
// normalisation |det| of W with one row replaced by ones.

#include "qtnet/graph.hpp"

#include <string>
#include <vector>

namespace qtnet {

struct SteadyState {
  Eigen::VectorXd populations;
  double normalization = 0.0;  // D
};

/// Solves W p = 0, sum p = 1 by replacing `row` of W with ones.
/// Throws ErrorKind::physics when W is reducible (singular after the
/// replacement) or the solution is not strictly positive.
SteadyState steady_state(const Eigen::MatrixXd& W, int row = 0);

/// |det W~| with `row` replaced by ones.
double normalization_determinant(const Eigen::MatrixXd& W, int row = 0);

/// det(-W|C): circuit vertices removed; the empty minor is 1.
double minor_determinant(const Eigen::MatrixXd& W, const Circuit& circuit);

/// Product of rates of bath-alpha edges traversed by the cycle; 1 when the
/// cycle has no alpha edge.
PerBath<double> algebraic_values(const Cycle& cycle, const RateGraph& graph);

struct Affinities {
  PerBath<double> per_bath{};
  double total = 0.0;
};

/// X^alpha = ln(A^alpha(+C)/A^alpha(-C)); cross-checked against
/// -sum sigma_e quantum_e / T_alpha. Throws ErrorKind::physics if the two
/// routes disagree beyond 1e-10 relative.
Affinities affinity(const Cycle& cycle, const RateGraph& graph);

enum class CircuitClass { trivial, heat_leak, tricycle };
std::string_view class_name(CircuitClass c);

/// Affinity magnitudes below this count as zero: 1e-9 times the largest
/// hot-bath quantum over the lowest temperature.
double affinity_zero_tolerance(const RateGraph& graph);

CircuitClass classify(const Affinities& x, const RateGraph& graph);

struct CircuitReport {
  Circuit circuit;
  Affinities affinities;  // canonical orientation
  double flux = 0.0;      // canonical orientation
  PerBath<double> heat{};
  double entropy = 0.0;
  double power = 0.0;  // work-source graphs only; 0 with a thermal work bath
  CircuitClass cls = CircuitClass::trivial;
  double minor_det = 0.0;
};

/// Per-graph evaluation context: rate matrix and steady state computed once.
class CircuitAnalyzer {
 public:
  explicit CircuitAnalyzer(const RateGraph& graph);

  const RateGraph& graph() const { return graph_; }
  const RateMatrices& rates() const { return rates_; }
  const SteadyState& steady() const { return steady_; }

  double flux(const Cycle& cycle) const;
  CircuitReport report(const Circuit& circuit) const;

 private:
  const RateGraph& graph_;
  RateMatrices rates_;
  SteadyState steady_;
};

double circuit_flux(const Cycle& cycle, const RateGraph& graph, const Eigen::MatrixXd& W,
                    const SteadyState& steady);

CircuitReport circuit_currents(const Circuit& circuit, const RateGraph& graph,
                               const Eigen::MatrixXd& W, const SteadyState& steady);

struct Totals {
  PerBath<double> heat{};
  double power = 0.0;
  double entropy = 0.0;
};

/// Heat currents from the edges directly:
/// Q_alpha = sum_{e in alpha} quantum_e (rate_up p_tail - rate_down p_head).
/// Entropy is -sum Q_alpha/T_alpha over thermal baths.
Totals direct_currents(const RateGraph& graph, const SteadyState& steady);

/// Net probability current tail->head of every edge, by edge position.
std::vector<double> edge_currents(const RateGraph& graph, const SteadyState& steady);

struct Reconciliation {
  Totals circuit_sum;
  Totals direct;
  double max_heat_discrepancy = 0.0;     // relative
  double power_discrepancy = 0.0;        // relative
  double entropy_discrepancy = 0.0;      // relative
  double max_edge_discrepancy = 0.0;     // relative, edge-level decomposition
  double max_discrepancy() const;
};

inline constexpr double kReconciliationTolerance = 1e-8;
inline constexpr double kResolutionFloor = 1e-4;

/// Compares circuit sums with the direct edge sums. Relative discrepancies
/// are measured against max(|direct|, sum of |circuit contributions|,
/// kResolutionFloor * gross one-way exchange).
/// Throws ErrorKind::physics above kReconciliationTolerance.
Reconciliation total_currents(const RateGraph& graph, const std::vector<CircuitReport>& reports,
                              const SteadyState& steady);

/// Same comparison without the throw.
Reconciliation reconcile(const RateGraph& graph, const std::vector<CircuitReport>& reports,
                         const SteadyState& steady);

}  // namespace qtnet
