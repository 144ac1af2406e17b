#include "qtnet/thermo.hpp"

#include "qtnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <map>
#include <vector>

namespace qtnet {

namespace {

Eigen::MatrixXd with_unit_row(const Eigen::MatrixXd& W, int row) {
  Eigen::MatrixXd m = W;
  m.row(row).setOnes();
  return m;
}

std::string format_scientific(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double relative_gap(double a, double b, double scale) {
  const double denom = std::max({std::abs(a), std::abs(b), scale});
  if (denom == 0.0) return 0.0;
  return std::abs(a - b) / denom;
}

// Strong connectivity of the directed graph j -> i with W_ij > 0.
bool irreducible(const Eigen::MatrixXd& W) {
  const auto n = W.rows();
  for (bool transpose : {false, true}) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const auto j = stack.back();
      stack.pop_back();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double w = transpose ? W(j, i) : W(i, j);
        if (i == j || seen[static_cast<std::size_t>(i)] || !(w > 0.0)) continue;
        seen[static_cast<std::size_t>(i)] = 1;
        ++count;
        stack.push_back(i);
      }
    }
    if (count != n) return false;
  }
  return true;
}

}  // namespace

double normalization_determinant(const Eigen::MatrixXd& W, int row) {
  if (row < 0 || row >= W.rows()) throw physics_error("normalisation row out of range");
  return std::abs(with_unit_row(W, row).partialPivLu().determinant());
}

SteadyState steady_state(const Eigen::MatrixXd& W, int row) {
  const auto n = W.rows();
  if (n == 0 || W.cols() != n) throw physics_error("rate matrix must be square and non-empty");
  if (row < 0 || row >= n) throw physics_error("normalisation row out of range");

  if (!irreducible(W)) throw physics_error("rate matrix is reducible");

  const Eigen::MatrixXd A = with_unit_row(W, row);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double det = lu.determinant();
  if (!std::isfinite(det) || det == 0.0) throw physics_error("normalisation matrix is singular");

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(row) = 1.0;
  SteadyState s;
  s.populations = lu.solve(rhs);
  s.normalization = std::abs(det);
  if ((s.populations.array() <= 0.0).any()) throw physics_error("steady state is not strictly positive");
  return s;
}

double minor_determinant(const Eigen::MatrixXd& W, const Circuit& circuit) {
  const auto n = W.rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (std::find(circuit.vertices.begin(), circuit.vertices.end(), static_cast<int>(i + 1)) ==
        circuit.vertices.end())
      keep.push_back(i);
  if (keep.empty()) return 1.0;

  const auto m = static_cast<Eigen::Index>(keep.size());
  Eigen::MatrixXd sub(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = -W(keep[a], keep[b]);
  return sub.partialPivLu().determinant();
}

PerBath<double> algebraic_values(const Cycle& cycle, const RateGraph& graph) {
  PerBath<double> a;
  a.values.fill(1.0);
  for (const auto& s : directed_steps(cycle, graph))
    a[s.edge->bath] *= s.with_edge ? s.edge->rate_up : s.edge->rate_down;
  return a;
}

Affinities affinity(const Cycle& cycle, const RateGraph& graph) {
  PerBath<double> from_rates{};
  PerBath<double> from_quanta{};
  PerBath<double> scale{};
  for (const auto& s : directed_steps(cycle, graph)) {
    const Edge& e = *s.edge;
    const double sigma = s.with_edge ? 1.0 : -1.0;
    // ln(forward rate / backward rate) edge by edge keeps the sum in log
    // space at low temperature.
    from_rates[e.bath] += sigma * (std::log(e.rate_up) - std::log(e.rate_down));
    const double T = graph.bath(e.bath).temperature;
    from_quanta[e.bath] += -sigma * e.quantum / T;
    scale[e.bath] += std::abs(e.quantum / T);
  }

  Affinities x;
  for (Bath b : kAllBaths) {
    if (relative_gap(from_rates[b], from_quanta[b], 0.0) > 1e-10 &&
        std::abs(from_rates[b] - from_quanta[b]) > 1e-10 * scale[b])
      throw physics_error("affinity routes disagree for bath " + std::string(bath_label(b)) +
                          " on circuit " + cycle.circuit.vertex_string());
    x.per_bath[b] = from_quanta[b];
    x.total += from_quanta[b];
  }
  return x;
}

std::string_view class_name(CircuitClass c) {
  switch (c) {
    case CircuitClass::trivial: return "trivial";
    case CircuitClass::heat_leak: return "heat_leak";
    case CircuitClass::tricycle: return "tricycle";
  }
  return "?";
}

double affinity_zero_tolerance(const RateGraph& graph) {
  double omega = 0.0;
  for (const auto& e : graph.edges())
    if (e.bath == Bath::hot) omega = std::max(omega, e.quantum);
  if (omega == 0.0)
    for (const auto& e : graph.edges()) omega = std::max(omega, e.quantum);
  double t_min = 0.0;
  for (const auto& [label, spec] : graph.baths())
    if (spec.kind == BathKind::thermal && (t_min == 0.0 || spec.temperature < t_min))
      t_min = spec.temperature;
  if (t_min == 0.0) t_min = 1.0;
  return 1e-9 * omega / t_min;
}

CircuitClass classify(const Affinities& x, const RateGraph& graph) {
  const double tol = affinity_zero_tolerance(graph);
  auto zero = [tol](double v) { return std::abs(v) <= tol; };

  if (graph.three_bath()) {
    int zeros = 0;
    for (Bath b : kAllBaths) zeros += zero(x.per_bath[b]) ? 1 : 0;
    if (zeros == 3) return CircuitClass::trivial;
    if (zeros == 1) return CircuitClass::heat_leak;
    return CircuitClass::tricycle;
  }

  if (zero(x.per_bath[Bath::cold]) && zero(x.per_bath[Bath::hot])) return CircuitClass::trivial;
  const double tc = graph.bath(Bath::cold).temperature;
  const double th = graph.bath(Bath::hot).temperature;
  double t_min = std::min(tc, th);
  const double exchanged = tc * x.per_bath[Bath::cold] + th * x.per_bath[Bath::hot];
  return std::abs(exchanged) <= tol * t_min ? CircuitClass::heat_leak : CircuitClass::tricycle;
}

// ---------------------------------------------------------------------------

double circuit_flux(const Cycle& cycle, const RateGraph& graph, const Eigen::MatrixXd& W,
                    const SteadyState& steady) {
  const PerBath<double> fwd = algebraic_values(cycle, graph);
  const PerBath<double> bwd = algebraic_values(cycle.reversed(), graph);
  double a_fwd = 1.0;
  double a_bwd = 1.0;
  for (Bath b : kAllBaths) {
    a_fwd *= fwd[b];
    a_bwd *= bwd[b];
  }
  return minor_determinant(W, cycle.circuit) * (a_fwd - a_bwd) / steady.normalization;
}

CircuitReport circuit_currents(const Circuit& circuit, const RateGraph& graph,
                               const Eigen::MatrixXd& W, const SteadyState& steady) {
  const Cycle cycle{circuit, +1};
  CircuitReport r;
  r.circuit = circuit;
  r.affinities = affinity(cycle, graph);
  r.minor_det = minor_determinant(W, circuit);
  r.flux = circuit_flux(cycle, graph, W, steady);
  r.cls = classify(r.affinities, graph);
  // Affinities below the zero tolerance are rounding residue; a trivial
  // circuit carries no heat and produces no entropy.
  if (r.cls == CircuitClass::trivial) return r;
  for (Bath b : kAllBaths) {
    if (r.affinities.per_bath[b] == 0.0) continue;
    r.heat[b] = -graph.bath(b).temperature * r.flux * r.affinities.per_bath[b];
  }
  r.entropy = r.flux * r.affinities.total;
  if (!graph.three_bath()) r.power = -r.heat[Bath::cold] - r.heat[Bath::hot];
  return r;
}

CircuitAnalyzer::CircuitAnalyzer(const RateGraph& graph)
    : graph_(graph), rates_(rate_matrix(graph)), steady_(steady_state(rates_.total)) {}

double CircuitAnalyzer::flux(const Cycle& cycle) const {
  return circuit_flux(cycle, graph_, rates_.total, steady_);
}

CircuitReport CircuitAnalyzer::report(const Circuit& circuit) const {
  return circuit_currents(circuit, graph_, rates_.total, steady_);
}

// ---------------------------------------------------------------------------

std::vector<double> edge_currents(const RateGraph& graph, const SteadyState& steady) {
  std::vector<double> j;
  j.reserve(graph.edges().size());
  for (const auto& e : graph.edges())
    j.push_back(e.rate_up * steady.populations(e.tail - 1) -
                e.rate_down * steady.populations(e.head - 1));
  return j;
}

Totals direct_currents(const RateGraph& graph, const SteadyState& steady) {
  Totals t;
  const auto j = edge_currents(graph, steady);
  for (std::size_t k = 0; k < j.size(); ++k) {
    const Edge& e = graph.edges()[k];
    t.heat[e.bath] += e.quantum * j[k];
  }
  for (const auto& [label, spec] : graph.baths())
    if (spec.kind == BathKind::thermal) t.entropy -= t.heat[label] / spec.temperature;
  if (!graph.three_bath()) t.power = -t.heat[Bath::cold] - t.heat[Bath::hot];
  return t;
}

double Reconciliation::max_discrepancy() const {
  return std::max({max_heat_discrepancy, power_discrepancy, entropy_discrepancy,
                   max_edge_discrepancy});
}

Reconciliation reconcile(const RateGraph& graph, const std::vector<CircuitReport>& reports,
                         const SteadyState& steady) {
  Reconciliation rec;
  rec.direct = direct_currents(graph, steady);

  // Net currents near a reversible point are small differences of the gross
  // one-way flows; below kResolutionFloor of those they cannot be resolved
  // relative to themselves, so the gross flow sets the scale there.
  PerBath<double> heat_scale{};
  std::vector<double> edge_scale;
  for (const auto& e : graph.edges()) {
    const double gross = e.rate_up * steady.populations(e.tail - 1) +
                         e.rate_down * steady.populations(e.head - 1);
    edge_scale.push_back(kResolutionFloor * gross);
    heat_scale[e.bath] += kResolutionFloor * e.quantum * gross;
  }
  double power_scale = 0.0;
  double entropy_scale = 0.0;
  for (const auto& [label, spec] : graph.baths()) {
    if (spec.kind == BathKind::thermal) entropy_scale += heat_scale[label] / spec.temperature;
    if (!graph.three_bath() && label != Bath::work) power_scale += heat_scale[label];
  }
  PerBath<double> floor = heat_scale;
  const double power_floor = power_scale, entropy_floor = entropy_scale;
  heat_scale = {};
  power_scale = entropy_scale = 0.0;
  for (const auto& r : reports) {
    for (Bath b : kAllBaths) {
      rec.circuit_sum.heat[b] += r.heat[b];
      heat_scale[b] += std::abs(r.heat[b]);
    }
    rec.circuit_sum.power += r.power;
    rec.circuit_sum.entropy += r.entropy;
    power_scale += std::abs(r.power);
    entropy_scale += std::abs(r.entropy);
  }

  for (Bath b : kAllBaths)
    rec.max_heat_discrepancy = std::max(
        rec.max_heat_discrepancy, relative_gap(rec.circuit_sum.heat[b], rec.direct.heat[b],
                                               std::max(heat_scale[b], floor[b])));
  rec.power_discrepancy = relative_gap(rec.circuit_sum.power, rec.direct.power,
                                       std::max(power_scale, power_floor));
  rec.entropy_discrepancy = relative_gap(rec.circuit_sum.entropy, rec.direct.entropy,
                                         std::max(entropy_scale, entropy_floor));

  // Edge level: net current through each edge against the signed sum of the
  // fluxes of the circuits that use it.
  const auto direct_j = edge_currents(graph, steady);
  std::vector<double> from_circuits(direct_j.size(), 0.0);
  std::vector<double> scale(direct_j.size(), 0.0);
  std::map<int, std::size_t> position;
  for (std::size_t k = 0; k < graph.edges().size(); ++k) position[graph.edges()[k].id] = k;
  for (const auto& r : reports) {
    for (const auto& s : directed_steps(Cycle{r.circuit, +1}, graph)) {
      const std::size_t k = position.at(s.edge->id);
      const double contribution = (s.with_edge ? 1.0 : -1.0) * r.flux;
      from_circuits[k] += contribution;
      scale[k] += std::abs(contribution);
    }
  }
  for (std::size_t k = 0; k < direct_j.size(); ++k)
    rec.max_edge_discrepancy = std::max(
        rec.max_edge_discrepancy,
        relative_gap(from_circuits[k], direct_j[k], std::max(scale[k], edge_scale[k])));
  return rec;
}

Reconciliation total_currents(const RateGraph& graph, const std::vector<CircuitReport>& reports,
                              const SteadyState& steady) {
  Reconciliation rec = reconcile(graph, reports, steady);
  if (rec.max_discrepancy() > kReconciliationTolerance)
    throw physics_error("circuit sums disagree with direct currents (relative discrepancy " +
                        format_scientific(rec.max_discrepancy()) + ")");
  return rec;
}

}  // namespace qtnet
