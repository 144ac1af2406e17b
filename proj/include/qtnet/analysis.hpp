#pragma once

// Parameter sweeps, limit frequencies, figures of merit and circuit
// representatives for the four device models.

#include "qtnet/models.hpp"
#include "qtnet/thermo.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qtnet {

/// Tolerance in omega_c for every flux zero-crossing.
inline constexpr double kBisectionTolerance = 1e-6;

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tolerance = kBisectionTolerance);

/// Flux of the cycle following `path` (see find_cycle) as a function of
/// omega_c, all other parameters held fixed.
std::function<double(double)> flux_of(const ModelSpec& base, std::vector<int> path,
                                      std::vector<Bath> step_baths = {});

struct LimitFrequency {
  std::string name;           // C1 ... or C_{i,j}
  std::vector<int> path;      // vertex sequence of the oriented cycle
  std::vector<Bath> step_baths;
  double closed_form = 0.0;
  double located = 0.0;       // flux zero by bisection
  bool agrees() const { return std::abs(closed_form - located) <= kBisectionTolerance; }
};

struct CoolingWindowReport {
  double omega_c_rev = 0.0;
  double carnot_cop = 0.0;  // eps_C
  std::vector<LimitFrequency> circuits;
};

/// Upper edge of the cooling window for the direct device and for the
/// three-edge tricycles C1..C6 (plus the five-edge C8) of the absorption
/// wire at zero detuning, each confirmed by a flux zero-crossing.
CoolingWindowReport cooling_window_bounds(const AbsorptionWireParams& p);

double cooling_window_edge(double omega_h, double t_c, double t_h, double t_w);
double absorption_carnot_cop(double t_c, double t_h, double t_w);

struct DrivenLimitReport {
  double omega_c_max = 0.0;
  double carnot_efficiency = 0.0;  // eta_C
  double carnot_cop = 0.0;         // eps_C
  std::vector<LimitFrequency> two_edge;
  std::vector<LimitFrequency> four_edge_balanced;  // two c and two h edges
};

DrivenLimitReport limit_frequencies_driven(const DrivenWireParams& p);

/// f(lambda, g) = [lambda + g + sqrt(4 lambda^2 + g^2)] / 2.
double dissipation_halfwidth(double g, double lambda);

enum class OperatingMode { refrigerator, engine, dissipator };
std::string_view mode_name(OperatingMode m);

enum class MeritKind { none, cop, efficiency };
std::string_view merit_name(MeritKind m);

struct PerformancePoint {
  double omega_c = 0.0;
  PerBath<double> heat{};
  double power = 0.0;
  double entropy = 0.0;
  OperatingMode mode = OperatingMode::dissipator;
  MeritKind merit_kind = MeritKind::none;
  double merit = 0.0;  // NaN when merit_kind == none
};

/// Mode and figure of merit from the totals. Three-bath: refrigerator iff
/// Qc > 0, eps = Qc/Qw. Work source: refrigerator iff Qc > 0 and P > 0
/// (eps = Qc/P), engine iff P < 0 and Qh > 0 (eta = -P/Qh).
PerformancePoint performance_point(double omega_c, const Totals& totals, bool three_bath);

struct RepresentativeSet {
  std::vector<std::string> names;
  std::vector<Cycle> cycles;
  bool tie = false;  // g == lambda: both candidate pairs returned
};

struct RepresentativeCurrents {
  PerBath<double> heat{};
  double power = 0.0;
};

/// Absorption wire: C1 = 1-3-4-1, C2 = 1-3-5-1. Driven wire: C_{1,4}, C_{2,5}
/// for g < lambda, C_{1,6}, C_{2,3} for g > lambda, all four at the tie.
/// Throws ErrorKind::parameter for other models or missing circuits.
RepresentativeSet select_representatives(const ModelSpec& model, const RateGraph& graph,
                                         const std::vector<Circuit>& circuits);

RepresentativeCurrents representative_currents(const RepresentativeSet& set,
                                               const CircuitAnalyzer& analyzer);

struct SweepSpec {
  ModelSpec model;
  double lo = 0.05;
  double hi = 0.95;
  int points = 200;
  bool per_circuit = false;
  bool representatives = false;
};

void validate(const SweepSpec& spec);  // throws ErrorKind::config

struct SweepPoint {
  double omega_c = 0.0;
  bool ok = false;
  std::string error;
  PerformancePoint performance;
  Reconciliation reconciliation;
  std::vector<CircuitReport> circuits;  // when per_circuit
  std::optional<RepresentativeCurrents> representatives;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending omega_c
  std::vector<Circuit> circuits;   // column order for per-circuit output
  std::vector<std::string> representative_names;
};

/// One point per uniform grid value. A point whose model cannot be built is
/// marked failed and the sweep continues; reconciliation failures throw.
SweepResult sweep(const SweepSpec& spec);

/// Full evaluation at a single omega_c: enumeration, reports and
/// reconciliation (throwing above tolerance).
struct PointEvaluation {
  RateGraph graph;
  std::vector<Circuit> circuits;
  std::vector<CircuitReport> reports;
  Reconciliation reconciliation;
  PerformancePoint performance;
};
PointEvaluation evaluate_point(const ModelSpec& model);

struct CharacteristicPoint {
  double omega_c = 0.0;
  double merit = 0.0;
  double normalized = 0.0;  // Qc / max Qc (refrigerator) or P / min P (engine)
};

/// Figure of merit against normalised output over the points in `mode`.
/// Throws ErrorKind::physics when no point operates in that mode.
std::vector<CharacteristicPoint> performance_characteristic(const std::vector<SweepPoint>& points,
                                                            OperatingMode mode);

}  // namespace qtnet
