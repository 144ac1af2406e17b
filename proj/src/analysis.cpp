#include "qtnet/analysis.hpp"

#include "qtnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qtnet {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Open interval of omega_c on which the model builds.
struct Domain {
  double lo;
  double hi;
};

// Widens [x - w, x + w] until f changes sign or the domain is exhausted.
std::pair<double, double> bracket(const std::function<double(double)>& f, double x, Domain d) {
  const double margin = 1e-9;
  for (double w = 1e-3;; w *= 2.0) {
    const double lo = std::max(x - w, d.lo + margin);
    const double hi = std::min(x + w, d.hi - margin);
    const double flo = f(lo);
    const double fhi = f(hi);
    if ((flo < 0.0) != (fhi < 0.0)) return {lo, hi};
    if (lo <= d.lo + margin && hi >= d.hi - margin)
      throw physics_error("no flux sign change inside the valid frequency range");
  }
}

LimitFrequency locate(const ModelSpec& base, std::string name, std::vector<int> path,
                      std::vector<Bath> step_baths, double closed_form, Domain d) {
  LimitFrequency lf{std::move(name), path, step_baths, closed_form, 0.0};
  const auto f = flux_of(base, std::move(path), std::move(step_baths));
  const auto [lo, hi] = bracket(f, closed_form, d);
  lf.located = bisect(f, lo, hi);
  return lf;
}

std::string driven_name(int i, int j) {
  return "C_{" + std::to_string(i) + "," + std::to_string(j) + "}";
}

}  // namespace

double bisect(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw physics_error("bisect: no sign change on the bracket");
  // Stop well inside the tolerance so the midpoint error is negligible.
  while (hi - lo > 0.01 * tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::function<double(double)> flux_of(const ModelSpec& base, std::vector<int> path,
                                      std::vector<Bath> step_baths) {
  return [base, path = std::move(path), step_baths = std::move(step_baths)](double omega_c) {
    const RateGraph graph = build_graph(with_omega_c(base, omega_c));
    const auto cycle = cycle_from_path(graph, path, step_baths);
    if (!cycle) throw graph_error("requested cycle is not a simple circuit of the graph");
    return CircuitAnalyzer(graph).flux(*cycle);
  };
}

double cooling_window_edge(double omega_h, double t_c, double t_h, double t_w) {
  return omega_h * t_c * (t_w - t_h) / (t_h * (t_w - t_c));
}

double absorption_carnot_cop(double t_c, double t_h, double t_w) {
  return t_c * (t_w - t_h) / (t_w * (t_h - t_c));
}

CoolingWindowReport cooling_window_bounds(const AbsorptionWireParams& p) {
  if (p.delta != 0.0)
    throw parameter_error("closed-form cooling-window limits hold at zero detuning only");
  const double tc = p.cold.temperature;
  const double th = p.hot.temperature;
  const double tw = p.work.temperature;
  const double g = p.g;

  CoolingWindowReport r;
  r.omega_c_rev = cooling_window_edge(p.omega_h, tc, th, tw);
  r.carnot_cop = absorption_carnot_cop(tc, th, tw);

  const double s12 = g * tc * (tw - th) / (th * (tw - tc));
  const double s34 = g * tw * (th - tc) / (th * (tw - tc));
  const double s8 = g * (2.0 * tc * tw - tc * th - tw * th) / (th * (tw - tc));

  struct Entry {
    const char* name;
    std::vector<int> path;
    double closed;
  };
  const std::vector<Entry> entries{
      {"C1", {1, 3, 4}, r.omega_c_rev - s12}, {"C2", {1, 3, 5}, r.omega_c_rev + s12},
      {"C3", {1, 2, 5}, r.omega_c_rev - s34}, {"C4", {1, 2, 4}, r.omega_c_rev + s34},
      {"C5", {2, 5, 6}, r.omega_c_rev - g},   {"C6", {2, 4, 6}, r.omega_c_rev + g},
      {"C8", {1, 4, 6, 2, 5}, r.omega_c_rev + s8},
  };
  const Domain d{g, p.omega_h - g};
  for (const auto& e : entries)
    r.circuits.push_back(locate(p, e.name, e.path, {}, e.closed, d));
  return r;
}

DrivenLimitReport limit_frequencies_driven(const DrivenWireParams& p) {
  const double tc = p.cold.temperature;
  const double th = p.hot.temperature;
  DrivenLimitReport r;
  r.omega_c_max = p.omega_h * tc / th;
  r.carnot_efficiency = 1.0 - tc / th;
  r.carnot_cop = tc / (th - tc);

  const auto w = driven_coefficients(p.g, p.lambda).eigenfrequencies;
  const double eta = r.carnot_efficiency;
  // Every cold quantum omega_c + w_j - w_i must stay positive.
  const Domain d{dissipation_halfwidth(p.g, p.lambda), p.omega_h};

  for (int i = 1; i <= 2; ++i)
    for (int j = 3; j <= 6; ++j)
      r.two_edge.push_back(locate(p, driven_name(i, j), {i, j}, {Bath::cold, Bath::hot},
                                  r.omega_c_max - (w[j - 1] - w[i - 1]) * eta, d));

  // i -> j (c) -> i' (h) -> j' (c) -> i (h): two cold absorptions.
  for (int j = 3; j <= 6; ++j)
    for (int jp = 3; jp <= 6; ++jp) {
      if (j == jp) continue;
      const std::string name = "C{1," + std::to_string(j) + ",2," + std::to_string(jp) + "}";
      r.four_edge_balanced.push_back(
          locate(p, name, {1, j, 2, jp}, {Bath::cold, Bath::hot, Bath::cold, Bath::hot},
                 r.omega_c_max - (w[j - 1] + w[jp - 1]) * eta / 2.0, d));
    }
  return r;
}

double dissipation_halfwidth(double g, double lambda) {
  if (!(g >= 0.0) || !(lambda >= 0.0) || (g == 0.0 && lambda == 0.0))
    throw parameter_error("g and lambda must be non-negative and not both zero");
  return (lambda + g + std::sqrt(4.0 * lambda * lambda + g * g)) / 2.0;
}

std::string_view mode_name(OperatingMode m) {
  switch (m) {
    case OperatingMode::refrigerator: return "refrigerator";
    case OperatingMode::engine: return "engine";
    case OperatingMode::dissipator: return "dissipator";
  }
  return "?";
}

std::string_view merit_name(MeritKind m) {
  switch (m) {
    case MeritKind::none: return "none";
    case MeritKind::cop: return "cop";
    case MeritKind::efficiency: return "efficiency";
  }
  return "?";
}

PerformancePoint performance_point(double omega_c, const Totals& totals, bool three_bath) {
  PerformancePoint pt;
  pt.omega_c = omega_c;
  pt.heat = totals.heat;
  pt.power = three_bath ? 0.0 : totals.power;
  pt.entropy = totals.entropy;
  pt.merit = kNaN;

  const double qc = totals.heat[Bath::cold];
  const double qh = totals.heat[Bath::hot];
  if (three_bath) {
    if (qc > 0.0) {
      pt.mode = OperatingMode::refrigerator;
      pt.merit_kind = MeritKind::cop;
      pt.merit = qc / totals.heat[Bath::work];
    }
    return pt;
  }
  const double power = totals.power;
  if (qc > 0.0 && power > 0.0) {
    pt.mode = OperatingMode::refrigerator;
    pt.merit_kind = MeritKind::cop;
    pt.merit = qc / power;
  } else if (power < 0.0 && qh > 0.0) {
    pt.mode = OperatingMode::engine;
    pt.merit_kind = MeritKind::efficiency;
    pt.merit = -power / qh;
  }
  return pt;
}

RepresentativeSet select_representatives(const ModelSpec& model, const RateGraph& graph,
                                         const std::vector<Circuit>& circuits) {
  struct Wanted {
    std::string name;
    std::vector<int> path;
    std::vector<Bath> baths;
  };
  std::vector<Wanted> wanted;
  RepresentativeSet set;

  if (const auto* a = std::get_if<AbsorptionWireParams>(&model)) {
    (void)a;
    wanted = {{"C1", {1, 3, 4}, {}}, {"C2", {1, 3, 5}, {}}};
  } else if (const auto* d = std::get_if<DrivenWireParams>(&model)) {
    const std::vector<Bath> ch{Bath::cold, Bath::hot};
    const Wanted c14{driven_name(1, 4), {1, 4}, ch}, c25{driven_name(2, 5), {2, 5}, ch};
    const Wanted c16{driven_name(1, 6), {1, 6}, ch}, c23{driven_name(2, 3), {2, 3}, ch};
    if (d->g < d->lambda) {
      wanted = {c14, c25};
    } else if (d->g > d->lambda) {
      wanted = {c16, c23};
    } else {
      wanted = {c14, c25, c16, c23};
      set.tie = true;
    }
  } else {
    throw parameter_error("circuit representatives are defined for the wire-coupled models only");
  }

  for (const auto& w : wanted) {
    auto cycle = find_cycle(circuits, graph, w.path, w.baths);
    if (!cycle) throw parameter_error("representative " + w.name + " is not an enumerated circuit");
    set.names.push_back(w.name);
    set.cycles.push_back(std::move(*cycle));
  }
  return set;
}

RepresentativeCurrents representative_currents(const RepresentativeSet& set,
                                               const CircuitAnalyzer& analyzer) {
  RepresentativeCurrents out;
  for (const auto& cycle : set.cycles) {
    const auto rep = analyzer.report(cycle.circuit);
    for (Bath b : kAllBaths) out.heat[b] += rep.heat[b];
    out.power += rep.power;
  }
  return out;
}

void validate(const SweepSpec& spec) {
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi))
    throw ConfigError("sweep.range", "bounds must be finite");
  if (!(spec.lo < spec.hi)) throw ConfigError("sweep.range", "lo must be smaller than hi");
  if (spec.points < 2) throw ConfigError("sweep.points", "at least 2 points are required");
}

PointEvaluation evaluate_point(const ModelSpec& model) {
  PointEvaluation ev;
  ev.graph = build_graph(model);
  ev.circuits = enumerate_circuits(ev.graph);
  const CircuitAnalyzer analyzer(ev.graph);
  ev.reports.reserve(ev.circuits.size());
  for (const auto& c : ev.circuits) ev.reports.push_back(analyzer.report(c));
  ev.reconciliation = total_currents(ev.graph, ev.reports, analyzer.steady());
  ev.performance =
      performance_point(omega_c_of(model), ev.reconciliation.direct, ev.graph.three_bath());
  return ev;
}

SweepResult sweep(const SweepSpec& spec) {
  validate(spec);
  SweepResult result;
  result.points.reserve(static_cast<std::size_t>(spec.points));
  bool have_columns = false;

  for (int k = 0; k < spec.points; ++k) {
    const double omega_c =
        k == spec.points - 1 ? spec.hi
                             : spec.lo + (spec.hi - spec.lo) * k / (spec.points - 1);
    SweepPoint pt;
    pt.omega_c = omega_c;
    const ModelSpec model = with_omega_c(spec.model, omega_c);

    RateGraph graph;
    try {
      graph = build_graph(model);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::parameter) throw;
      pt.error = e.what();
      pt.performance.omega_c = omega_c;
      pt.performance.merit = kNaN;
      result.points.push_back(std::move(pt));
      continue;
    }

    const auto circuits = enumerate_circuits(graph);
    if (!have_columns) {
      result.circuits = circuits;
      have_columns = true;
    } else if (circuits != result.circuits) {
      throw physics_error("circuit set changed along the sweep");
    }

    const CircuitAnalyzer analyzer(graph);
    std::vector<CircuitReport> reports;
    reports.reserve(circuits.size());
    for (const auto& c : circuits) reports.push_back(analyzer.report(c));
    pt.reconciliation = total_currents(graph, reports, analyzer.steady());
    pt.performance = performance_point(omega_c, pt.reconciliation.direct, graph.three_bath());
    if (spec.per_circuit) pt.circuits = std::move(reports);
    if (spec.representatives) {
      const auto set = select_representatives(model, graph, circuits);
      if (result.representative_names.empty()) result.representative_names = set.names;
      pt.representatives = representative_currents(set, analyzer);
    }
    pt.ok = true;
    result.points.push_back(std::move(pt));
  }
  return result;
}

std::vector<CharacteristicPoint> performance_characteristic(const std::vector<SweepPoint>& points,
                                                            OperatingMode mode) {
  if (mode == OperatingMode::dissipator)
    throw parameter_error("the dissipator region has no figure of merit");

  std::vector<const SweepPoint*> in_mode;
  for (const auto& p : points)
    if (p.ok && p.performance.mode == mode) in_mode.push_back(&p);
  if (in_mode.empty())
    throw physics_error(std::string("no swept point operates as ") + std::string(mode_name(mode)));

  auto output = [mode](const PerformancePoint& pp) {
    return mode == OperatingMode::refrigerator ? pp.heat[Bath::cold] : pp.power;
  };
  double extremum = 0.0;
  for (const auto* p : in_mode) {
    const double v = output(p->performance);
    extremum = mode == OperatingMode::refrigerator ? std::max(extremum, v) : std::min(extremum, v);
  }

  std::vector<CharacteristicPoint> curve;
  curve.reserve(in_mode.size());
  for (const auto* p : in_mode)
    curve.push_back({p->omega_c, p->performance.merit, output(p->performance) / extremum});
  return curve;
}

}  // namespace qtnet
