#include "qtnet/models.hpp"

#include "qtnet/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtnet {

BathSpec thermal_bath(Bath label, double temperature, int dimension, double coupling) {
  BathSpec b;
  b.label = label;
  b.kind = BathKind::thermal;
  b.temperature = temperature;
  b.dimension = dimension;
  b.coupling = coupling;
  return b;
}

BoseRates bose_rate(double omega, const BathSpec& bath) {
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw parameter_error("bose_rate: frequency must be positive");
  if (bath.kind != BathKind::thermal) throw parameter_error("bose_rate: bath is not thermal");
  if (!(bath.temperature > 0.0)) throw parameter_error("bose_rate: temperature must be positive");

  const double x = omega / bath.temperature;
  const double occupation = 1.0 / std::expm1(x);  // x -> inf gives 0
  const double emission = bath.coupling * std::pow(omega, bath.dimension) * (occupation + 1.0);
  return {emission, emission * std::exp(-x)};
}

namespace {

BathSpec field_source() {
  BathSpec b;
  b.label = Bath::work;
  b.kind = BathKind::work_source;
  b.temperature = 0.0;
  b.dimension = 0;
  b.coupling = 0.0;
  return b;
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw parameter_error(std::string(name) + " must be positive");
}

void require_thermal(const BathSpec& b) {
  if (b.kind != BathKind::thermal) throw parameter_error("bath must be thermal");
  require_positive(b.temperature, "bath temperature");
  require_positive(b.coupling, "bath coupling");
  if (b.dimension < 1) throw parameter_error("bath dimension must be a positive integer");
}

// Adds the edge tail->head with emission rate factor*Gamma(quantum).
void add_transition(RateGraph& g, int tail, int head, const BathSpec& bath, double quantum,
                    double factor) {
  if (!(quantum > 1e-12)) {
    std::ostringstream os;
    os << "secular approximation invalid: transition " << tail << "-" << head << " (bath "
       << bath_label(bath.label) << ") has quantum " << quantum;
    throw parameter_error(os.str());
  }
  const BoseRates r = bose_rate(quantum, bath);
  g.add_edge(tail, head, bath.label, quantum, factor * r.absorption, factor * r.emission);
}

}  // namespace

AbsorptionCoefficients absorption_coefficients(double omega_c, double omega_h, double delta,
                                               double g) {
  AbsorptionCoefficients k;
  const double omega_w = omega_h - omega_c - delta;
  const double s = std::sqrt(delta * delta + 4.0 * g * g);
  const double d_plus = std::sqrt(4.0 * g * g + (delta + s) * (delta + s));
  const double d_minus = std::sqrt(4.0 * g * g + (delta - s) * (delta - s));
  k.c_plus = (-delta + s) * d_plus / (4.0 * g * s);
  k.c_minus = (-delta - s) * d_minus / (4.0 * g * s);
  k.cp_plus = d_plus / (2.0 * s);
  k.cp_minus = d_minus / (2.0 * s);
  k.eigenfrequencies = {0.0,
                        omega_w,
                        omega_c,
                        (2.0 * omega_h - delta - s) / 2.0,
                        (2.0 * omega_h - delta + s) / 2.0,
                        omega_w + omega_h};
  return k;
}

DrivenCoefficients driven_coefficients(double g, double lambda) {
  DrivenCoefficients k;
  const double r = std::sqrt(4.0 * lambda * lambda + g * g);
  k.eigenfrequencies = {-lambda, lambda, -(g + r) / 2.0, (g - r) / 2.0, (-g + r) / 2.0,
                        (g + r) / 2.0};
  k.u_plus = 2.0 * lambda / (g + r);
  k.u_minus = 2.0 * lambda / (g - r);

  const double um = k.u_minus;
  const double up = k.u_plus;
  const double a = (1.0 - um) * (1.0 - um) / (4.0 * (1.0 + um * um));
  const double b = (1.0 + um) * (1.0 + um) / (4.0 * (1.0 + um * um));
  const double c = (1.0 + up) * (1.0 + up) / (4.0 * (1.0 + up * up));
  const double d = (1.0 - up) * (1.0 - up) / (4.0 * (1.0 + up * up));
  k.c_sq = {{{1, 3}, a}, {{2, 6}, a}, {{2, 3}, b}, {{1, 6}, b},
            {{1, 4}, c}, {{2, 5}, c}, {{2, 4}, d}, {{1, 5}, d}};
  return k;
}

BuiltModel<AbsorptionCoefficients> build_absorption_wire(const AbsorptionWireParams& p) {
  require_positive(p.omega_c, "omega_c");
  require_positive(p.omega_h, "omega_h");
  require_positive(p.omega_w(), "omega_w");
  if (!(p.g > 0.0) || !std::isfinite(p.g))
    throw parameter_error("secular approximation invalid: g must be positive (degenerate spectrum)");
  for (const auto* b : {&p.cold, &p.hot, &p.work}) require_thermal(*b);

  BuiltModel<AbsorptionCoefficients> m;
  m.coefficients = absorption_coefficients(p.omega_c, p.omega_h, p.delta, p.g);
  const auto& k = m.coefficients;
  const auto& w = k.eigenfrequencies;
  if (!(w[4] - w[3] > 1e-12))
    throw parameter_error("secular approximation invalid: degenerate doublet");

  auto& g = m.graph;
  for (double f : w) g.add_vertex(f);
  g.add_bath(p.cold);
  g.add_bath(p.hot);
  g.add_bath(p.work);

  const double ww = p.omega_w();
  add_transition(g, 1, 2, p.work, ww, 1.0);
  add_transition(g, 1, 3, p.cold, p.omega_c, 1.0);
  add_transition(g, 1, 4, p.hot, w[3], k.cp_minus_sq());
  add_transition(g, 1, 5, p.hot, w[4], k.cp_plus_sq());
  add_transition(g, 2, 4, p.cold, w[3] - ww, k.c_minus_sq());
  add_transition(g, 2, 5, p.cold, w[4] - ww, k.c_plus_sq());
  add_transition(g, 2, 6, p.hot, p.omega_h, 1.0);
  add_transition(g, 3, 4, p.work, w[3] - p.omega_c, k.c_minus_sq());
  add_transition(g, 3, 5, p.work, w[4] - p.omega_c, k.c_plus_sq());
  add_transition(g, 4, 6, p.work, ww + p.omega_h - w[3], k.cp_minus_sq());
  add_transition(g, 5, 6, p.work, ww + p.omega_h - w[4], k.cp_plus_sq());

  const double gamma_max = std::max({p.cold.coupling, p.hot.coupling, p.work.coupling});
  if (gamma_max / p.g > 0.1)
    m.warnings.push_back("bath coupling is not small compared with g");
  if (p.g / p.omega_c > 0.5) m.warnings.push_back("g is not small compared with omega_c");
  return m;
}

BuiltModel<DrivenCoefficients> build_driven_wire(const DrivenWireParams& p) {
  require_positive(p.omega_c, "omega_c");
  require_positive(p.omega_h, "omega_h");
  require_positive(p.omega_w(), "omega_w");
  if (!(p.g > 0.0) || !(p.lambda > 0.0))
    throw parameter_error("g and lambda must be positive");
  require_thermal(p.cold);
  require_thermal(p.hot);

  BuiltModel<DrivenCoefficients> m;
  m.coefficients = driven_coefficients(p.g, p.lambda);
  const auto& k = m.coefficients;
  const auto& w = k.eigenfrequencies;

  auto& g = m.graph;
  for (double f : w) g.add_vertex(f);
  g.add_bath(p.cold);
  g.add_bath(p.hot);
  g.add_bath(field_source());

  for (int i = 1; i <= 2; ++i)
    for (int j = 3; j <= 6; ++j) {
      const double shift = w[j - 1] - w[i - 1];
      add_transition(g, i, j, p.cold, p.omega_c + shift, k.at(i, j));
      add_transition(g, i, j, p.hot, p.omega_h + shift, k.at(i, j));
    }

  const double gamma_max = std::max(p.cold.coupling, p.hot.coupling);
  if (gamma_max / std::min(p.g, p.lambda) > 0.1)
    m.warnings.push_back("bath coupling is not small compared with g and lambda");
  if (p.g / p.omega_c > 0.5) m.warnings.push_back("g is not small compared with omega_c");
  return m;
}

RateGraph build_appendix_three_level(const AppendixParams& p) {
  require_positive(p.lambda, "lambda");
  if (!(p.lambda < p.omega_c)) throw parameter_error("lambda must be smaller than omega_c");
  if (!(p.omega_c < p.omega_h)) throw parameter_error("omega_c must be smaller than omega_h");
  require_thermal(p.cold);
  require_thermal(p.hot);

  RateGraph g;
  g.add_vertex(0.0);
  g.add_vertex(-p.lambda);
  g.add_vertex(p.lambda);
  g.add_bath(p.cold);
  g.add_bath(p.hot);
  g.add_bath(field_source());
  add_transition(g, 1, 2, p.cold, p.omega_c - p.lambda, 0.5);
  add_transition(g, 1, 2, p.hot, p.omega_h - p.lambda, 0.5);
  add_transition(g, 1, 3, p.cold, p.omega_c + p.lambda, 0.5);
  add_transition(g, 1, 3, p.hot, p.omega_h + p.lambda, 0.5);
  return g;
}

RateGraph build_direct_three_level(const DirectParams& p) {
  require_positive(p.omega_c, "omega_c");
  if (!(p.omega_c < p.omega_h)) throw parameter_error("omega_c must be smaller than omega_h");
  for (const auto* b : {&p.cold, &p.hot, &p.work}) require_thermal(*b);

  RateGraph g;
  g.add_vertex(0.0);
  g.add_vertex(p.omega_c);
  g.add_vertex(p.omega_h);
  g.add_bath(p.cold);
  g.add_bath(p.hot);
  g.add_bath(p.work);
  add_transition(g, 1, 2, p.cold, p.omega_c, 1.0);
  add_transition(g, 1, 3, p.hot, p.omega_h, 1.0);
  add_transition(g, 2, 3, p.work, p.omega_h - p.omega_c, 1.0);
  return g;
}

// ---------------------------------------------------------------------------

ModelKind model_kind(const ModelSpec& spec) {
  return static_cast<ModelKind>(spec.index());
}

std::string_view model_name(ModelKind k) {
  switch (k) {
    case ModelKind::absorption_wire: return "absorption_wire";
    case ModelKind::driven_wire: return "driven_wire";
    case ModelKind::appendix_three_level: return "appendix_three_level";
    case ModelKind::direct_three_level: return "direct_three_level";
  }
  return "?";
}

RateGraph build_graph(const ModelSpec& spec) {
  struct Visitor {
    RateGraph operator()(const AbsorptionWireParams& p) const { return build_absorption_wire(p).graph; }
    RateGraph operator()(const DrivenWireParams& p) const { return build_driven_wire(p).graph; }
    RateGraph operator()(const AppendixParams& p) const { return build_appendix_three_level(p); }
    RateGraph operator()(const DirectParams& p) const { return build_direct_three_level(p); }
  };
  return std::visit(Visitor{}, spec);
}

double omega_c_of(const ModelSpec& spec) {
  return std::visit([](const auto& p) { return p.omega_c; }, spec);
}

ModelSpec with_omega_c(ModelSpec spec, double omega_c) {
  std::visit([omega_c](auto& p) { p.omega_c = omega_c; }, spec);
  return spec;
}

}  // namespace qtnet
