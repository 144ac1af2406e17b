#include "qtnet/runner.hpp"

#include "qtnet/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace qtnet {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string census_line(const std::vector<CircuitReport>& reports) {
  int counts[3] = {0, 0, 0};
  for (const auto& r : reports) ++counts[static_cast<int>(r.cls)];
  std::ostringstream os;
  os << "total=" << reports.size() << " tricycles=" << counts[static_cast<int>(CircuitClass::tricycle)]
     << " heat_leaks=" << counts[static_cast<int>(CircuitClass::heat_leak)]
     << " trivial=" << counts[static_cast<int>(CircuitClass::trivial)];
  return os.str();
}

namespace {

json graph_object(const RateGraph& g) {
  json vertices = json::array();
  for (const auto& v : g.vertices())
    vertices.push_back({{"index", v.index}, {"eigenfrequency", v.eigenfrequency}});
  json edges = json::array();
  for (const auto& e : g.edges())
    edges.push_back({{"id", e.id},
                     {"tail", e.tail},
                     {"head", e.head},
                     {"bath", std::string(bath_label(e.bath))},
                     {"quantum", e.quantum},
                     {"rate_up", e.rate_up},
                     {"rate_down", e.rate_down}});
  json baths = json::object();
  for (const auto& [label, b] : g.baths()) {
    json spec = {{"kind", b.kind == BathKind::thermal ? "thermal" : "work_source"}};
    if (b.kind == BathKind::thermal) {
      spec["temperature"] = b.temperature;
      spec["dimension"] = b.dimension;
      spec["coupling"] = b.coupling;
    }
    baths[std::string(bath_label(label))] = spec;
  }
  return {{"vertices", vertices}, {"edges", edges}, {"baths", baths}};
}

}  // namespace

std::string graph_to_json(const RateGraph& graph) { return graph_object(graph).dump(2) + "\n"; }

RateGraph graph_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  RateGraph g;
  try {
    for (const auto& [key, b] : root.at("baths").items()) {
      const auto label = parse_bath(key);
      if (!label) throw ConfigError("baths." + key, "unknown bath label");
      BathSpec spec;
      spec.label = *label;
      const std::string kind = b.at("kind").get<std::string>();
      if (kind == "work_source") {
        spec.kind = BathKind::work_source;
        spec.temperature = 0.0;
        spec.dimension = 0;
        spec.coupling = 0.0;
      } else if (kind == "thermal") {
        spec.temperature = b.at("temperature").get<double>();
        spec.dimension = b.at("dimension").get<int>();
        spec.coupling = b.at("coupling").get<double>();
      } else {
        throw ConfigError("baths." + key + ".kind", "expected \"thermal\" or \"work_source\"");
      }
      g.add_bath(spec);
    }
    for (const auto& v : root.at("vertices")) {
      const int index = g.add_vertex(v.at("eigenfrequency").get<double>());
      if (v.at("index").get<int>() != index)
        throw ConfigError("vertices", "indices must run 1..N in order");
    }
    for (const auto& e : root.at("edges")) {
      const auto bath = parse_bath(e.at("bath").get<std::string>());
      if (!bath) throw ConfigError("edges", "unknown bath label");
      g.push_edge({e.at("id").get<int>(), e.at("tail").get<int>(), e.at("head").get<int>(), *bath,
                   e.at("quantum").get<double>(), e.at("rate_up").get<double>(),
                   e.at("rate_down").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("malformed graph: ") + e.what());
  }
  return g;
}

namespace {

template <typename Seq, typename F>
std::string joined(const Seq& seq, F&& f, char sep = ';') {
  std::string out;
  bool first = true;
  for (const auto& x : seq) {
    if (!first) out += sep;
    out += f(x);
    first = false;
  }
  return out;
}

std::vector<std::string> edge_baths(const Circuit& c, const RateGraph& g) {
  std::vector<std::string> out;
  for (int id : c.edge_ids) out.emplace_back(bath_label(g.edge(id).bath));
  return out;
}

json closed_vertices(const Circuit& c) {
  json v = c.vertices;
  if (!c.vertices.empty()) v.push_back(c.vertices.front());
  return v;
}

json per_bath_json(const PerBath<double>& x) {
  return {{"c", x[Bath::cold]}, {"h", x[Bath::hot]}, {"w", x[Bath::work]}};
}

json header(const RunConfig& cfg, double omega_c) {
  return {{"command", std::string(command_name(cfg.command))},
          {"model", std::string(model_name(model_kind(cfg.model)))},
          {"omega_c", omega_c}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// -- enumerate --------------------------------------------------------------

RunResult run_enumerate(const RunConfig& cfg) {
  const auto ev = evaluate_point(cfg.model);
  RunResult r;
  r.summary = census_line(ev.reports);

  if (cfg.output.format == OutputFormat::json) {
    json j = header(cfg, omega_c_of(cfg.model));
    json list = json::array();
    for (std::size_t k = 0; k < ev.reports.size(); ++k) {
      const auto& c = ev.reports[k].circuit;
      list.push_back({{"index", k + 1},
                      {"length", c.size()},
                      {"class", std::string(class_name(ev.reports[k].cls))},
                      {"vertices", closed_vertices(c)},
                      {"edge_ids", c.edge_ids},
                      {"baths", edge_baths(c, ev.graph)}});
    }
    int counts[3] = {0, 0, 0};
    for (const auto& rep : ev.reports) ++counts[static_cast<int>(rep.cls)];
    j["census"] = {{"total", ev.reports.size()},
                   {"tricycles", counts[static_cast<int>(CircuitClass::tricycle)]},
                   {"heat_leaks", counts[static_cast<int>(CircuitClass::heat_leak)]},
                   {"trivial", counts[static_cast<int>(CircuitClass::trivial)]}};
    j["circuits"] = list;
    r.output = dump(j);
    return r;
  }

  std::ostringstream os;
  os << "index,length,class,vertices,edge_ids,baths\n";
  for (std::size_t k = 0; k < ev.reports.size(); ++k) {
    const auto& c = ev.reports[k].circuit;
    os << k + 1 << ',' << c.size() << ',' << class_name(ev.reports[k].cls) << ','
       << c.vertex_string() << ',' << joined(c.edge_ids, [](int id) { return std::to_string(id); })
       << ',' << joined(edge_baths(c, ev.graph), [](const std::string& s) { return s; }) << '\n';
  }
  os << "# " << r.summary << '\n';
  r.output = os.str();
  return r;
}

// -- steady -----------------------------------------------------------------

RunResult run_steady(const RunConfig& cfg) {
  const RateGraph graph = build_graph(cfg.model);
  const CircuitAnalyzer analyzer(graph);
  const auto& p = analyzer.steady().populations;
  const Totals t = direct_currents(graph, analyzer.steady());
  RunResult r;
  r.summary = "states=" + std::to_string(graph.vertex_count()) +
              " normalization=" + format_double(analyzer.steady().normalization);

  if (cfg.output.format == OutputFormat::json) {
    json j = header(cfg, omega_c_of(cfg.model));
    json states = json::array();
    for (const auto& v : graph.vertices())
      states.push_back({{"state", v.index},
                        {"eigenfrequency", v.eigenfrequency},
                        {"population", p(v.index - 1)}});
    j["states"] = states;
    j["normalization"] = analyzer.steady().normalization;
    j["graph"] = graph_object(graph);
    j["totals"] = {{"heat", per_bath_json(t.heat)}, {"power", t.power}, {"entropy", t.entropy}};
    r.output = dump(j);
    return r;
  }

  std::ostringstream os;
  os << "state,eigenfrequency,population\n";
  for (const auto& v : graph.vertices())
    os << v.index << ',' << format_double(v.eigenfrequency) << ',' << format_double(p(v.index - 1))
       << '\n';
  r.output = os.str();
  return r;
}

// -- circuits ---------------------------------------------------------------

RunResult run_circuits(const RunConfig& cfg) {
  const auto ev = evaluate_point(cfg.model);
  RunResult r;
  r.summary = census_line(ev.reports) +
              " max_discrepancy=" + format_double(ev.reconciliation.max_discrepancy());

  if (cfg.output.format == OutputFormat::json) {
    json j = header(cfg, omega_c_of(cfg.model));
    json list = json::array();
    for (std::size_t k = 0; k < ev.reports.size(); ++k) {
      const auto& rep = ev.reports[k];
      list.push_back({{"index", k + 1},
                      {"vertices", closed_vertices(rep.circuit)},
                      {"edge_ids", rep.circuit.edge_ids},
                      {"class", std::string(class_name(rep.cls))},
                      {"flux", rep.flux},
                      {"affinity", per_bath_json(rep.affinities.per_bath)},
                      {"heat", per_bath_json(rep.heat)},
                      {"power", rep.power},
                      {"entropy", rep.entropy}});
    }
    j["circuits"] = list;
    const auto& d = ev.reconciliation.direct;
    j["totals"] = {{"heat", per_bath_json(d.heat)}, {"power", d.power}, {"entropy", d.entropy}};
    j["max_discrepancy"] = ev.reconciliation.max_discrepancy();
    r.output = dump(j);
    return r;
  }

  std::ostringstream os;
  os << "index,vertices,edge_ids,class,flux,X_c,X_h,X_w,Q_c,Q_h,Q_w,P,S\n";
  for (std::size_t k = 0; k < ev.reports.size(); ++k) {
    const auto& rep = ev.reports[k];
    const auto& x = rep.affinities.per_bath;
    os << k + 1 << ',' << rep.circuit.vertex_string() << ','
       << joined(rep.circuit.edge_ids, [](int id) { return std::to_string(id); }) << ','
       << class_name(rep.cls) << ',' << format_double(rep.flux);
    for (Bath b : kAllBaths) os << ',' << format_double(x[b]);
    for (Bath b : kAllBaths) os << ',' << format_double(rep.heat[b]);
    os << ',' << format_double(rep.power) << ',' << format_double(rep.entropy) << '\n';
  }
  r.output = os.str();
  return r;
}

// -- sweep / representatives ------------------------------------------------

RunResult run_sweep(const RunConfig& cfg, bool representatives) {
  SweepSpec spec = cfg.sweep;
  spec.model = cfg.model;
  if (representatives) spec.representatives = true;
  const SweepResult res = sweep(spec);

  int failed = 0;
  double worst = 0.0;
  for (const auto& p : res.points) {
    if (!p.ok) ++failed;
    else worst = std::max(worst, p.reconciliation.max_discrepancy());
  }
  RunResult r;
  r.summary = "points=" + std::to_string(res.points.size()) + " failed=" + std::to_string(failed) +
              " max_discrepancy=" + format_double(worst);

  const std::size_t nc = spec.per_circuit ? res.circuits.size() : 0;

  if (cfg.output.format == OutputFormat::json) {
    json j = header(cfg, omega_c_of(cfg.model));
    j["range"] = {spec.lo, spec.hi};
    if (spec.per_circuit) {
      json cols = json::array();
      for (std::size_t k = 0; k < nc; ++k)
        cols.push_back({{"index", k + 1},
                        {"vertices", closed_vertices(res.circuits[k])},
                        {"edge_ids", res.circuits[k].edge_ids}});
      j["circuits"] = cols;
    }
    if (spec.representatives) j["representatives"] = res.representative_names;
    json pts = json::array();
    for (const auto& p : res.points) {
      json e = {{"omega_c", p.omega_c}, {"status", p.ok ? "ok" : "failed"}};
      if (!p.ok) {
        e["error"] = p.error;
        pts.push_back(e);
        continue;
      }
      const auto& pp = p.performance;
      e["heat"] = per_bath_json(pp.heat);
      e["power"] = pp.power;
      e["entropy"] = pp.entropy;
      e["mode"] = std::string(mode_name(pp.mode));
      e["merit_kind"] = std::string(merit_name(pp.merit_kind));
      e["merit"] = pp.merit_kind == MeritKind::none ? json(nullptr) : json(pp.merit);
      e["max_discrepancy"] = p.reconciliation.max_discrepancy();
      if (spec.per_circuit) {
        json per = json::array();
        for (const auto& rep : p.circuits)
          per.push_back({{"heat", per_bath_json(rep.heat)}, {"power", rep.power}});
        e["circuits"] = per;
      }
      if (p.representatives)
        e["representative_currents"] = {{"heat", per_bath_json(p.representatives->heat)},
                                        {"power", p.representatives->power}};
      pts.push_back(e);
    }
    j["points"] = pts;
    r.output = dump(j);
    return r;
  }

  std::ostringstream os;
  os << "omega_c,status,Q_c,Q_h,Q_w,P,S,mode,merit_kind,merit,max_discrepancy";
  if (spec.representatives) os << ",QR_c,QR_h,QR_w,PR";
  for (std::size_t k = 1; k <= nc; ++k)
    os << ",Q_c[" << k << "],Q_h[" << k << "],Q_w[" << k << "],P[" << k << "]";
  os << '\n';

  const std::string nan = "nan";
  for (const auto& p : res.points) {
    os << format_double(p.omega_c) << ',' << (p.ok ? "ok" : "failed");
    if (!p.ok) {
      for (int k = 0; k < 5; ++k) os << ',' << nan;
      os << ",,none," << nan << ',' << nan;
      if (spec.representatives) os << ',' << nan << ',' << nan << ',' << nan << ',' << nan;
      for (std::size_t k = 0; k < 4 * nc; ++k) os << ',' << nan;
      os << '\n';
      continue;
    }
    const auto& pp = p.performance;
    for (Bath b : kAllBaths) os << ',' << format_double(pp.heat[b]);
    os << ',' << format_double(pp.power) << ',' << format_double(pp.entropy) << ','
       << mode_name(pp.mode) << ',' << merit_name(pp.merit_kind) << ','
       << format_double(pp.merit) << ',' << format_double(p.reconciliation.max_discrepancy());
    if (p.representatives) {
      for (Bath b : kAllBaths) os << ',' << format_double(p.representatives->heat[b]);
      os << ',' << format_double(p.representatives->power);
    }
    for (const auto& rep : p.circuits) {
      for (Bath b : kAllBaths) os << ',' << format_double(rep.heat[b]);
      os << ',' << format_double(rep.power);
    }
    os << '\n';
  }
  r.output = os.str();
  return r;
}

// -- crosscheck -------------------------------------------------------------

struct Check {
  std::string name;
  double value;
  double tolerance;
};

RunResult run_crosscheck(const RunConfig& cfg) {
  std::vector<Check> checks;

  const RateGraph graph = build_graph(cfg.model);
  const bool same = enumerate_circuits(graph) == enumerate_circuits_oracle(graph);
  checks.push_back({"enumerator_mismatch", same ? 0.0 : 1.0, 0.0});

  std::optional<CrosscheckReport> eigen;
  if (const auto* a = std::get_if<AbsorptionWireParams>(&cfg.model)) eigen = eigen_crosscheck(*a);
  if (const auto* d = std::get_if<DrivenWireParams>(&cfg.model)) eigen = eigen_crosscheck(*d);
  if (eigen) {
    checks.push_back({"eigenfrequency_deviation", eigen->max_eigenfrequency_deviation,
                      kEigenfrequencyTolerance});
    checks.push_back({"coefficient_deviation", eigen->max_coefficient_deviation,
                      kCoefficientTolerance});
  }

  const auto ev = evaluate_point(cfg.model);
  checks.push_back({"reconciliation", ev.reconciliation.max_discrepancy(), kReconciliationTolerance});

  bool pass = true;
  for (const auto& c : checks) pass = pass && c.value <= c.tolerance;
  if (!pass) {
    std::ostringstream os;
    os << "crosscheck failed:";
    for (const auto& c : checks)
      if (c.value > c.tolerance) os << ' ' << c.name << '=' << format_double(c.value);
    throw physics_error(os.str());
  }

  RunResult r;
  r.summary = "crosscheck pass (" + std::to_string(checks.size()) + " checks)";
  if (cfg.output.format == OutputFormat::json) {
    json j = header(cfg, omega_c_of(cfg.model));
    json list = json::array();
    for (const auto& c : checks)
      list.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance},
                      {"status", "pass"}});
    j["checks"] = list;
    if (eigen) {
      json entries = json::array();
      for (const auto& e : eigen->entries)
        entries.push_back({{"bath", std::string(bath_label(e.bath))},
                           {"i", e.i},
                           {"j", e.j},
                           {"analytic", e.analytic},
                           {"numeric", e.numeric}});
      j["entries"] = entries;
    }
    r.output = dump(j);
    return r;
  }

  std::ostringstream os;
  os << "check,value,tolerance,status\n";
  for (const auto& c : checks)
    os << c.name << ',' << format_double(c.value) << ',' << format_double(c.tolerance) << ",pass\n";
  r.output = os.str();
  return r;
}

}  // namespace

RunResult execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::enumerate: return run_enumerate(cfg);
    case Command::steady: return run_steady(cfg);
    case Command::circuits: return run_circuits(cfg);
    case Command::sweep: return run_sweep(cfg, false);
    case Command::representatives: return run_sweep(cfg, true);
    case Command::crosscheck: return run_crosscheck(cfg);
  }
  throw Error(ErrorKind::internal, "unhandled command");
}

void write_file_atomic(const std::string& path, const std::string& text) {
  if (path.empty()) throw Error(ErrorKind::io, "empty output path");
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + tmp + "' for writing");
    out << text;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw Error(ErrorKind::io, "write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorKind::io, "cannot move output into place at '" + path + "'");
  }
}

}  // namespace qtnet
