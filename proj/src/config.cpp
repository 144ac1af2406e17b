#include "qtnet/config.hpp"

#include "qtnet/error.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace qtnet {

using nlohmann::json;

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw ConfigError(join(path, key), "unknown field");
}

const json& require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  return j;
}

double read_number(const json& obj, const std::string& path, const std::string& key,
                   double fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ConfigError(join(path, key), "expected a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(join(path, key), "must be finite");
  return v;
}

double read_positive(const json& obj, const std::string& path, const std::string& key,
                     double fallback) {
  const double v = read_number(obj, path, key, fallback);
  if (!(v > 0.0)) throw ConfigError(join(path, key), "must be positive");
  return v;
}

int read_int(const json& obj, const std::string& path, const std::string& key, int fallback,
             int minimum) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
  const auto v = it->get<long long>();
  if (v < minimum || v > 1000000)
    throw ConfigError(join(path, key), "out of range (minimum " + std::to_string(minimum) + ")");
  return static_cast<int>(v);
}

bool read_bool(const json& obj, const std::string& path, const std::string& key, bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ConfigError(join(path, key), "expected a boolean");
  return it->get<bool>();
}

std::string read_string(const json& obj, const std::string& path, const std::string& key,
                        std::string fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ConfigError(join(path, key), "expected a string");
  return it->get<std::string>();
}

void read_bath(const json& baths, const std::string& path, BathSpec& bath) {
  const std::string key(bath_label(bath.label));
  auto it = baths.find(key);
  if (it == baths.end()) return;
  const std::string here = join(path, key);
  require_object(*it, here);
  reject_unknown(*it, here, {"temperature", "dimension", "coupling"});
  bath.temperature = read_positive(*it, here, "temperature", bath.temperature);
  bath.dimension = read_int(*it, here, "dimension", bath.dimension, 1);
  bath.coupling = read_positive(*it, here, "coupling", bath.coupling);
}

void read_baths(const json& params, const std::string& path, std::vector<BathSpec*> baths) {
  auto it = params.find("baths");
  if (it == params.end()) return;
  const std::string here = join(path, "baths");
  require_object(*it, here);
  std::set<std::string> allowed;
  for (const auto* b : baths) allowed.insert(std::string(bath_label(b->label)));
  reject_unknown(*it, here, allowed);
  for (auto* b : baths) read_bath(*it, here, *b);
}

json bath_json(const BathSpec& b) {
  return {{"temperature", b.temperature}, {"dimension", b.dimension}, {"coupling", b.coupling}};
}

struct ParamReader {
  const json& j;
  const std::string path;

  void operator()(AbsorptionWireParams& p) const {
    reject_unknown(j, path, {"omega_c", "omega_h", "delta", "g", "baths"});
    p.omega_c = read_positive(j, path, "omega_c", p.omega_c);
    p.omega_h = read_positive(j, path, "omega_h", p.omega_h);
    p.delta = read_number(j, path, "delta", p.delta);
    p.g = read_positive(j, path, "g", p.g);
    read_baths(j, path, {&p.cold, &p.hot, &p.work});
  }
  void operator()(DrivenWireParams& p) const {
    reject_unknown(j, path, {"omega_c", "omega_h", "g", "lambda", "baths"});
    p.omega_c = read_positive(j, path, "omega_c", p.omega_c);
    p.omega_h = read_positive(j, path, "omega_h", p.omega_h);
    p.g = read_positive(j, path, "g", p.g);
    p.lambda = read_positive(j, path, "lambda", p.lambda);
    read_baths(j, path, {&p.cold, &p.hot});
  }
  void operator()(AppendixParams& p) const {
    reject_unknown(j, path, {"omega_c", "omega_h", "lambda", "baths"});
    p.omega_c = read_positive(j, path, "omega_c", p.omega_c);
    p.omega_h = read_positive(j, path, "omega_h", p.omega_h);
    p.lambda = read_positive(j, path, "lambda", p.lambda);
    read_baths(j, path, {&p.cold, &p.hot});
  }
  void operator()(DirectParams& p) const {
    reject_unknown(j, path, {"omega_c", "omega_h", "baths"});
    p.omega_c = read_positive(j, path, "omega_c", p.omega_c);
    p.omega_h = read_positive(j, path, "omega_h", p.omega_h);
    read_baths(j, path, {&p.cold, &p.hot, &p.work});
  }
};

struct ParamWriter {
  json operator()(const AbsorptionWireParams& p) const {
    return {{"omega_c", p.omega_c}, {"omega_h", p.omega_h}, {"delta", p.delta}, {"g", p.g},
            {"baths", {{"c", bath_json(p.cold)}, {"h", bath_json(p.hot)}, {"w", bath_json(p.work)}}}};
  }
  json operator()(const DrivenWireParams& p) const {
    return {{"omega_c", p.omega_c}, {"omega_h", p.omega_h}, {"g", p.g}, {"lambda", p.lambda},
            {"baths", {{"c", bath_json(p.cold)}, {"h", bath_json(p.hot)}}}};
  }
  json operator()(const AppendixParams& p) const {
    return {{"omega_c", p.omega_c}, {"omega_h", p.omega_h}, {"lambda", p.lambda},
            {"baths", {{"c", bath_json(p.cold)}, {"h", bath_json(p.hot)}}}};
  }
  json operator()(const DirectParams& p) const {
    return {{"omega_c", p.omega_c}, {"omega_h", p.omega_h},
            {"baths", {{"c", bath_json(p.cold)}, {"h", bath_json(p.hot)}, {"w", bath_json(p.work)}}}};
  }
};

}  // namespace

std::string_view command_name(Command c) {
  switch (c) {
    case Command::enumerate: return "enumerate";
    case Command::steady: return "steady";
    case Command::circuits: return "circuits";
    case Command::sweep: return "sweep";
    case Command::representatives: return "representatives";
    case Command::crosscheck: return "crosscheck";
  }
  return "?";
}

std::optional<Command> parse_command(std::string_view name) {
  for (Command c : {Command::enumerate, Command::steady, Command::circuits, Command::sweep,
                    Command::representatives, Command::crosscheck})
    if (command_name(c) == name) return c;
  return std::nullopt;
}

std::string_view format_name(OutputFormat f) {
  return f == OutputFormat::csv ? "csv" : "json";
}

std::optional<OutputFormat> parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  return std::nullopt;
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (ModelKind k : {ModelKind::absorption_wire, ModelKind::driven_wire,
                      ModelKind::appendix_three_level, ModelKind::direct_three_level})
    if (model_name(k) == name) return k;
  return std::nullopt;
}

ModelSpec default_model(ModelKind kind) {
  switch (kind) {
    case ModelKind::absorption_wire: return AbsorptionWireParams{};
    case ModelKind::driven_wire: return DrivenWireParams{};
    case ModelKind::appendix_three_level: return AppendixParams{};
    case ModelKind::direct_three_level: return DirectParams{};
  }
  throw Error(ErrorKind::internal, "unhandled model kind");
}

SweepSpec default_sweep(const ModelSpec& model) {
  SweepSpec s;
  s.model = model;
  switch (model_kind(model)) {
    case ModelKind::absorption_wire:
    case ModelKind::direct_three_level:
      s.lo = 0.05;
      s.hi = 0.95;
      break;
    case ModelKind::driven_wire:
      s.lo = 0.35;
      s.hi = 0.98;
      break;
    case ModelKind::appendix_three_level:
      s.lo = 0.1;
      s.hi = 0.98;
      break;
  }
  return s;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  require_object(root, "(root)");
  reject_unknown(root, "", {"model", "command", "parameters", "sweep", "output"});

  auto m = root.find("model");
  if (m == root.end()) throw ConfigError("model", "missing field");
  if (!m->is_string()) throw ConfigError("model", "expected a string");
  const auto kind = parse_model_kind(m->get<std::string>());
  if (!kind) throw ConfigError("model", "unknown model '" + m->get<std::string>() + "'");

  RunConfig cfg;
  cfg.model = default_model(*kind);
  if (auto p = root.find("parameters"); p != root.end()) {
    require_object(*p, "parameters");
    std::visit(ParamReader{*p, "parameters"}, cfg.model);
  }

  const std::string cmd = read_string(root, "", "command", "enumerate");
  const auto command = parse_command(cmd);
  if (!command) throw ConfigError("command", "unknown command '" + cmd + "'");
  cfg.command = *command;

  cfg.sweep = default_sweep(cfg.model);
  if (auto s = root.find("sweep"); s != root.end()) {
    require_object(*s, "sweep");
    reject_unknown(*s, "sweep", {"lo", "hi", "points", "per_circuit", "representatives"});
    cfg.sweep.lo = read_number(*s, "sweep", "lo", cfg.sweep.lo);
    cfg.sweep.hi = read_number(*s, "sweep", "hi", cfg.sweep.hi);
    cfg.sweep.points = read_int(*s, "sweep", "points", cfg.sweep.points, 2);
    cfg.sweep.per_circuit = read_bool(*s, "sweep", "per_circuit", cfg.sweep.per_circuit);
    cfg.sweep.representatives =
        read_bool(*s, "sweep", "representatives", cfg.sweep.representatives);
    if (!(cfg.sweep.lo < cfg.sweep.hi)) throw ConfigError("sweep.lo", "must be smaller than sweep.hi");
  }

  if (auto o = root.find("output"); o != root.end()) {
    require_object(*o, "output");
    reject_unknown(*o, "output", {"format", "path"});
    const std::string f = read_string(*o, "output", "format", "csv");
    const auto format = parse_format(f);
    if (!format) throw ConfigError("output.format", "expected \"csv\" or \"json\"");
    cfg.output.format = *format;
    cfg.output.path = read_string(*o, "output", "path", "");
  }
  return cfg;
}

std::string canonical_json(const RunConfig& c) {
  json root;
  root["model"] = std::string(model_name(model_kind(c.model)));
  root["command"] = std::string(command_name(c.command));
  root["parameters"] = std::visit(ParamWriter{}, c.model);
  root["sweep"] = {{"lo", c.sweep.lo},
                   {"hi", c.sweep.hi},
                   {"points", c.sweep.points},
                   {"per_circuit", c.sweep.per_circuit},
                   {"representatives", c.sweep.representatives}};
  root["output"] = {{"format", std::string(format_name(c.output.format))},
                    {"path", c.output.path}};
  return root.dump(2) + "\n";
}

}  // namespace qtnet
