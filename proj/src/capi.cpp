#include "qtnet/qtnet.h"

#include "qtnet/config.hpp"
#include "qtnet/error.hpp"
#include "qtnet/runner.hpp"

#include <exception>
#include <new>
#include <string>

struct qtnet_config {
  qtnet::RunConfig cfg;
  std::string canonical;
};

struct qtnet_model {
  qtnet::PointEvaluation ev;
  Eigen::VectorXd populations;
};

struct qtnet_result {
  qtnet::RunResult run;
};

namespace {

thread_local std::string g_last_error;

qtnet_status status_of(qtnet::ErrorKind k) {
  switch (k) {
    case qtnet::ErrorKind::config:
    case qtnet::ErrorKind::parameter:
    case qtnet::ErrorKind::graph: return QTNET_ERR_CONFIG;
    case qtnet::ErrorKind::physics: return QTNET_ERR_PHYSICS;
    case qtnet::ErrorKind::io: return QTNET_ERR_IO;
    case qtnet::ErrorKind::internal: return QTNET_ERR_INTERNAL;
  }
  return QTNET_ERR_INTERNAL;
}

qtnet_status fail(qtnet_status s, std::string msg) {
  g_last_error = std::move(msg);
  return s;
}

// Runs f, translating exceptions into status codes.
template <typename F>
qtnet_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QTNET_OK;
  } catch (const qtnet::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QTNET_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QTNET_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QTNET_ERR_INTERNAL, "unknown error");
  }
}

#define QTNET_REQUIRE(ptr)                                              \
  do {                                                                  \
    if (!(ptr)) return fail(QTNET_ERR_ARGUMENT, #ptr " must not be null"); \
  } while (0)

}  // namespace

extern "C" {

const char* qtnet_version(void) { return "1.0.0"; }

const char* qtnet_last_error(void) { return g_last_error.c_str(); }

qtnet_status qtnet_config_parse(const char* json_text, qtnet_config** out) {
  QTNET_REQUIRE(json_text);
  QTNET_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto* h = new qtnet_config{qtnet::parse_config(json_text), {}};
    *out = h;
  });
}

qtnet_status qtnet_config_set_command(qtnet_config* cfg, const char* command) {
  QTNET_REQUIRE(cfg);
  QTNET_REQUIRE(command);
  const auto c = qtnet::parse_command(command);
  if (!c) return fail(QTNET_ERR_CONFIG, std::string("command: unknown command '") + command + "'");
  cfg->cfg.command = *c;
  return QTNET_OK;
}

qtnet_status qtnet_config_set_format(qtnet_config* cfg, const char* format) {
  QTNET_REQUIRE(cfg);
  QTNET_REQUIRE(format);
  const auto f = qtnet::parse_format(format);
  if (!f) return fail(QTNET_ERR_CONFIG, "output.format: expected \"csv\" or \"json\"");
  cfg->cfg.output.format = *f;
  return QTNET_OK;
}

qtnet_status qtnet_config_set_output(qtnet_config* cfg, const char* path) {
  QTNET_REQUIRE(cfg);
  cfg->cfg.output.path = path ? path : "";
  return QTNET_OK;
}

qtnet_status qtnet_config_set_points(qtnet_config* cfg, int points) {
  QTNET_REQUIRE(cfg);
  if (points < 2) return fail(QTNET_ERR_CONFIG, "sweep.points: at least 2 points are required");
  cfg->cfg.sweep.points = points;
  return QTNET_OK;
}

qtnet_status qtnet_config_set_range(qtnet_config* cfg, double lo, double hi) {
  QTNET_REQUIRE(cfg);
  qtnet::SweepSpec s = cfg->cfg.sweep;
  s.lo = lo;
  s.hi = hi;
  return guarded([&] {
    qtnet::validate(s);
    cfg->cfg.sweep = s;
  });
}

const char* qtnet_config_output_path(const qtnet_config* cfg) {
  return cfg ? cfg->cfg.output.path.c_str() : nullptr;
}

qtnet_status qtnet_config_canonical(qtnet_config* cfg, const char** json_text) {
  QTNET_REQUIRE(cfg);
  QTNET_REQUIRE(json_text);
  return guarded([&] {
    cfg->canonical = qtnet::canonical_json(cfg->cfg);
    *json_text = cfg->canonical.c_str();
  });
}

void qtnet_config_free(qtnet_config* cfg) { delete cfg; }

qtnet_status qtnet_run(const qtnet_config* cfg, qtnet_result** out) {
  QTNET_REQUIRE(cfg);
  QTNET_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto run = qtnet::execute(cfg->cfg);
    if (!cfg->cfg.output.path.empty()) qtnet::write_file_atomic(cfg->cfg.output.path, run.output);
    *out = new qtnet_result{std::move(run)};
  });
}

const char* qtnet_result_output(const qtnet_result* res) {
  return res ? res->run.output.c_str() : nullptr;
}

const char* qtnet_result_summary(const qtnet_result* res) {
  return res ? res->run.summary.c_str() : nullptr;
}

void qtnet_result_free(qtnet_result* res) { delete res; }

qtnet_status qtnet_model_build(const qtnet_config* cfg, qtnet_model** out) {
  QTNET_REQUIRE(cfg);
  QTNET_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto* m = new qtnet_model{qtnet::evaluate_point(cfg->cfg.model), {}};
    try {
      m->populations = qtnet::CircuitAnalyzer(m->ev.graph).steady().populations;
    } catch (...) {
      delete m;
      throw;
    }
    *out = m;
  });
}

int qtnet_model_vertex_count(const qtnet_model* m) { return m ? m->ev.graph.vertex_count() : -1; }

int qtnet_model_edge_count(const qtnet_model* m) { return m ? m->ev.graph.edge_count() : -1; }

int qtnet_model_circuit_count(const qtnet_model* m) {
  return m ? static_cast<int>(m->ev.circuits.size()) : -1;
}

qtnet_status qtnet_model_populations(const qtnet_model* m, double* out, size_t len) {
  QTNET_REQUIRE(m);
  QTNET_REQUIRE(out);
  const auto n = static_cast<size_t>(m->populations.size());
  if (len < n) return fail(QTNET_ERR_ARGUMENT, "output buffer is too short");
  for (size_t i = 0; i < n; ++i) out[i] = m->populations(static_cast<Eigen::Index>(i));
  return QTNET_OK;
}

qtnet_status qtnet_model_heat(const qtnet_model* m, const char* bath, double* out) {
  QTNET_REQUIRE(m);
  QTNET_REQUIRE(bath);
  QTNET_REQUIRE(out);
  const auto b = qtnet::parse_bath(bath);
  if (!b) return fail(QTNET_ERR_ARGUMENT, std::string("unknown bath '") + bath + "'");
  *out = m->ev.reconciliation.direct.heat[*b];
  return QTNET_OK;
}

qtnet_status qtnet_model_power(const qtnet_model* m, double* out) {
  QTNET_REQUIRE(m);
  QTNET_REQUIRE(out);
  *out = m->ev.reconciliation.direct.power;
  return QTNET_OK;
}

void qtnet_model_free(qtnet_model* m) { delete m; }

}  // extern "C"
