#pragma once

// JSON run configuration.
//
//   {
//     "model": "absorption_wire",
//     "command": "sweep",
//     "parameters": {"omega_c": 0.5, "g": 0.05,
//                    "baths": {"c": {"temperature": 9}}},
//     "sweep": {"lo": 0.06, "hi": 0.94, "points": 200},
//     "output": {"format": "csv", "path": "out.csv"}
//   }
//
// Everything except "model" is optional; omitted parameters take the
// model's default values.

#include "qtnet/analysis.hpp"
#include "qtnet/models.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace qtnet {

enum class Command { enumerate, steady, circuits, sweep, representatives, crosscheck };
std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

enum class OutputFormat { csv, json };
std::string_view format_name(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view name);

struct OutputSpec {
  OutputFormat format = OutputFormat::csv;
  std::string path;  // empty: standard output
};

struct RunConfig {
  ModelSpec model;
  Command command = Command::enumerate;
  SweepSpec sweep;  // sweep.model mirrors `model`
  OutputSpec output;
};

/// Default omega_c sweep range for each model, inside its valid domain.
SweepSpec default_sweep(const ModelSpec& model);

std::optional<ModelKind> parse_model_kind(std::string_view name);
ModelSpec default_model(ModelKind kind);

/// Throws ConfigError naming the offending field.
RunConfig parse_config(std::string_view text);

/// Complete configuration with defaults filled in, keys sorted.
/// parse_config(canonical_json(c)) reproduces c.
std::string canonical_json(const RunConfig& config);

}  // namespace qtnet
