#pragma once

// Command dispatch and output rendering. The column layouts are part of the
// documented output schema (README.md, schemas/output.schema.json).

#include "qtnet/config.hpp"

#include <string>

namespace qtnet {

struct RunResult {
  std::string output;   // complete file contents
  std::string summary;  // one line, e.g. the circuit census
};

/// Runs the configured command. Deterministic: identical configurations
/// give byte-identical output. Throws qtnet::Error on any failure.
RunResult execute(const RunConfig& config);

/// Writes `text` to `path` through a temporary file and a rename, so a
/// failed run never leaves a partial file. Throws ErrorKind::io.
void write_file_atomic(const std::string& path, const std::string& text);

/// printf("%.17g") equivalent; "nan" for NaN.
std::string format_double(double v);

/// Rate graph as JSON: vertices, edges (with rates) and baths. The reader
/// validates structure only; use validate_graph for the physics.
std::string graph_to_json(const RateGraph& graph);
RateGraph graph_from_json(std::string_view text);  // throws ConfigError

/// "total=38 tricycles=22 heat_leaks=15 trivial=1"
std::string census_line(const std::vector<CircuitReport>& reports);

}  // namespace qtnet
