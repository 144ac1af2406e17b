#pragma once

#include <stdexcept>
#include <string>

namespace qtnet {

enum class ErrorKind {
  config,     // malformed or out-of-range run configuration
  parameter,  // physical parameters outside the model's domain
  graph,      // rate graph violates the master-equation structure
  physics,    // a numerical consistency check failed
  io,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Configuration error tagged with the offending field path, e.g.
/// "parameters.baths.c.temperature".
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(ErrorKind::config, path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

inline Error parameter_error(const std::string& what) {
  return Error(ErrorKind::parameter, what);
}
inline Error graph_error(const std::string& what) {
  return Error(ErrorKind::graph, what);
}
inline Error physics_error(const std::string& what) {
  return Error(ErrorKind::physics, what);
}

}  // namespace qtnet
