// qtnet: command-line front end over the C API.

#include "qtnet/qtnet.h"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int report(qtnet_status s) {
  std::cerr << "qtnet: error: " << qtnet_last_error() << '\n';
  switch (s) {
    case QTNET_ERR_CONFIG:
    case QTNET_ERR_ARGUMENT: return 2;
    case QTNET_ERR_PHYSICS: return 3;
    case QTNET_ERR_IO: return 4;
    default: return 1;
  }
}

bool parse_range(const std::string& text, double& lo, double& hi) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    std::size_t used = 0;
    lo = std::stod(text.substr(0, colon), &used);
    if (used != colon) return false;
    const std::string rest = text.substr(colon + 1);
    hi = std::stod(rest, &used);
    return used == rest.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circuit decomposition of heat currents in quantum thermal machines"};
  std::string config_path, command, out_path, format, range;
  int points = 0;
  bool seedless = false;

  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--command", command,
                 "enumerate | steady | circuits | sweep | representatives | crosscheck");
  app.add_option("--out", out_path, "output file (default: standard output)");
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--points", points, "sweep point count")->check(CLI::Range(2, 1000000));
  app.add_option("--range", range, "sweep range lo:hi in omega_c");
  app.add_flag("--seedless", seedless, "no randomness is used; accepted for compatibility")
      ->disable_flag_override();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "qtnet: error: cannot read '" << config_path << "'\n";
    return 4;
  }
  std::ostringstream text;
  text << in.rdbuf();

  qtnet_config* cfg = nullptr;
  if (auto s = qtnet_config_parse(text.str().c_str(), &cfg); s != QTNET_OK) return report(s);

  qtnet_status s = QTNET_OK;
  if (!command.empty()) s = qtnet_config_set_command(cfg, command.c_str());
  if (s == QTNET_OK && !format.empty()) s = qtnet_config_set_format(cfg, format.c_str());
  if (s == QTNET_OK && !out_path.empty()) s = qtnet_config_set_output(cfg, out_path.c_str());
  if (s == QTNET_OK && points != 0) s = qtnet_config_set_points(cfg, points);
  if (s == QTNET_OK && !range.empty()) {
    double lo = 0.0, hi = 0.0;
    if (!parse_range(range, lo, hi)) {
      qtnet_config_free(cfg);
      std::cerr << "qtnet: error: --range expects lo:hi\n";
      return 2;
    }
    s = qtnet_config_set_range(cfg, lo, hi);
  }
  if (s != QTNET_OK) {
    const int rc = report(s);
    qtnet_config_free(cfg);
    return rc;
  }

  qtnet_result* res = nullptr;
  s = qtnet_run(cfg, &res);
  const bool to_stdout = std::string(qtnet_config_output_path(cfg)).empty();
  qtnet_config_free(cfg);
  if (s != QTNET_OK) return report(s);

  if (to_stdout) {
    std::cout << qtnet_result_output(res);
    std::cerr << qtnet_result_summary(res) << '\n';
  } else {
    std::cout << qtnet_result_summary(res) << '\n';
  }
  qtnet_result_free(res);
  return 0;
}
