// Command-line front end. Exit codes: 0 success, 2 configuration error,
// 3 numerical failure, 1 anything else (I/O).

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cvrsp/commands.hpp"

namespace {

cvrsp::RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw cvrsp::ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw cvrsp::ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return cvrsp::config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Remote preparation of cat-state qubits from hybrid entanglement: simulation "
               "and analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--seed", seed, "override the configured seed");
  };
  CLI::App* scan = app.add_subcommand("scan", "fidelity scans over Q, heralding efficiency, window");
  CLI::App* prepare = app.add_subcommand("prepare", "conditioned state, Bloch coordinates, Wigner grid");
  CLI::App* tomo = app.add_subcommand("tomo", "homodyne sampling and maximum-likelihood round trip");
  add_common(scan);
  add_common(prepare);
  add_common(tomo);
  app.add_subcommand("print-config", "write the default configuration to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("print-config")) {
      std::cout << cvrsp::to_json(cvrsp::default_config()).dump(2) << "\n";
      return 0;
    }
    cvrsp::RunConfig cfg = load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (scan->parsed()) {
      cvrsp::cmd_scan(cfg, out_dir);
    } else if (prepare->parsed()) {
      cvrsp::cmd_prepare(cfg, out_dir, std::cout);
    } else if (tomo->parsed()) {
      cvrsp::cmd_tomo(cfg, out_dir, std::cout);
    }
  } catch (const cvrsp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cvrsp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
