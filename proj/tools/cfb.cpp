#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

#include "cfb/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cfb: pointwise verification of contact structures, connections, "
               "fatness, moment maps, K-contact metrics and cross-sections on "
               "embedded level sets"};

  std::string scenario, config_path, out_path;
  uint64_t seed = 42;
  int samples = 0;
  int threads = 0;
  bool list = false;
  std::map<std::string, double> tol_overrides;

  app.add_option("--scenario", scenario, "scenario id (see --list-scenarios)");
  app.add_option("--config", config_path, "keyed config file; flags override its values");
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_option("--samples", samples, "main sample count (0 = scenario default)")
      ->capture_default_str();
  app.add_option("--threads", threads, "worker threads (0 = CFB_THREADS or hardware)")
      ->capture_default_str();
  app.add_option("--out", out_path, "write the JSON report to this path");
  app.add_flag("--list-scenarios", list, "print scenario ids and exit");
  for (const char* name : {"constraint", "rank", "pf", "fat", "invariance", "basic"}) {
    app.add_option_function<double>(
        std::string("--tol-") + name,
        [&tol_overrides, name](double v) { tol_overrides[name] = v; },
        std::string("override the '") + name + "' tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (list) {
    for (const auto& name : cfb::runner::scenario_names()) std::cout << name << "\n";
    return 0;
  }

  try {
    cfb::runner::ScenarioConfig config;
    if (!config_path.empty()) config = cfb::runner::parse_config_file(config_path);
    if (!scenario.empty()) config.scenario = scenario;
    if (app.count("--seed")) config.seed = seed;
    if (app.count("--samples")) config.samples = samples;
    if (app.count("--threads")) config.threads = threads;
    if (!out_path.empty()) config.out_path = out_path;
    for (const auto& [name, value] : tol_overrides) config.tol.set(name, value);
    if (config.scenario.empty())
      throw cfb::ConfigError("no scenario given (use --scenario or --config)");

    const auto names = cfb::runner::scenario_names();
    if (std::find(names.begin(), names.end(), config.scenario) == names.end())
      throw cfb::ConfigError("unknown scenario '" + config.scenario + "'");

    const cfb::runner::ReportDocument report = cfb::runner::run(config);
    std::cout << report.summary();
    if (!config.out_path.empty()) {
      std::ofstream out(config.out_path);
      if (!out) throw cfb::ConfigError("cannot write report to '" + config.out_path + "'");
      out << report.to_json().dump(2) << "\n";
    }
    return report.all_pass() ? 0 : 1;
  } catch (const cfb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cfb::Error& e) {
    std::cerr << "scenario error: " << e.what() << "\n";
    return 2;
  }
}
