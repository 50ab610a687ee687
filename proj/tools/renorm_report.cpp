#include "renorm/report/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace renorm::report;

int main(int argc, char** argv)
{
  CLI::App app{"Runs one renorming scenario and writes report.jsonl, tables/*.csv and figures/*.svg."};
  std::string scenario_name, config_path;
  std::optional<double> delta;
  std::optional<std::size_t> truncation, n_max;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  app.add_option("--scenario", scenario_name, "thmA, thmB, thmC, smooth-c0 or oracles");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--delta", delta, "renorming parameter");
  app.add_option("--truncation", truncation, "ambient dimension N (depth for smooth-c0)");
  app.add_option("--n-max", n_max, "largest index checked");
  app.add_option("--seed", seed, "RNG seed");
  app.add_option("--out-dir", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  ScenarioConfig cfg;
  try {
    nlohmann::json file = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("invalid config: cannot read " + config_path);
      try {
        file = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid config: JSON parse error: ") + e.what());
      }
      if (!file.is_object()) throw std::invalid_argument("invalid config: top level must be a JSON object");
    }
    if (scenario_name.empty() && file.contains("scenario")) {
      if (!file["scenario"].is_string()) throw std::invalid_argument("invalid config: key 'scenario' has the wrong type");
      scenario_name = file["scenario"].get<std::string>();
    }
    if (scenario_name.empty()) throw std::invalid_argument("invalid config: scenario is required");
    cfg = defaults_for(parse_scenario(scenario_name));
    apply_json(cfg, file);
    if (delta) cfg.delta = *delta;
    if (truncation) cfg.truncation = *truncation;
    if (n_max) cfg.n_max = *n_max;
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.out_dir = *out_dir;
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    const auto result = run_scenario(cfg);
    std::cout << detail::summary_text(result);
    return result.pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
