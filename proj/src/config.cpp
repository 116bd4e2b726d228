#include "qx/config.hpp"

#include <fstream>

#include <json.hpp>

namespace qx {

namespace {

ScenarioConfig parse(const nlohmann::json& j) {
  ScenarioConfig cfg;
  cfg.name = j.value("name", cfg.name);
  const auto& dist = j.at("distribution");
  cfg.alpha_prime = dist.at("alpha_prime").get<double>();
  cfg.c = dist.at("c").get<double>();
  cfg.h = dist.value("h", 0.0);
  cfg.mu = j.value("mu", cfg.mu);

  const auto& pj = j.at("params");
  cfg.params.mu = cfg.mu;
  cfg.params.L = pj.value("L", 1.1);
  cfg.params.alpha = pj.at("alpha").get<double>();
  cfg.params.gamma = pj.at("gamma").get<double>();
  cfg.params.delta = pj.at("delta").get<double>();
  cfg.solve = pj.value("solve", false);
  if (!cfg.solve) cfg.params.m = pj.at("m").get<double>();
  if (pj.contains("sweep_deltas")) cfg.sweep_deltas = pj["sweep_deltas"].get<std::vector<double>>();
  if (pj.contains("sweep_gammas")) cfg.sweep_gammas = pj["sweep_gammas"].get<std::vector<double>>();
  if (pj.contains("beta12_epsilon")) {
    cfg.params.mode = MomentMode::Beta12;
    cfg.params.epsilon = pj["beta12_epsilon"].get<double>();
  }

  cfg.replicas = j.value("replicas", cfg.replicas);
  cfg.horizon_n = j.value("n", cfg.horizon_n);
  if (j.contains("lindley")) {
    cfg.lindley_length = j["lindley"].value("length", cfg.lindley_length);
    cfg.lindley_batch = j["lindley"].value("batch", cfg.lindley_batch);
  }
  cfg.seed = j.value("seed", cfg.seed);
  cfg.threads = j.value("threads", cfg.threads);
  cfg.watchdog = j.value("watchdog", cfg.watchdog);
  if (j.contains("coupling")) cfg.coupling_h = j["coupling"].value("h", 0.0);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  return cfg;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return parse(j);
}

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
  return parse(nlohmann::json::parse(text));
}

DistPtr ScenarioConfig::make_distribution() const {
  if (h > 0.0) return std::make_shared<LatticePareto>(alpha_prime, c, h);
  return std::make_shared<ContinuousPareto>(alpha_prime, c);
}

}  // namespace qx
