#include <iostream>

#include <CLI11.hpp>

#include "qx/experiment.hpp"

namespace {

int run_sample(const std::string& config, std::uint64_t replicas, std::int64_t seed,
               int threads, bool audit, int kmax) {
  qx::ScenarioConfig cfg = qx::ScenarioConfig::from_file(config);
  if (replicas) cfg.replicas = replicas;
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (threads) cfg.threads = threads;
  try {
    if (audit) {
      qx::ResolvedScenario rs = qx::resolve_scenario(cfg);
      qx::RatioAudit ra = qx::ratio_bound_audit(rs.params, *rs.sampled, kmax);
      std::cout << ra.to_json() << "\n";
      if (!ra.pass) {
        std::cerr << "ratio-bound audit failed\n";
        return 1;
      }
    }
    qx::ExperimentSummary sum = qx::run_experiment(cfg);
    qx::emit_summary({sum}, std::cout, "");
    std::cout << sum.to_json() << "\n";
    return 0;
  } catch (const qx::InfeasibleError& e) {
    std::cerr << e.what();
    return 2;
  } catch (const qx::RatioViolation& e) {
    std::cerr << "runtime assertion failed: " << e.what() << "\n";
    return 1;
  }
}

int run_solve(const std::string& config) {
  qx::ScenarioConfig cfg = qx::ScenarioConfig::from_file(config);
  cfg.solve = true;
  try {
    qx::ResolvedScenario rs = qx::resolve_scenario(cfg);
    qx::FeasibilityReport rep = qx::check_feasibility(rs.params, *rs.sampled);
    std::cout << "m=" << rs.params.m << " delta=" << rs.params.delta
              << " gamma=" << rs.params.gamma << " alpha=" << rs.params.alpha
              << " mu=" << rs.params.mu << "\n"
              << rep.pretty() << rep.to_json() << "\n";
    return 0;
  } catch (const qx::InfeasibleError& e) {
    std::cerr << e.what();
    return 2;
  }
}

int run_lindley(const std::string& config, std::uint64_t length, std::uint64_t batch) {
  qx::ScenarioConfig cfg = qx::ScenarioConfig::from_file(config);
  if (length) cfg.lindley_length = length;
  if (batch) cfg.lindley_batch = batch;
  qx::DistPtr d = cfg.make_distribution();
  qx::CounterRng rng(cfg.seed, 0x4C494E444C4559ULL, 0);
  std::vector<double> chain = qx::lindley_chain(*d, cfg.mu, cfg.lindley_length, rng);
  qx::BatchMeansResult bm = qx::batch_means_ci(chain, cfg.lindley_batch);
  std::cout << "{\"mean\":" << bm.mean << ",\"lo\":" << bm.lo << ",\"hi\":" << bm.hi
            << ",\"length\":" << bm.length << ",\"batch\":" << bm.batch_size << "}\n";
  return 0;
}

int run_audit(const std::string& config, int kmax) {
  qx::ScenarioConfig cfg = qx::ScenarioConfig::from_file(config);
  qx::DistPtr d = cfg.make_distribution();
  qx::AlgorithmParams p = cfg.params;
  qx::FeasibilityReport rep = qx::check_feasibility(p, *d);
  std::cout << rep.pretty();
  qx::RatioAudit ra = qx::ratio_bound_audit(p, *d, kmax);
  std::cout << ra.to_json() << "\n";
  if (!rep.feasible || !ra.pass) {
    std::cerr << "audit failed\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact stationary-queue sampler"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t replicas = 0, length = 0, batch = 0;
  std::int64_t seed = -1;
  int threads = 0, kmax = 30;
  bool audit = false;

  CLI::App* sample = app.add_subcommand("sample", "draw exact replicas and compare");
  sample->add_option("--config", config)->required();
  sample->add_option("--replicas", replicas);
  sample->add_option("--seed", seed);
  sample->add_option("--threads", threads);
  sample->add_flag("--audit", audit);
  sample->add_option("--kmax", kmax);

  CLI::App* solve = app.add_subcommand("solve-params", "minimize m subject to the constraints");
  solve->add_option("--config", config)->required();

  CLI::App* lindley = app.add_subcommand("lindley", "forward chain with batch means");
  lindley->add_option("--config", config)->required();
  lindley->add_option("--length", length);
  lindley->add_option("--batch", batch);

  CLI::App* auditc = app.add_subcommand("audit", "feasibility + ratio-bound audit");
  auditc->add_option("--config", config)->required();
  auditc->add_option("--kmax", kmax);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) return run_sample(config, replicas, seed, threads, audit, kmax);
    if (solve->parsed()) return run_solve(config);
    if (lindley->parsed()) return run_lindley(config, length, batch);
    if (auditc->parsed()) return run_audit(config, kmax);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
