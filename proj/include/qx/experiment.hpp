#pragma once

#include "qx/config.hpp"
#include "qx/feasibility.hpp"
#include "qx/oracles.hpp"
#include "qx/sampler.hpp"

namespace qx {

struct ReplicaRow {
  std::uint64_t id = 0;
  double m0 = 0.0;
  std::int64_t first_idle = -1;  // -1 = not found within the horizon
  std::uint64_t fn_evals = 0;
};

struct ExperimentSummary {
  std::string name;
  AlgorithmParams params;           // as run (post-solve)
  FeasibilityReport feasibility;
  double exact_mean = 0.0, exact_lo = 0.0, exact_hi = 0.0;
  BatchMeansResult lindley;
  double rho_exact = 0.0, rho_approx = 0.0;
  double seconds_exact = 0.0, seconds_lindley = 0.0;
  std::uint64_t replicas = 0;
  std::uint64_t total_fn_evals = 0;
  bool coupled = false;
  CmZeroResult cm0;

  std::string to_json() const;
};

// Resolve the distribution and parameters of a scenario (runs the solver
// when requested, and re-solves against the dominating law in coupling
// mode). Throws InfeasibleError when the checker rejects.
struct ResolvedScenario {
  DistPtr target;
  DistPtr sampled;   // law the exact sampler actually runs on
  double target_mu = 0.0;
  AlgorithmParams params;  // params.mu is the sampled walk's drift
  bool coupled = false;
  double coupling_h = 0.0;
};
ResolvedScenario resolve_scenario(const ScenarioConfig& cfg);

// Draw one replica of the backward sample for a resolved scenario.
BackwardSample replica_backward(const ResolvedScenario& rs, Replica& r, std::uint64_t n);

// Full experiment: replicas (threaded, reproducible per (seed, index)),
// the Lindley cross-check, and the CSV/JSON artifacts under output_dir
// (when set): <name>_replicas.csv, <name>_lindley.csv, <name>_summary.json.
ExperimentSummary run_experiment(const ScenarioConfig& cfg,
                                 std::vector<ReplicaRow>* rows_out = nullptr);

// Aligned text table plus a combined JSON document for several summaries.
void emit_summary(const std::vector<ExperimentSummary>& results, std::ostream& table,
                  const std::string& json_path);

}  // namespace qx
