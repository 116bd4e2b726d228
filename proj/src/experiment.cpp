#include "qx/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <thread>

#include "qx/coupling.hpp"

namespace qx {

namespace {

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double centering_of(const IncrementDistribution& d) {
  if (const auto* lp = dynamic_cast<const LatticePareto*>(&d)) return lp->centering();
  if (const auto* cp = dynamic_cast<const ContinuousPareto*>(&d)) return cp->shift();
  return 0.0;
}

}  // namespace

ResolvedScenario resolve_scenario(const ScenarioConfig& cfg) {
  ResolvedScenario rs;
  rs.target = cfg.make_distribution();
  rs.target_mu = cfg.mu;
  rs.coupled = cfg.coupling_h > 0.0 || !rs.target->lattice_span();
  double sampled_mu = cfg.mu;
  if (rs.coupled) {
    const double ch = cfg.coupling_h > 0.0 ? cfg.coupling_h : cfg.mu / 10.0;
    LatticeCoupling cp = build_coupling(rs.target, ch, cfg.mu);
    rs.sampled = cp.primed;
    sampled_mu = cp.mu_prime;
    rs.coupling_h = ch;
  } else {
    rs.sampled = rs.target;
  }
  rs.params = cfg.params;
  rs.params.mu = sampled_mu;
  if (cfg.solve) {
    std::vector<double> deltas = cfg.sweep_deltas.empty()
                                     ? std::vector<double>{cfg.params.delta}
                                     : cfg.sweep_deltas;
    std::vector<double> gammas = cfg.sweep_gammas.empty()
                                     ? std::vector<double>{cfg.params.gamma}
                                     : cfg.sweep_gammas;
    rs.params = solve_params(*rs.sampled, rs.params, deltas, gammas);
  }
  FeasibilityReport rep = check_feasibility(rs.params, *rs.sampled);
  if (!rep.feasible) throw InfeasibleError(std::move(rep));
  return rs;
}

BackwardSample replica_backward(const ResolvedScenario& rs, Replica& r, std::uint64_t n) {
  if (rs.coupled) {
    LatticeCoupling cp = build_coupling(rs.target, rs.coupling_h, rs.target_mu);
    return sample_backward_via_coupling(cp, rs.params, r, n);
  }
  Sampler s(rs.params, rs.sampled);
  return s.backward(r, n);
}

ExperimentSummary run_experiment(const ScenarioConfig& cfg, std::vector<ReplicaRow>* rows_out) {
  ExperimentSummary sum;
  sum.name = cfg.name;
  ResolvedScenario rs = resolve_scenario(cfg);
  sum.params = rs.params;
  sum.feasibility = check_feasibility(rs.params, *rs.sampled);
  sum.coupled = rs.coupled;
  sum.replicas = cfg.replicas;
  if (cfg.replicas < 1) throw std::domain_error("run_experiment: need at least one replica");

  sum.cm0 = check_cm0(rs.params, *rs.sampled, 1000000, cfg.seed ^ 0xC303);

  std::vector<ReplicaRow> rows(cfg.replicas);
  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= cfg.replicas) return;
      Replica r(cfg.seed, i, cfg.watchdog);
      BackwardSample bs = replica_backward(rs, r, cfg.horizon_n);
      ReplicaRow& row = rows[i];
      row.id = i;
      row.m0 = bs.maxima[0];
      auto idle = first_idle_time(bs);
      row.first_idle = idle ? static_cast<std::int64_t>(*idle) : -1;
      row.fn_evals = r.budget.used;
    }
  };
  const int nthreads = std::max(1, cfg.threads);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  sum.seconds_exact = wall_seconds(t0);

  double mean = 0.0;
  for (const auto& row : rows) {
    mean += row.m0;
    sum.total_fn_evals += row.fn_evals;
  }
  mean /= static_cast<double>(rows.size());
  double ss = 0.0;
  for (const auto& row : rows) ss += (row.m0 - mean) * (row.m0 - mean);
  const double se = rows.size() > 1 ? std::sqrt(ss / static_cast<double>(rows.size() - 1) /
                                               static_cast<double>(rows.size()))
                                    : 0.0;
  sum.exact_mean = mean;
  sum.exact_lo = mean - 1.96 * se;
  sum.exact_hi = mean + 1.96 * se;

  const auto t1 = std::chrono::steady_clock::now();
  CounterRng lrng(cfg.seed, 0x4C494E444C4559ULL, 0);
  std::vector<double> chain = lindley_chain(*rs.target, cfg.mu, cfg.lindley_length, lrng);
  sum.lindley = batch_means_ci(chain, cfg.lindley_batch);
  sum.seconds_lindley = wall_seconds(t1);

  const double centering = centering_of(*rs.target);
  sum.rho_exact = centering / (centering + cfg.mu);
  const double cev = cfg.c / (cfg.alpha_prime - 1.0);
  sum.rho_approx = cev / (cev + cfg.mu);

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    const std::string base = cfg.output_dir + "/" + cfg.name;
    {
      std::ofstream csv(base + "_replicas.csv");
      csv << "replica,m0,first_idle,fn_evals\n";
      for (const auto& row : rows) {
        csv << row.id << "," << std::setprecision(17) << row.m0 << ",";
        if (row.first_idle >= 0) csv << row.first_idle;
        csv << "," << row.fn_evals << "\n";
      }
    }
    {
      std::ofstream csv(base + "_lindley.csv");
      csv << "batch,mean\n";
      for (std::size_t b = 0; b < sum.lindley.batches; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < cfg.lindley_batch; ++i) s += chain[b * cfg.lindley_batch + i];
        csv << b << "," << std::setprecision(17) << s / static_cast<double>(cfg.lindley_batch)
            << "\n";
      }
    }
    std::ofstream js(base + "_summary.json");
    js << sum.to_json() << "\n";
  }
  if (rows_out) *rows_out = std::move(rows);
  return sum;
}

std::string ExperimentSummary::to_json() const {
  std::ostringstream os;
  os << std::setprecision(12);
  os << "{\"name\":\"" << name << "\",\"params\":{\"mu\":" << params.mu << ",\"m\":" << params.m
     << ",\"L\":" << params.L << ",\"alpha\":" << params.alpha << ",\"gamma\":" << params.gamma
     << ",\"delta\":" << params.delta << "},"
     << "\"exact\":{\"mean\":" << exact_mean << ",\"lo\":" << exact_lo << ",\"hi\":" << exact_hi
     << ",\"replicas\":" << replicas << ",\"seconds\":" << seconds_exact
     << ",\"fn_evals\":" << total_fn_evals << "},"
     << "\"lindley\":{\"mean\":" << lindley.mean << ",\"lo\":" << lindley.lo
     << ",\"hi\":" << lindley.hi << ",\"length\":" << lindley.length
     << ",\"batch\":" << lindley.batch_size << ",\"seconds\":" << seconds_lindley << "},"
     << "\"rho\":{\"exact\":" << rho_exact << ",\"approx\":" << rho_approx << "},"
     << "\"cm0\":{\"verified\":" << (cm0.verified ? "true" : "false")
     << ",\"band_frequency\":" << cm0.band_frequency << "},"
     << "\"coupled\":" << (coupled ? "true" : "false") << ","
     << "\"feasibility\":" << feasibility.to_json() << "}";
  return os.str();
}

void emit_summary(const std::vector<ExperimentSummary>& results, std::ostream& table,
                  const std::string& json_path) {
  if (results.empty()) throw std::domain_error("emit_summary: no results");
  table << std::left << std::setw(22) << "scenario" << std::setw(26) << "exact mean [95% CI]"
        << std::setw(26) << "batch means [95% CI]" << std::setw(10) << "RT(s)" << "\n";
  for (const auto& r : results) {
    std::ostringstream e, b;
    e << std::setprecision(5) << r.exact_mean << " [" << r.exact_lo << ", " << r.exact_hi << "]";
    b << std::setprecision(5) << r.lindley.mean << " [" << r.lindley.lo << ", " << r.lindley.hi
      << "]";
    table << std::left << std::setw(22) << r.name << std::setw(26) << e.str() << std::setw(26)
          << b.str() << std::setw(10) << std::setprecision(3) << r.seconds_exact << "\n";
  }
  if (!json_path.empty()) {
    std::ofstream js(json_path);
    js << "[";
    for (std::size_t i = 0; i < results.size(); ++i)
      js << (i ? "," : "") << results[i].to_json();
    js << "]\n";
  }
}

}  // namespace qx
