#pragma once

#include <span>

#include "qx/tilting.hpp"

namespace qx {

// Forward Lindley chain W_n = (W_{n-1} + X_n - mu)+ from W_0 = 0.
std::vector<double> lindley_chain(const IncrementDistribution& d, double mu,
                                  std::size_t length, CounterRng& rng);
// Same recursion over explicitly supplied steps X_n - mu.
std::vector<double> lindley_from_steps(std::span<const double> steps);

struct BatchMeansResult {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t batch_size = 0;
  std::size_t length = 0;
  std::size_t batches = 0;
};
// 95% batch-means interval over complete batches; needs at least 30 of them.
BatchMeansResult batch_means_ci(std::span<const double> chain, std::size_t batch_size);

// Crude bracketing of P0(T_m < inf): replicated walks truncated at
// `horizon` steps plus the analytic block-tail correction.
struct CrudeTmResult {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;        // includes the horizon correction
  double tail_bound = 0.0;
};
CrudeTmResult crude_tm_prob(const AlgorithmParams& p, const IncrementDistribution& d,
                            std::uint64_t horizon, std::uint64_t reps, std::uint64_t seed);

// Numeric audit of the three ratio lemmas, using the analytic union bounds
// the proofs use and the exact psi_k.
struct RatioAuditRow {
  int k = 0;
  double lemma1 = 0.0;  // 3 n_k P(X > (mu n_{k-1}+m)^{1-d}) / g(k)
  double lemma2 = 0.0;  // 3 exp(-gamma C_k^d + n_k psi_k) / g(k)
  double lemma3 = 0.0;  // 3 n_k P(X > C_k^{1-d}) / g(k)
};
struct RatioAudit {
  bool pass = false;
  std::vector<RatioAuditRow> rows;
  std::string to_json() const;
};
RatioAudit ratio_bound_audit(const AlgorithmParams& p, const IncrementDistribution& d,
                             int k_max);

// Two-sample Kolmogorov-Smirnov statistic with the asymptotic p-value.
struct KsResult {
  double d = 0.0;
  double p = 0.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace qx
