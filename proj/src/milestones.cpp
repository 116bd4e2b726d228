#include "qx/milestones.hpp"

#include <cmath>
#include <stdexcept>

namespace qx {

double gbar(double t, double alpha) {
  if (!(alpha > 1.0)) throw std::domain_error("gbar: alpha must exceed 1");
  return std::pow(1.0 + t, 1.0 - alpha) / (alpha - 1.0);
}

double g_pmf(int k, const AlgorithmParams& p) {
  if (k < 2) throw std::domain_error("g_pmf: k >= 2");
  const double g1 = gbar(p.m + p.mu * block_n(1), p.alpha);
  return (gbar(p.m + p.mu * block_n(k - 1), p.alpha) - gbar(p.m + p.mu * block_n(k), p.alpha)) /
         g1;
}

double g_cdf(int k, const AlgorithmParams& p) {
  if (k < 2) return 0.0;
  return 1.0 - gbar(p.m + p.mu * block_n(k), p.alpha) / gbar(p.m + p.mu * block_n(1), p.alpha);
}

int sample_K(const AlgorithmParams& p, CounterRng& rng) {
  const double u = rng.unit();
  // invert 1 - ((1+m+mu n_k)/(1+m+mu))^{1-alpha} >= u in closed form, then
  // settle ties against the exact cdf
  const double base = 1.0 + p.m + p.mu;
  const double target = base * std::pow(1.0 - u, -1.0 / (p.alpha - 1.0)) - 1.0 - p.m;
  int k = 2;
  if (target > p.mu) {
    k = 2 + static_cast<int>(std::ceil(std::log2(target / p.mu))) - 1;
    if (k < 2) k = 2;
  }
  while (k > 2 && g_cdf(k - 1, p) >= u) --k;
  while (g_cdf(k, p) < u) {
    ++k;
    if (k > 4000) throw std::runtime_error("sample_K: block index overflow");
  }
  return k;
}

BlockEvents event_indicators(std::span<const double> x, int k, const AlgorithmParams& p) {
  const double nk = block_n(k);
  if (static_cast<double>(x.size()) != nk - 1.0)
    throw std::invalid_argument("event_indicators: need exactly n_k - 1 increments");
  BlockEvents e;
  e.in_Bk = true;
  const double uniform_thr = record_threshold(p, block_n(k - 1));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double j = static_cast<double>(i + 1);
    if (x[i] > uniform_thr) e.in_Bk = false;
    if (j >= block_n(k - 1) && x[i] > record_threshold(p, j)) e.in_Ak = true;
  }
  return e;
}

}  // namespace qx
