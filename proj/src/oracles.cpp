#include "qx/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qx {

std::vector<double> lindley_chain(const IncrementDistribution& d, double mu,
                                  std::size_t length, CounterRng& rng) {
  std::vector<double> w(length);
  double cur = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    cur = std::max(0.0, cur + d.draw(rng) - mu);
    w[i] = cur;
  }
  return w;
}

std::vector<double> lindley_from_steps(std::span<const double> steps) {
  std::vector<double> w(steps.size());
  double cur = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    cur = std::max(0.0, cur + steps[i]);
    w[i] = cur;
  }
  return w;
}

BatchMeansResult batch_means_ci(std::span<const double> chain, std::size_t batch_size) {
  if (batch_size == 0) throw std::domain_error("batch_means_ci: batch size zero");
  const std::size_t nb = chain.size() / batch_size;
  if (nb < 30) throw std::domain_error("batch_means_ci: need at least 30 complete batches");
  std::vector<double> means(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < batch_size; ++i) s += chain[b * batch_size + i];
    means[b] = s / static_cast<double>(batch_size);
  }
  double m = 0.0;
  for (double v : means) m += v;
  m /= static_cast<double>(nb);
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / static_cast<double>(nb - 1) / static_cast<double>(nb));
  return {m, m - 1.96 * se, m + 1.96 * se, batch_size, chain.size(), nb};
}

CrudeTmResult crude_tm_prob(const AlgorithmParams& p, const IncrementDistribution& d,
                            std::uint64_t horizon, std::uint64_t reps, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t rep = 0; rep < reps; ++rep) {
    CounterRng rng(seed, rep, 0x7C);
    double pos = 0.0;
    for (std::uint64_t n = 0; n < horizon; ++n) {
      pos += d.draw(rng) - p.mu;
      if (pos > p.m) {
        ++hits;
        break;
      }
    }
  }
  // blocks wholly beyond the horizon: P(T_m in block k) <= g(k)
  int k0 = 2;
  while (block_n(k0 - 1) <= static_cast<double>(horizon) && k0 < 1000) ++k0;
  const double tail = gbar(p.m + p.mu * block_n(k0 - 1), p.alpha) / gbar(p.m + p.mu, p.alpha);
  const double phat = static_cast<double>(hits) / static_cast<double>(reps);
  const double se = std::sqrt(std::max(phat * (1.0 - phat), 1.0 / static_cast<double>(reps)) /
                              static_cast<double>(reps));
  return {phat, std::max(0.0, phat - 1.96 * se), std::min(1.0, phat + 1.96 * se + tail), tail};
}

RatioAudit ratio_bound_audit(const AlgorithmParams& p, const IncrementDistribution& d,
                             int k_max) {
  RatioAudit audit;
  Budget budget;
  TiltCache cache(p, DistPtr(&d, [](const IncrementDistribution*) {}));
  audit.pass = true;
  for (int k = 2; k <= k_max; ++k) {
    const TiltedLaw& t = cache.get(k, budget, false);
    RatioAuditRow row;
    row.k = k;
    const double g = g_pmf(k, p);
    const double nk = block_n(k);
    row.lemma1 = 3.0 * nk * d.tail_prob(record_threshold(p, block_n(k - 1))) / g;
    row.lemma2 = 3.0 * std::exp(-p.gamma * std::pow(t.Ck, p.delta) + nk * t.psi) / g;
    row.lemma3 = 3.0 * nk * d.tail_prob(t.cutoff) / g;
    if (row.lemma1 > 1.0 + 1e-9 || row.lemma2 > 1.0 + 1e-9 || row.lemma3 > 1.0 + 1e-9)
      audit.pass = false;
    audit.rows.push_back(row);
  }
  return audit;
}

std::string RatioAudit::to_json() const {
  std::ostringstream os;
  os << "{\"pass\":" << (pass ? "true" : "false") << ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? "," : "") << "{\"k\":" << r.k << ",\"lemma1\":" << r.lemma1
       << ",\"lemma2\":" << r.lemma2 << ",\"lemma3\":" << r.lemma3 << "}";
  }
  os << "]}";
  return os.str();
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::domain_error("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  const double lambda = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int t = 1; t <= 100; ++t) {
    const double term = sign * 2.0 * std::exp(-2.0 * lambda * lambda * t * t);
    p += term;
    sign = -sign;
    if (std::abs(term) < 1e-12) break;
  }
  return {d, std::clamp(p, 0.0, 1.0)};
}

}  // namespace qx
