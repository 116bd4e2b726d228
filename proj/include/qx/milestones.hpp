#pragma once

#include <cstdint>
#include <span>

#include "qx/increment.hpp"
#include "qx/params.hpp"

namespace qx {

// Dyadic block boundaries: n_k = 2^{k-1}; block k >= 2 covers the integer
// times [n_{k-1}, n_k - 1].
inline double block_n(int k) { return std::ldexp(1.0, k - 1); }

// Integrated Pareto tail  Gbar(t) = int_t^inf (1+s)^-alpha ds.
double gbar(double t, double alpha);

// Dominating block pmf g(k), k >= 2, built from Gbar at milestone height m.
double g_pmf(int k, const AlgorithmParams& p);
// P(K <= k), closed form.
double g_cdf(int k, const AlgorithmParams& p);
// Exact inverse-CDF draw of K.
int sample_K(const AlgorithmParams& p, CounterRng& rng);

// Record threshold (mu j + m)^{1-delta} for the big-jump events.
inline double record_threshold(const AlgorithmParams& p, double j) {
  return std::pow(p.mu * j + p.m, 1.0 - p.delta);
}

struct BlockEvents {
  bool in_Ak = false;  // some X_j > (mu j + m)^{1-d}, j in [n_{k-1}, n_k-1]
  bool in_Bk = false;  // all  X_j <= (mu n_{k-1} + m)^{1-d}, j in [1, n_k-1]
};

// Exact evaluation on a supplied increment prefix X_1..X_{n_k-1}.
BlockEvents event_indicators(std::span<const double> increments, int k,
                             const AlgorithmParams& p);

}  // namespace qx
