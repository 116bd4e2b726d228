#pragma once

#include "qx/sampler.hpp"

namespace qx {

// Pairing of a target increment law X with the dominating lattice law
// X' = h floor(X/h) - E(h floor(X/h)) and drift mu' = mu - E(h floor(X/h)) - h,
// so that X' - mu' >= X - mu pathwise.
struct LatticeCoupling {
  DistPtr target;
  DistPtr primed;
  double h = 0.0;
  double mu = 0.0;
  double mu_prime = 0.0;
  double mean_floor = 0.0;  // E(h floor(X/h)), <= 0
  bool identity = false;    // lattice target: refinement is the identity map

  // Draw X given its floor cell, from the primed atom value.
  double refine(double primed_value, CounterRng& rng) const;
};

LatticeCoupling build_coupling(DistPtr target, double h, double mu);

// log E[e^{theta X} | X <= cutoff] for lattice laws; rejects non-lattice input.
double psi_lattice_eval(const IncrementDistribution& d, double theta, double cutoff);

// Algorithm-4 strategy: run the exact sampler on the dominating walk,
// refine increments to the target law, extend until the dominating suffix
// maximum falls below min_{k<=n} S_k(mu), then read off the target maxima.
BackwardSample sample_backward_via_coupling(const LatticeCoupling& cp,
                                            const AlgorithmParams& params_primed,
                                            Replica& r, std::uint64_t n,
                                            std::uint64_t* stop_index = nullptr);

}  // namespace qx
