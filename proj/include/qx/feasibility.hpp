#pragma once

#include "qx/increment.hpp"
#include "qx/params.hpp"

namespace qx {

// Left-hand sides of the two supremum inequalities at one grid point z.
double ci1_lhs(const AlgorithmParams& p, const IncrementDistribution& d, double z);
double ci2_lhs(const AlgorithmParams& p, const IncrementDistribution& d, double z);

// Grid supremum over z = mu * 2^k, k = 0..k_audit, plus a closed-form
// envelope covering every z beyond the grid. Each returns the constraint
// rows it contributes to the report.
std::vector<ConstraintResult> check_ci1(const AlgorithmParams& p,
                                        const IncrementDistribution& d, int k_audit);
std::vector<ConstraintResult> check_ci2(const AlgorithmParams& p,
                                        const IncrementDistribution& d, int k_audit);
// Beta12 replacement for CI2: the closed-form log-MGF route.
std::vector<ConstraintResult> check_ci2_beta12(const AlgorithmParams& p,
                                               const IncrementDistribution& d);

// Full feasibility verdict (structural ranges, moment condition on m,
// CI1/CI2 with envelopes, informational global envelopes).
FeasibilityReport check_feasibility(const AlgorithmParams& p, const IncrementDistribution& d,
                                    int k_audit = 60);

// Smallest feasible m for fixed (mu, alpha, gamma, delta, L), found by
// bisection; feasibility is monotone in m across this family.
double minimize_m(const IncrementDistribution& d, AlgorithmParams base,
                  double m_cap = 1e9, double rel_tol = 1e-3, int k_audit = 60);

// Optional coarse sweep over (delta, gamma) candidates, returning the
// params with the smallest feasible m.
AlgorithmParams solve_params(const IncrementDistribution& d, AlgorithmParams base,
                             const std::vector<double>& deltas,
                             const std::vector<double>& gammas, double m_cap = 1e9);

// Pilot check of P(m < M0 <= (L+1)m) > 0 via a long Lindley run. Not a
// gate: returns "verified" if the band was ever hit, else "assumed".
struct CmZeroResult {
  bool verified = false;
  double band_frequency = 0.0;
  std::uint64_t steps = 0;
};
CmZeroResult check_cm0(const AlgorithmParams& p, const IncrementDistribution& d,
                       std::uint64_t steps, std::uint64_t seed);

// Constants of the log-MGF lemma: exp(psi_k) <= exp(A / C_k^pow).
double lemma5_constant_finite_variance(double gamma, double second_moment);   // (IN2FV)
double lemma5_constant_beta12(double gamma, double eps, double abs_moment);   // (IN1NV)

}  // namespace qx
