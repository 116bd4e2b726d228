#pragma once

#include <map>
#include <vector>

#include "qx/budget.hpp"
#include "qx/increment.hpp"
#include "qx/milestones.hpp"
#include "qx/params.hpp"

namespace qx {

// Per-block constants used by the three conditional proposal laws.
// theta_k = gamma / C_k^{1-delta} with C_k = n_{k-1} mu + m (power form).
struct TiltedLaw {
  int k = 0;
  double Ck = 0.0;
  double cutoff = 0.0;      // C_k^{1-delta}
  double theta = 0.0;
  double psi = 0.0;         // log E[e^{theta X} | X <= cutoff]
  double log_trunc = 0.0;   // log P(X <= cutoff)
  double lambda_b = 0.0;    // (n_k-1) P(X > cutoff)
  double log_pbc = 0.0;     // log P(B_k^c)
  // record-range constants (built on demand; O(n_k))
  bool records_built = false;
  double lambda_a = 0.0;    // sum of P(X > (mu j+m)^{1-d}) over the A_k range
  double log_pa = 0.0;      // log P(A_k)
  double pmax_a = 0.0;      // largest per-index record probability
};

class TiltCache {
 public:
  TiltCache(AlgorithmParams p, DistPtr d) : p_(p), d_(std::move(d)) {}
  const TiltedLaw& get(int k, Budget& budget, bool need_records);
  const AlgorithmParams& params() const { return p_; }
  const IncrementDistribution& dist() const { return *d_; }

 private:
  AlgorithmParams p_;
  DistPtr d_;
  std::map<int, TiltedLaw> cache_;
};

// One increment from P_{k,1}: propose nominal, accept w.p.
// exp(theta X - gamma) 1{X <= cutoff}.
double sample_pk1_increment(const TiltedLaw& t, const IncrementDistribution& d,
                            CounterRng& rng, Budget& budget,
                            std::uint64_t* proposals = nullptr);

// Stopped-path likelihood of the printed Z=1 acceptance:
// exp(-theta S_{T_m} + T_m psi).
double pk1_path_likelihood(double s_tm, std::uint64_t t_m, const TiltedLaw& t);

enum class RecordSet { PerIndex, Uniform };  // A_k vs B_k^c record events

// Summary of one full-block scan under the mixture proposal
// Q = .5 nominal + .5 forced-record.
struct BlockPass {
  std::uint64_t records = 0;     // record indicators over the event range
  std::uint64_t t_m = 0;         // first j with S_j - mu j > m_eff (0 = none)
  double s_tm = 0.0;             // raw sum S_{T_m}
  bool a_k = false;
  bool b_k = true;
  double q_accept = 0.0;         // acceptance probability of this proposal
  bool accepted = false;
};

// Generate one proposal from Q in a dedicated substream and report the
// scan. When `sink` is given, increments are appended to it; a nonzero
// `stop_at` truncates the scan after that many increments (replay of an
// accepted prefix consumes the identical draws).
BlockPass scan_record_proposal(const TiltedLaw& t, const AlgorithmParams& p,
                               const IncrementDistribution& d, RecordSet set,
                               double m_eff, CounterRng& sub, Budget& budget,
                               std::vector<double>* sink, std::uint64_t stop_at = 0);

// Materializing samplers for P_{k,0} / P_{k,2} (accept-reject around the
// mixture proposal). Return the accepted block increments; `proposals`
// counts proposals until acceptance.
std::vector<double> sample_pk0_path(int k, const AlgorithmParams& p,
                                    const IncrementDistribution& d, CounterRng& rng,
                                    Budget& budget, std::uint64_t* proposals = nullptr);
std::vector<double> sample_pk2_path(int k, const AlgorithmParams& p,
                                    const IncrementDistribution& d, CounterRng& rng,
                                    Budget& budget, std::uint64_t* proposals = nullptr);

}  // namespace qx
