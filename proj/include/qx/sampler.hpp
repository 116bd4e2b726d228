#pragma once

#include <optional>

#include "qx/tilting.hpp"

namespace qx {

// Raised when an acceptance ratio that the lemmas promise to be <= 1 is
// not; it would falsify the parameter certificate, so the replica aborts.
struct RatioViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite walk segment: positions S_i(mu) relative to the segment start and
// the matching raw increments X_i.
struct WalkPath {
  std::vector<double> positions;
  std::vector<double> increments;

  double last() const { return positions.empty() ? 0.0 : positions.back(); }
  double max_or_zero() const;
  static WalkPath from_increments(std::vector<double> xs, double mu);
};

struct PatchOutcome {
  bool J = false;
  WalkPath omega;  // empty when J = 0
};

struct BackwardSample {
  std::vector<double> positions;            // S_k(mu), k = 0..n, positions[0] = 0
  std::vector<double> maxima;               // M_k, k = 0..n
  std::vector<double> increments;           // X_k, k = 1..n
  std::vector<std::uint64_t> milestones;    // recorded segment-end indices (the vector N)
  std::uint64_t recorded_length = 0;        // full length of the recorded path
};

// Per-replica state: the substream allocator, the cost meter and audit
// counters. A replica is fully determined by (seed, index).
struct Replica {
  Replica(std::uint64_t seed_, std::uint64_t index_, std::uint64_t budget_limit = 0)
      : main(seed_, index_, 0), seed(seed_), index(index_) {
    budget.limit = budget_limit;
  }
  CounterRng main;
  std::uint64_t seed, index;
  std::uint64_t next_substream = 1;
  Budget budget;
  std::uint64_t ratio_checks = 0;
  std::uint64_t identity_checks = 0;

  CounterRng substream(std::uint64_t id) const { return CounterRng(seed, index, id); }
};

// Statistics of one Algorithm-1 call (for the proposal-count audits).
struct BernoulliStats {
  int k = 0;
  int z = -1;
  std::uint64_t proposals = 0;
};

// Binds a feasible parameter tuple to a lattice increment law and runs the
// exact sampling algorithms. Not shareable across threads (it owns a
// per-instance tilt cache); construct one per worker.
class Sampler {
 public:
  Sampler(AlgorithmParams params, DistPtr dist, bool skip_validation = false);

  const AlgorithmParams& params() const { return p_; }
  const IncrementDistribution& dist() const { return *d_; }

  // Algorithm 1: J ~ Ber(P0(T_m < inf)); if J=1, omega is the path to T_m.
  PatchOutcome bernoulli_tm(Replica& r, BernoulliStats* stats = nullptr);

  // Algorithm 2: the path to Delta (last descent whose upward test failed).
  WalkPath m0_path(Replica& r);
  double sample_m0(Replica& r);  // max(0, max of the Algorithm-2 path)

  // Algorithm 3: (S_k(mu), M_k : 0 <= k <= n), exactly stationary.
  BackwardSample backward(Replica& r, std::uint64_t n);

  // Nominal descent to T_{-Lm} conditioned on never crossing the level
  // `sigma` above the start (the future included), by proposal + Bernoulli.
  WalkPath downward_patch(Replica& r, double sigma);

 private:
  friend class BackwardEngine;
  void check_ratio(double ratio, int k, int z, Replica& r) const;
  WalkPath descend(Replica& r) const;  // nominal segment to T_{-Lm}

  AlgorithmParams p_;
  DistPtr d_;
  TiltCache cache_;
};

// Incremental Algorithm-3 driver; exposed so the lattice bridge can extend
// the dominating walk past n until its own stopping rule fires.
class BackwardEngine {
 public:
  BackwardEngine(Sampler& s, Replica& r);

  // Append accepted segments until index `n` is certified.
  void extend_certified(std::uint64_t n);
  std::uint64_t certified() const { return milestones_[milestones_.size() - 2]; }

  const std::vector<double>& positions() const { return pos_; }
  const std::vector<double>& increments() const { return inc_; }
  const std::vector<std::uint64_t>& milestones() const { return milestones_; }

  // Suffix maxima over the recorded path (valid for indices <= certified()).
  std::vector<double> suffix_max() const;

  BackwardSample finalize(std::uint64_t n) const;

 private:
  void append_segment();

  Sampler& s_;
  Replica& r_;
  std::vector<double> pos_{0.0};
  std::vector<double> inc_;
  std::vector<std::uint64_t> milestones_{0};
  bool first_ = true;
};

// Smallest k <= n with M_k = 0 (exact zero), if any.
std::optional<std::uint64_t> first_idle_time(const BackwardSample& bs);

// Waiting-time reindexing W_j = M_{n-j} with matched forward increments so
// that W_j = (W_{j-1} + x_j - mu)+ holds step by step.
struct WaitingTimes {
  std::vector<double> w;  // j = 0..n
  std::vector<double> x;  // j = 1..n, x[j-1] pairs with the step j-1 -> j
};
WaitingTimes waiting_times(const BackwardSample& bs);

}  // namespace qx
