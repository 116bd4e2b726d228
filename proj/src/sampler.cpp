#include "qx/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qx {

double WalkPath::max_or_zero() const {
  double m = 0.0;
  for (double v : positions) m = std::max(m, v);
  return m;
}

WalkPath WalkPath::from_increments(std::vector<double> xs, double mu) {
  WalkPath w;
  w.positions.reserve(xs.size());
  double pos = 0.0;
  for (double x : xs) {
    pos += x - mu;
    w.positions.push_back(pos);
  }
  w.increments = std::move(xs);
  return w;
}

Sampler::Sampler(AlgorithmParams params, DistPtr dist, bool skip_validation)
    : p_(params), d_(std::move(dist)), cache_(params, d_) {
  if (!skip_validation) p_.validate_structural();
  if (!d_->lattice_span())
    throw NonLatticeError("Sampler: non-lattice increment law; use the lattice bridge");
}

void Sampler::check_ratio(double ratio, int k, int z, Replica& r) const {
  ++r.ratio_checks;
  if (!(ratio <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "acceptance ratio " << ratio << " > 1 at block k=" << k << " branch Z=" << z
       << " (m=" << p_.m << "); the parameter certificate is violated";
    throw RatioViolation(os.str());
  }
}

PatchOutcome Sampler::bernoulli_tm(Replica& r, BernoulliStats* stats) {
  const int k = sample_K(p_, r.main);
  r.budget.charge(3);
  if (k >= 62) throw WatchdogError("bernoulli_tm: block size beyond 2^61");
  const int z = static_cast<int>(r.main.below(3));
  const double v = r.main.unit();
  const double g = g_pmf(k, p_);
  const double n_lo = block_n(k - 1);
  if (stats) {
    stats->k = k;
    stats->z = z;
    stats->proposals = 0;
  }

  if (z == 0) {
    const TiltedLaw& t = cache_.get(k, r.budget, true);
    if (!(t.lambda_a > 0.0)) return {};  // P(A_k) = 0: the branch never accepts
    for (;;) {
      if (stats) ++stats->proposals;
      const std::uint64_t sub_id = r.next_substream++;
      CounterRng sub = r.substream(sub_id);
      BlockPass pass =
          scan_record_proposal(t, p_, *d_, RecordSet::PerIndex, p_.m, sub, r.budget, nullptr);
      if (!pass.accepted) continue;
      const double ratio = 3.0 * std::exp(t.log_pa) / g;
      check_ratio(ratio, k, 0, r);
      const bool in_block = pass.t_m != 0 && static_cast<double>(pass.t_m) >= n_lo;
      if (!(in_block && v <= ratio)) return {};
      CounterRng re = r.substream(sub_id);
      std::vector<double> xs;
      xs.reserve(pass.t_m);
      scan_record_proposal(t, p_, *d_, RecordSet::PerIndex, p_.m, re, r.budget, &xs, pass.t_m);
      return {true, WalkPath::from_increments(std::move(xs), p_.mu)};
    }
  }

  if (z == 1) {
    const TiltedLaw& t = cache_.get(k, r.budget, false);
    const std::uint64_t len = static_cast<std::uint64_t>(block_n(k)) - 1;
    const std::uint64_t sub_id = r.next_substream++;
    CounterRng sub = r.substream(sub_id);
    double s_raw = 0.0, pos = 0.0;
    std::uint64_t t_m = 0, props = 0;
    for (std::uint64_t j = 1; j <= len; ++j) {
      const double x = sample_pk1_increment(t, *d_, sub, r.budget, &props);
      s_raw += x;
      pos += x - p_.mu;
      if (pos > p_.m) {
        t_m = j;
        break;
      }
    }
    if (stats) stats->proposals = props;
    if (t_m == 0 || static_cast<double>(t_m) < n_lo) return {};
    const double lik = pk1_path_likelihood(s_raw, t_m, t);
    check_ratio(3.0 * lik / g, k, 1, r);
    // truncation-survival factor: the unsimulated tail of the block must
    // also satisfy the B_k cap for the target event
    const double ratio = 3.0 * lik * std::exp(static_cast<double>(len) * t.log_trunc) / g;
    if (!(v <= ratio)) return {};
    CounterRng re = r.substream(sub_id);
    std::vector<double> xs;
    xs.reserve(t_m);
    for (std::uint64_t j = 1; j <= t_m; ++j)
      xs.push_back(sample_pk1_increment(t, *d_, re, r.budget));
    return {true, WalkPath::from_increments(std::move(xs), p_.mu)};
  }

  const TiltedLaw& t = cache_.get(k, r.budget, false);
  if (!(t.lambda_b > 0.0)) return {};  // P(B_k^c) = 0
  for (;;) {
    if (stats) ++stats->proposals;
    const std::uint64_t sub_id = r.next_substream++;
    CounterRng sub = r.substream(sub_id);
    BlockPass pass =
        scan_record_proposal(t, p_, *d_, RecordSet::Uniform, p_.m, sub, r.budget, nullptr);
    if (!pass.accepted) continue;
    const double ratio = 3.0 * std::exp(t.log_pbc) / g;
    check_ratio(ratio, k, 2, r);
    const bool in_block = pass.t_m != 0 && static_cast<double>(pass.t_m) >= n_lo;
    if (!(in_block && !pass.a_k && v <= ratio)) return {};
    CounterRng re = r.substream(sub_id);
    std::vector<double> xs;
    xs.reserve(pass.t_m);
    scan_record_proposal(t, p_, *d_, RecordSet::Uniform, p_.m, re, r.budget, &xs, pass.t_m);
    return {true, WalkPath::from_increments(std::move(xs), p_.mu)};
  }
}

WalkPath Sampler::descend(Replica& r) const {
  WalkPath w;
  const double floor_level = -p_.L * p_.m;
  double pos = 0.0;
  do {
    r.budget.charge(2);
    const double x = d_->draw(r.main);
    pos += x - p_.mu;
    w.increments.push_back(x);
    w.positions.push_back(pos);
  } while (pos >= floor_level);
  return w;
}

WalkPath Sampler::m0_path(Replica& r) {
  WalkPath out;
  for (;;) {
    const double base = out.last();
    WalkPath seg = descend(r);
    for (std::size_t i = 0; i < seg.positions.size(); ++i) {
      out.increments.push_back(seg.increments[i]);
      out.positions.push_back(base + seg.positions[i]);
    }
    PatchOutcome up = bernoulli_tm(r);
    if (!up.J) return out;
    const double level = out.last();
    for (std::size_t i = 0; i < up.omega.positions.size(); ++i) {
      out.increments.push_back(up.omega.increments[i]);
      out.positions.push_back(level + up.omega.positions[i]);
    }
  }
}

double Sampler::sample_m0(Replica& r) { return m0_path(r).max_or_zero(); }

WalkPath Sampler::downward_patch(Replica& r, double sigma) {
  if (!(sigma >= (p_.L + 1.0) * p_.m - 1e-9))
    throw std::domain_error("downward_patch: sigma below (L+1)m");
  for (;;) {
    WalkPath seg = descend(r);
    bool below_barrier = true;
    for (double v : seg.positions)
      if (v >= sigma) {
        below_barrier = false;
        break;
      }
    if (!below_barrier) continue;
    AlgorithmParams p2 = p_;
    p2.m = sigma - seg.positions.back();
    Sampler conditioned(p2, d_, /*skip_validation=*/true);
    if (!conditioned.bernoulli_tm(r).J) return seg;
  }
}

BackwardEngine::BackwardEngine(Sampler& s, Replica& r) : s_(s), r_(r) {
  append_segment();  // the first segment is appended unconditionally
}

void BackwardEngine::append_segment() {
  for (;;) {
    WalkPath w = s_.m0_path(r_);
    if (!first_ && w.max_or_zero() > s_.params().m) continue;  // resample fresh
    first_ = false;
    const double base = pos_.back();
    for (std::size_t i = 0; i < w.positions.size(); ++i) {
      inc_.push_back(w.increments[i]);
      pos_.push_back(base + w.positions[i]);
    }
    milestones_.push_back(pos_.size() - 1);
    return;
  }
}

void BackwardEngine::extend_certified(std::uint64_t n) {
  while (certified() < n) append_segment();
}

std::vector<double> BackwardEngine::suffix_max() const {
  std::vector<double> sm(pos_.size());
  double run = -std::numeric_limits<double>::infinity();
  for (std::size_t i = pos_.size(); i-- > 0;) {
    run = std::max(run, pos_[i]);
    sm[i] = run;
  }
  return sm;
}

BackwardSample BackwardEngine::finalize(std::uint64_t n) const {
  BackwardSample bs;
  bs.recorded_length = pos_.size() - 1;
  bs.milestones = milestones_;
  const std::vector<double> sm = suffix_max();
  bs.positions.assign(pos_.begin(), pos_.begin() + static_cast<std::ptrdiff_t>(n + 1));
  bs.increments.assign(inc_.begin(), inc_.begin() + static_cast<std::ptrdiff_t>(n));
  bs.maxima.resize(n + 1);
  for (std::uint64_t i = 0; i <= n; ++i) bs.maxima[i] = sm[i] - pos_[i];

  // Deterministic identities; a failure here means a corrupted path.
  for (std::uint64_t i = 0; i <= n; ++i) {
    ++r_.identity_checks;
    if (!(bs.maxima[i] >= 0.0)) throw RatioViolation("finalize: negative M_k");
    if (i < n) {
      // suffix-max form of the backward Lindley recursion holds exactly
      if (bs.maxima[i] != std::max(0.0, sm[i + 1] - pos_[i]))
        throw RatioViolation("finalize: backward Lindley mismatch");
      const double lindley = std::max(0.0, bs.maxima[i + 1] + bs.increments[i] - s_.params().mu);
      if (std::abs(bs.maxima[i] - lindley) > 1e-9 * (1.0 + std::abs(pos_[i])))
        throw RatioViolation("finalize: increment-form Lindley mismatch");
    }
  }
  // Milestones: appended segments stay within m of their start and dip
  // at least Lm below it.
  for (std::size_t s = 2; s < milestones_.size(); ++s) {
    const std::uint64_t a = milestones_[s - 1], b = milestones_[s];
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = a + 1; i <= b; ++i) {
      mx = std::max(mx, pos_[i]);
      mn = std::min(mn, pos_[i]);
    }
    ++r_.identity_checks;
    if (mx - pos_[a] > s_.params().m)
      throw RatioViolation("finalize: segment exceeds milestone cap");
    if (!(mn - pos_[a] < -s_.params().L * s_.params().m))
      throw RatioViolation("finalize: segment missing Lm descent");
  }
  return bs;
}

BackwardSample Sampler::backward(Replica& r, std::uint64_t n) {
  BackwardEngine engine(*this, r);
  engine.extend_certified(n);
  return engine.finalize(n);
}

std::optional<std::uint64_t> first_idle_time(const BackwardSample& bs) {
  for (std::uint64_t k = 0; k < bs.maxima.size(); ++k)
    if (bs.maxima[k] == 0.0) return k;
  return std::nullopt;
}

WaitingTimes waiting_times(const BackwardSample& bs) {
  const std::size_t n = bs.maxima.size() - 1;
  WaitingTimes wt;
  wt.w.resize(n + 1);
  wt.x.resize(n);
  for (std::size_t j = 0; j <= n; ++j) wt.w[j] = bs.maxima[n - j];
  for (std::size_t j = 1; j <= n; ++j) wt.x[j - 1] = bs.increments[n - j];
  return wt;
}

}  // namespace qx
