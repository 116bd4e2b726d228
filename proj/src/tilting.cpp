#include "qx/tilting.hpp"

#include <cmath>

namespace qx {

const TiltedLaw& TiltCache::get(int k, Budget& budget, bool need_records) {
  auto [it, fresh] = cache_.try_emplace(k);
  TiltedLaw& t = it->second;
  if (fresh) {
    t.k = k;
    t.Ck = block_n(k - 1) * p_.mu + p_.m;
    t.cutoff = std::pow(t.Ck, 1.0 - p_.delta);
    t.theta = p_.gamma / t.cutoff;
    const double tail_c = d_->tail_prob(t.cutoff);
    t.log_trunc = std::log1p(-tail_c);
    budget.charge(static_cast<std::uint64_t>(t.cutoff / d_->lattice_span().value_or(1.0)) + 4);
    t.psi = std::log(d_->trunc_mgf(t.theta, t.cutoff)) - t.log_trunc;
    const double len = block_n(k) - 1.0;
    t.lambda_b = len * tail_c;
    t.log_pbc = tail_c > 0.0 ? std::log(-std::expm1(len * std::log1p(-tail_c)))
                             : -std::numeric_limits<double>::infinity();
  }
  if (need_records && !t.records_built) {
    Accumulator lam, slog;
    t.pmax_a = 0.0;
    const double hi = block_n(k) - 1.0;
    for (double j = block_n(k - 1); j <= hi; j += 1.0) {
      const double pj = d_->tail_prob(record_threshold(p_, j));
      if (t.pmax_a == 0.0) t.pmax_a = pj;
      lam.add(pj);
      slog.add(std::log1p(-pj));
      budget.charge();
    }
    t.lambda_a = lam.sum();
    t.log_pa = t.lambda_a > 0.0 ? std::log(-std::expm1(slog.sum()))
                                : -std::numeric_limits<double>::infinity();
    t.records_built = true;
  }
  return t;
}

double sample_pk1_increment(const TiltedLaw& t, const IncrementDistribution& d,
                            CounterRng& rng, Budget& budget, std::uint64_t* proposals) {
  for (;;) {
    if (proposals) ++*proposals;
    budget.charge(2);
    const double x = d.draw(rng);
    if (x > t.cutoff) continue;
    budget.charge();
    if (rng.unit() <= std::exp(t.theta * (x - t.cutoff))) return x;  // theta*cutoff == gamma
  }
}

double pk1_path_likelihood(double s_tm, std::uint64_t t_m, const TiltedLaw& t) {
  return std::exp(-t.theta * s_tm + static_cast<double>(t_m) * t.psi);
}

BlockPass scan_record_proposal(const TiltedLaw& t, const AlgorithmParams& p,
                               const IncrementDistribution& d, RecordSet set,
                               double m_eff, CounterRng& sub, Budget& budget,
                               std::vector<double>* sink, std::uint64_t stop_at) {
  BlockPass out;
  const double u_accept = sub.unit();
  const bool forced = sub.unit() < 0.5;
  std::uint64_t len = static_cast<std::uint64_t>(block_n(t.k)) - 1;
  const std::uint64_t full_len = len;
  if (stop_at != 0 && stop_at < len) len = stop_at;
  const std::uint64_t a_lo = static_cast<std::uint64_t>(block_n(t.k - 1));

  std::uint64_t forced_j = 0;
  double forced_x = 0.0;
  if (forced) {
    if (set == RecordSet::Uniform) {
      forced_j = 1 + sub.below(full_len);
      forced_x = d.draw_above(t.cutoff, sub);
    } else {
      for (;;) {
        budget.charge(2);
        const std::uint64_t j = a_lo + sub.below(full_len - a_lo + 1);
        if (sub.unit() * t.pmax_a <= d.tail_prob(record_threshold(p, static_cast<double>(j)))) {
          forced_j = j;
          break;
        }
      }
      forced_x = d.draw_above(record_threshold(p, static_cast<double>(forced_j)), sub);
    }
    budget.charge();
  }

  double s_raw = 0.0, pos = 0.0;
  for (std::uint64_t j = 1; j <= len; ++j) {
    budget.charge(2);
    const double x = (forced && j == forced_j) ? forced_x : d.draw(sub);
    if (sink) sink->push_back(x);
    s_raw += x;
    pos += x - p.mu;
    if (out.t_m == 0 && pos > m_eff) {
      out.t_m = j;
      out.s_tm = s_raw;
    }
    if (x > t.cutoff) {
      out.b_k = false;
      if (set == RecordSet::Uniform) ++out.records;
    }
    if (j >= a_lo && x > record_threshold(p, static_cast<double>(j))) {
      out.a_k = true;
      if (set == RecordSet::PerIndex) ++out.records;
    }
  }
  const double lambda = set == RecordSet::PerIndex ? t.lambda_a : t.lambda_b;
  out.q_accept =
      out.records >= 1 ? (1.0 + lambda) / (static_cast<double>(out.records) + lambda) : 0.0;
  out.accepted = u_accept <= out.q_accept;
  return out;
}

namespace {

std::vector<double> sample_record_path(int k, RecordSet set, const AlgorithmParams& p,
                                       const IncrementDistribution& d, CounterRng& rng,
                                       Budget& budget, std::uint64_t* proposals) {
  TiltCache cache(p, DistPtr(&d, [](const IncrementDistribution*) {}));
  const TiltedLaw& t = cache.get(k, budget, set == RecordSet::PerIndex);
  std::uint64_t count = 0;
  for (;;) {
    ++count;
    std::vector<double> buf;
    buf.reserve(static_cast<std::size_t>(block_n(k)) - 1);
    BlockPass pass = scan_record_proposal(t, p, d, set, p.m, rng, budget, &buf);
    if (pass.accepted) {
      if (proposals) *proposals = count;
      return buf;
    }
  }
}

}  // namespace

std::vector<double> sample_pk0_path(int k, const AlgorithmParams& p,
                                    const IncrementDistribution& d, CounterRng& rng,
                                    Budget& budget, std::uint64_t* proposals) {
  return sample_record_path(k, RecordSet::PerIndex, p, d, rng, budget, proposals);
}

std::vector<double> sample_pk2_path(int k, const AlgorithmParams& p,
                                    const IncrementDistribution& d, CounterRng& rng,
                                    Budget& budget, std::uint64_t* proposals) {
  return sample_record_path(k, RecordSet::Uniform, p, d, rng, budget, proposals);
}

}  // namespace qx
