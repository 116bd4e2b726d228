#include "qx/increment.hpp"

#include <algorithm>
#include <cmath>

namespace qx {

namespace {

// E (X+)^p = p * int_0^inf t^{p-1} P(X>t) dt for a tail sandwiched between
// two closed-form envelopes; returns a certified bracket midpoint.
Certified moment_by_tail_quadrature(double p, const std::function<double(double)>& tail_lo,
                                    const std::function<double(double)>& tail_hi,
                                    const PolyTailBound& env) {
  if (env.amp > 0.0 && p >= env.index)
    throw std::domain_error("moment of order p is not finite");
  double T = std::max(1.0, 2.0 * env.t0);
  if (env.amp > 0.0) {
    // grow T until the closed-form remainder past T is negligible
    auto rem = [&](double t) { return p * env.amp * std::pow(t, p - env.index) / (env.index - p); };
    while (rem(T) > 1e-9 && T < 1e300) T *= 4.0;
  }
  auto f_lo = [&](double t) { return p * std::pow(t, p - 1.0) * tail_lo(t); };
  auto f_hi = [&](double t) { return p * std::pow(t, p - 1.0) * tail_hi(t); };
  // t^{p-1} is singular at 0 for p<1; start slightly above and bound the head.
  const double eps = 1e-9;
  Certified lo, hi;
  for (double a = eps; a < T; a *= 10.0) {  // geometric panels keep the adaptive depth sane
    double b = std::min(a * 10.0, T);
    Certified cl = integrate(f_lo, a, b, 1e-10);
    Certified ch = integrate(f_hi, a, b, 1e-10);
    lo.value += cl.value; lo.error += cl.error;
    hi.value += ch.value; hi.error += ch.error;
  }
  double head_hi = std::pow(eps, p);  // tail <= 1 on [0, eps]
  double rem_hi = env.amp > 0.0 ? p * env.amp * std::pow(T, p - env.index) / (env.index - p) : 0.0;
  double vlo = lo.lo();
  double vhi = hi.hi() + head_hi + rem_hi;
  return {0.5 * (vlo + vhi), 0.5 * (vhi - vlo)};
}

}  // namespace

Certified lattice_pareto_mean_floor(double alpha_prime, double c, double h) {
  if (!(alpha_prime > 1.0)) throw std::domain_error("mean_floor: alpha' <= 1 has infinite mean");
  const double r = c / h;
  Certified z = hurwitz_zeta(alpha_prime, r + 1.0);
  const double scale = h * std::pow(r, alpha_prime);
  return {scale * z.value, scale * z.error + 1e-13 * scale * z.value};
}

// ---------------------------------------------------------------- LatticePareto

LatticePareto::LatticePareto(double alpha_prime, double c, double h)
    : ap_(alpha_prime), c_(c), h_(h), r_(c / h) {
  if (!(alpha_prime > 1.0) || !(c > 0.0) || !(h > 0.0))
    throw std::domain_error("LatticePareto: need alpha'>1, c>0, h>0");
  Certified m0 = lattice_pareto_mean_floor(alpha_prime, c, h);
  centering_ = m0.value;
  centering_err_ = m0.error;
}

double LatticePareto::draw(CounterRng& rng) const {
  const double v = std::pow(rng.unit(), -1.0 / ap_) - 1.0;
  return atom_value(std::floor(r_ * v));
}

double LatticePareto::tail_prob(double t) const { return index_tail(first_index_above(t)); }

double LatticePareto::draw_above(double t, CounterRng& rng) const {
  const double j0 = first_index_above(t);
  const double v0 = j0 / r_;
  const double v = (1.0 + v0) * std::pow(rng.unit(), -1.0 / ap_) - 1.0;
  double j = std::floor(r_ * v);
  if (j < j0) j = j0;
  return atom_value(j);
}

double LatticePareto::draw_at_most(double t, CounterRng& rng) const {
  const double j0 = first_index_above(t);
  if (j0 <= 0.0) throw std::domain_error("draw_at_most: empty region");
  const double mass = 1.0 - index_tail(j0);  // P(idx <= j0-1)
  const double u = rng.unit() * mass;
  double j = std::floor(r_ * (std::pow(1.0 - u, -1.0 / ap_) - 1.0));
  j = std::clamp(j, 0.0, j0 - 1.0);
  return atom_value(j);
}

double LatticePareto::draw_in(double lo, double hi, CounterRng& rng) const {
  // atoms with lo <= value < hi
  double jlo = std::ceil((lo + centering_) / h_);
  if (jlo < 0.0) jlo = 0.0;
  const double jhi = std::ceil((hi + centering_) / h_) - 1.0;
  if (jhi < jlo) throw std::domain_error("draw_in: empty cell");
  const double top = index_tail(jlo), bot = index_tail(jhi + 1.0);
  if (top <= bot) throw std::domain_error("draw_in: zero-probability cell");
  const double target = top - rng.unit() * (top - bot);
  double j = std::floor(r_ * (std::pow(target, -1.0 / ap_) - 1.0));
  j = std::clamp(j, jlo, jhi);
  return atom_value(j);
}

double LatticePareto::second_moment() const {
  if (!(ap_ > 2.0)) throw std::domain_error("second_moment: infinite for alpha' <= 2");
  const double pw = std::pow(r_, ap_);
  const double s1 = pw * hurwitz_zeta(ap_, r_ + 1.0).value;
  const double sj = pw * (hurwitz_zeta(ap_ - 1.0, r_ + 1.0).value -
                          r_ * hurwitz_zeta(ap_, r_ + 1.0).value);
  const double e_idx2 = 2.0 * sj - s1;
  return h_ * h_ * e_idx2 - centering_ * centering_;
}

Certified LatticePareto::positive_moment(double p) const {
  auto lo = [&](double t) { return index_tail(std::floor((t + centering_) / h_) + 1.0); };
  auto hi = [&](double t) {
    double x = (t + centering_) / h_;
    return index_tail(x < 0.0 ? 0.0 : x);
  };
  return moment_by_tail_quadrature(p, lo, hi, tail_upper());
}

Certified LatticePareto::absolute_moment(double p) const {
  Certified pos = positive_moment(p);
  Accumulator neg;
  for (double j = 0.0; atom_value(j) < 0.0; j += 1.0)
    neg.add(std::pow(-atom_value(j), p) * atom_prob(j));
  return {pos.value + neg.sum(), pos.error + 1e-14 * neg.sum()};
}

double LatticePareto::trunc_mgf(double theta, double cutoff) const {
  const double jmax = std::floor((cutoff + centering_) / h_);
  if (jmax < 0.0) return 0.0;
  Accumulator acc;
  for (double j = 0.0; j <= jmax; j += 1.0)
    acc.add(std::exp(theta * atom_value(j)) * atom_prob(j));
  return acc.sum();
}

// -------------------------------------------------------------- ContinuousPareto

ContinuousPareto::ContinuousPareto(double alpha_prime, double c) : ap_(alpha_prime), c_(c) {
  if (!(alpha_prime > 1.0) || !(c > 0.0))
    throw std::domain_error("ContinuousPareto: need alpha'>1, c>0");
  m1_ = c / (alpha_prime - 1.0);
}

double ContinuousPareto::quantile(double u) const {
  return c_ * (std::pow(1.0 - u, -1.0 / ap_) - 1.0) - m1_;
}

double ContinuousPareto::draw(CounterRng& rng) const {
  return c_ * (std::pow(rng.unit(), -1.0 / ap_) - 1.0) - m1_;
}

double ContinuousPareto::tail_prob(double t) const {
  if (t <= -m1_) return 1.0;
  return std::pow(1.0 + (t + m1_) / c_, -ap_);
}

double ContinuousPareto::draw_above(double t, CounterRng& rng) const {
  const double v0 = std::max(0.0, (t + m1_) / c_);
  const double v = (1.0 + v0) * std::pow(rng.unit(), -1.0 / ap_) - 1.0;
  return std::max(c_ * v - m1_, t);
}

double ContinuousPareto::draw_at_most(double t, CounterRng& rng) const {
  const double mass = cdf(t);
  if (mass <= 0.0) throw std::domain_error("draw_at_most: empty region");
  return quantile(rng.unit() * mass);
}

double ContinuousPareto::draw_in(double lo, double hi, CounterRng& rng) const {
  const double flo = cdf(lo), fhi = cdf(hi);
  if (fhi <= flo) throw std::domain_error("draw_in: zero-probability cell");
  return quantile(flo + rng.unit() * (fhi - flo));
}

double ContinuousPareto::second_moment() const {
  if (!(ap_ > 2.0)) throw std::domain_error("second_moment: infinite for alpha' <= 2");
  const double var_v = 2.0 / ((ap_ - 1.0) * (ap_ - 2.0)) - 1.0 / ((ap_ - 1.0) * (ap_ - 1.0));
  return c_ * c_ * var_v;
}

Certified ContinuousPareto::positive_moment(double p) const {
  auto tl = [&](double t) { return tail_prob(t); };
  return moment_by_tail_quadrature(p, tl, tl, tail_upper());
}

Certified ContinuousPareto::absolute_moment(double p) const {
  Certified pos = positive_moment(p);
  // E (X-)^p = p * int_0^{m1} t^{p-1} P(X < -t) dt, closed-form integrand
  auto f = [&](double t) {
    return p * std::pow(t, p - 1.0) * (1.0 - std::pow(1.0 + (m1_ - t) / c_, -ap_));
  };
  Certified neg = integrate(f, 1e-9, m1_, 1e-11);
  return {pos.value + neg.value, pos.error + neg.error + std::pow(1e-9, p)};
}

// ---------------------------------------------------------------- DiscreteAtoms

DiscreteAtoms::DiscreteAtoms(std::vector<double> values, std::vector<double> probs,
                             std::optional<double> span)
    : span_(span) {
  if (values.size() != probs.size() || values.empty())
    throw std::domain_error("DiscreteAtoms: size mismatch");
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double mean = 0.0, total = 0.0;
  for (std::size_t i : order) {
    mean += values[i] * probs[i];
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::domain_error("DiscreteAtoms: probs must sum to 1");
  for (std::size_t i : order) {
    values_.push_back(values[i] - mean);
    probs_.push_back(probs[i]);
  }
  tails_.assign(values_.size() + 1, 0.0);
  for (std::size_t i = values_.size(); i-- > 0;) tails_[i] = tails_[i + 1] + probs_[i];
}

double DiscreteAtoms::draw(CounterRng& rng) const {
  double u = rng.unit(), acc = 0.0;
  for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
    acc += probs_[i];
    if (u <= acc) return values_[i];
  }
  return values_.back();
}

double DiscreteAtoms::tail_prob(double t) const {
  std::size_t i = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
  return tails_[i];
}

double DiscreteAtoms::draw_above(double t, CounterRng& rng) const {
  std::size_t i0 = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
  if (i0 == values_.size()) throw std::domain_error("draw_above: empty region");
  double u = rng.unit() * tails_[i0], acc = 0.0;
  for (std::size_t i = i0; i + 1 < values_.size(); ++i) {
    acc += probs_[i];
    if (u <= acc) return values_[i];
  }
  return values_.back();
}

double DiscreteAtoms::draw_at_most(double t, CounterRng& rng) const {
  std::size_t i1 = std::upper_bound(values_.begin(), values_.end(), t) - values_.begin();
  if (i1 == 0) throw std::domain_error("draw_at_most: empty region");
  double u = rng.unit() * (1.0 - tails_[i1]), acc = 0.0;
  for (std::size_t i = 0; i + 1 < i1; ++i) {
    acc += probs_[i];
    if (u <= acc) return values_[i];
  }
  return values_[i1 - 1];
}

double DiscreteAtoms::draw_in(double lo, double hi, CounterRng& rng) const {
  std::size_t a = std::lower_bound(values_.begin(), values_.end(), lo) - values_.begin();
  std::size_t b = std::lower_bound(values_.begin(), values_.end(), hi) - values_.begin();
  if (b <= a) throw std::domain_error("draw_in: empty cell");
  double mass = tails_[a] - tails_[b];
  if (mass <= 0.0) throw std::domain_error("draw_in: zero-probability cell");
  double u = rng.unit() * mass, acc = 0.0;
  for (std::size_t i = a; i + 1 < b; ++i) {
    acc += probs_[i];
    if (u <= acc) return values_[i];
  }
  return values_[b - 1];
}

double DiscreteAtoms::second_moment() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) s += values_[i] * values_[i] * probs_[i];
  return s;
}

Certified DiscreteAtoms::positive_moment(double p) const {
  Accumulator acc;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] > 0.0) acc.add(std::pow(values_[i], p) * probs_[i]);
  return {acc.sum(), 1e-14 * (1.0 + acc.sum())};
}

Certified DiscreteAtoms::absolute_moment(double p) const {
  Accumulator acc;
  for (std::size_t i = 0; i < values_.size(); ++i)
    acc.add(std::pow(std::abs(values_[i]), p) * probs_[i]);
  return {acc.sum(), 1e-14 * (1.0 + acc.sum())};
}

double DiscreteAtoms::trunc_mgf(double theta, double cutoff) const {
  Accumulator acc;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] <= cutoff) acc.add(std::exp(theta * values_[i]) * probs_[i]);
  return acc.sum();
}

// --------------------------------------------------------------- FlooredLattice

FlooredLattice::FlooredLattice(DistPtr base, double h) : base_(std::move(base)), h_(h) {
  if (!(h > 0.0)) throw std::domain_error("FlooredLattice: need h > 0");
  if (base_->lattice_span()) throw std::domain_error("FlooredLattice: base already lattice");
  // E floor(X/h) = sum_{i>=1} P(X >= ih) - sum_{i>=1} P(X < (1-i)h)
  Accumulator pos;
  double i = 1.0;
  PolyTailBound env = base_->tail_upper();
  double tail_bound;
  do {
    pos.add(base_->tail_prob(i * h_));
    i += 1.0;
    // remaining tail: sum_{j>=i} amp (jh)^-idx <= amp h^-idx zeta(idx, i)
    tail_bound = env.amp > 0.0 && i * h_ > env.t0
                     ? env.amp * std::pow(h_, -env.index) * hurwitz_zeta(env.index, i).value
                     : (i * h_ > env.t0 ? 0.0 : 1.0);
  } while (tail_bound > 1e-12 && i < 1e8);
  Accumulator negs;
  for (double j = 1.0; ; j += 1.0) {
    double q = 1.0 - base_->tail_prob((1.0 - j) * h_);  // P(X < (1-j)h) for continuous base
    if (q <= 0.0) break;
    negs.add(q);
  }
  mean_floor_ = h_ * (pos.sum() - negs.sum());
  mean_floor_err_ = h_ * (tail_bound + 1e-13);
  if (!(mean_floor_ < 0.0))
    throw std::domain_error("FlooredLattice: mean floor must be negative");
  i_min_ = 0.0;
  while (base_->tail_prob(i_min_ * h_) < 1.0) i_min_ -= 1.0;
}

double FlooredLattice::cell_tail(double i) const { return base_->tail_prob(i * h_); }

double FlooredLattice::draw(CounterRng& rng) const {
  return value(floor_index(base_->draw(rng)));
}

double FlooredLattice::tail_prob(double t) const {
  const double f0 = std::floor((t + mean_floor_) / h_) + 1.0;  // X' > t iff floor >= f0
  return cell_tail(f0);
}

double FlooredLattice::draw_above(double t, CounterRng& rng) const {
  const double f0 = std::floor((t + mean_floor_) / h_) + 1.0;
  double x = base_->draw_above(f0 * h_, rng);
  double i = floor_index(x);
  if (i < f0) i = f0;
  return value(i);
}

double FlooredLattice::draw_at_most(double t, CounterRng& rng) const {
  const double f0 = std::floor((t + mean_floor_) / h_) + 1.0;
  double x = base_->draw_at_most(f0 * h_, rng);  // X < f0 h up to a null set
  double i = floor_index(x);
  if (i >= f0) i = f0 - 1.0;
  return value(i);
}

double FlooredLattice::draw_in(double lo, double hi, CounterRng& rng) const {
  const double ilo = std::ceil((lo + mean_floor_) / h_);
  const double ihi = std::ceil((hi + mean_floor_) / h_) - 1.0;
  if (ihi < ilo) throw std::domain_error("draw_in: empty cell");
  double x = base_->draw_in(ilo * h_, (ihi + 1.0) * h_, rng);
  return value(std::clamp(floor_index(x), ilo, ihi));
}

double FlooredLattice::second_moment() const {
  // E F^2 = sum_{i>=1} (2i-1) [P(F>=i) + P(F<=-i)]
  PolyTailBound env = base_->tail_upper();
  if (env.amp > 0.0 && env.index <= 2.0)
    throw std::domain_error("second_moment: infinite for tail index <= 2");
  Accumulator acc;
  double i = 1.0, bound;
  do {
    double term = (2.0 * i - 1.0) * (cell_tail(i) + 1.0 - base_->tail_prob((1.0 - i) * h_ - 0.0));
    acc.add(term);
    i += 1.0;
    bound = env.amp > 0.0 && i * h_ > env.t0
                ? 2.0 * env.amp * std::pow(h_, -env.index) *
                      (hurwitz_zeta(env.index - 1.0, i).value)
                : (i * h_ > env.t0 ? 0.0 : 1.0);
  } while (bound > 1e-11 && i < 1e8);
  return h_ * h_ * acc.sum() - mean_floor_ * mean_floor_;
}

Certified FlooredLattice::positive_moment(double p) const {
  auto lo = [&](double t) { return cell_tail(std::floor((t + mean_floor_) / h_) + 1.0); };
  auto hi = [&](double t) { return cell_tail(std::floor((t + mean_floor_) / h_)); };
  return moment_by_tail_quadrature(p, lo, hi, tail_upper());
}

Certified FlooredLattice::absolute_moment(double p) const {
  Certified pos = positive_moment(p);
  Accumulator neg;
  for (double i = i_min_; value(i) < 0.0; i += 1.0) {
    double pi = cell_tail(i) - cell_tail(i + 1.0);
    neg.add(std::pow(-value(i), p) * pi);
  }
  return {pos.value + neg.sum(), pos.error + 1e-13};
}

double FlooredLattice::trunc_mgf(double theta, double cutoff) const {
  const double imax = std::floor((cutoff + mean_floor_) / h_);
  Accumulator acc;
  for (double i = i_min_; i <= imax; i += 1.0) {
    double pi = cell_tail(i) - cell_tail(i + 1.0);
    if (pi > 0.0) acc.add(std::exp(theta * value(i)) * pi);
  }
  return acc.sum();
}

PolyTailBound FlooredLattice::tail_upper() const {
  PolyTailBound env = base_->tail_upper();
  // X' > t implies X >= t + mean_floor' >= t - h (floor loses at most h)
  if (env.amp == 0.0) return {0.0, 0.0, env.t0 + h_ - mean_floor_};
  return {env.amp * std::pow(2.0, env.index), env.index, std::max(2.0 * h_, 2.0 * env.t0)};
}

}  // namespace qx
