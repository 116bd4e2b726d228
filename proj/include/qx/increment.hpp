#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qx/rng.hpp"
#include "qx/series.hpp"

namespace qx {

struct NonLatticeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polynomial tail envelope: P(X > t) <= amp * t^-index for all t >= t0.
// amp == 0 encodes bounded support above t0.
struct PolyTailBound {
  double amp = 0.0;
  double index = 0.0;
  double t0 = 0.0;
  double at(double t) const {
    if (amp == 0.0) return 0.0;
    return amp * std::pow(t, -index);
  }
};

// A mean-zero increment law X together with every primitive evaluation the
// samplers need. Implementations are immutable after construction and safe
// to share across threads; all randomness comes from the caller's stream.
class IncrementDistribution {
 public:
  virtual ~IncrementDistribution() = default;

  virtual double draw(CounterRng& rng) const = 0;
  // P(X > t), exact.
  virtual double tail_prob(double t) const = 0;
  // Law of X restricted to {X > t} / {X <= t} / {lo <= X < hi}.
  virtual double draw_above(double t, CounterRng& rng) const = 0;
  virtual double draw_at_most(double t, CounterRng& rng) const = 0;
  virtual double draw_in(double lo, double hi, CounterRng& rng) const = 0;

  virtual double second_moment() const = 0;                 // E X^2
  virtual Certified positive_moment(double p) const = 0;    // E (X+)^p
  virtual Certified absolute_moment(double p) const = 0;    // E |X|^p
  virtual double max_finite_moment() const = 0;             // sup{p : E|X|^p < inf}

  virtual std::optional<double> lattice_span() const = 0;
  virtual double lattice_offset() const { return 0.0; }     // values = span*j + offset

  // E[e^{theta X} 1{X <= cutoff}], exact finite sum for lattice laws.
  virtual double trunc_mgf(double theta, double cutoff) const = 0;

  virtual PolyTailBound tail_upper() const = 0;

  double cdf_weak(double t) const { return 1.0 - tail_prob(t); }
};

using DistPtr = std::shared_ptr<const IncrementDistribution>;

// The centered lattice law X = h*floor((c/h)V) - E(h*floor((c/h)V)) with
// P(V > t) = (1+t)^-alpha'. Atoms sit at h*j - centering for j = 0,1,2,...
class LatticePareto final : public IncrementDistribution {
 public:
  LatticePareto(double alpha_prime, double c, double h);

  double draw(CounterRng& rng) const override;
  double tail_prob(double t) const override;
  double draw_above(double t, CounterRng& rng) const override;
  double draw_at_most(double t, CounterRng& rng) const override;
  double draw_in(double lo, double hi, CounterRng& rng) const override;
  double second_moment() const override;
  Certified positive_moment(double p) const override;
  Certified absolute_moment(double p) const override;
  double max_finite_moment() const override { return ap_; }
  std::optional<double> lattice_span() const override { return h_; }
  double lattice_offset() const override { return -centering_; }
  double trunc_mgf(double theta, double cutoff) const override;
  PolyTailBound tail_upper() const override { return {std::pow(c_, ap_), ap_, 1e-12}; }

  double alpha_prime() const { return ap_; }
  double scale() const { return c_; }
  double centering() const { return centering_; }          // E(h*floor((c/h)V))
  double centering_error() const { return centering_err_; }
  double atom_value(double j) const { return h_ * j - centering_; }
  // P(atom index >= j)
  double index_tail(double j) const {
    return j <= 0.0 ? 1.0 : std::pow(1.0 + j / r_, -ap_);
  }
  double atom_prob(double j) const {
    return index_tail(j) * (-std::expm1(-ap_ * std::log1p(1.0 / (r_ + j))));
  }
  // smallest atom index with value > t
  double first_index_above(double t) const {
    double x = (t + centering_) / h_;
    return x < 0.0 ? 0.0 : std::floor(x) + 1.0;
  }

 private:
  double ap_, c_, h_, r_;
  double centering_, centering_err_;
};

// Continuous companion of the example law: X = cV - cE(V). Non-lattice, so
// the truncated MGF is not evaluable here; use the lattice bridge instead.
class ContinuousPareto final : public IncrementDistribution {
 public:
  ContinuousPareto(double alpha_prime, double c);

  double draw(CounterRng& rng) const override;
  double tail_prob(double t) const override;
  double draw_above(double t, CounterRng& rng) const override;
  double draw_at_most(double t, CounterRng& rng) const override;
  double draw_in(double lo, double hi, CounterRng& rng) const override;
  double second_moment() const override;
  Certified positive_moment(double p) const override;
  Certified absolute_moment(double p) const override;
  double max_finite_moment() const override { return ap_; }
  std::optional<double> lattice_span() const override { return std::nullopt; }
  double trunc_mgf(double, double) const override {
    throw NonLatticeError("trunc_mgf: non-lattice law; route through the lattice bridge");
  }
  PolyTailBound tail_upper() const override { return {std::pow(c_, ap_), ap_, 1e-12}; }

  double alpha_prime() const { return ap_; }
  double scale() const { return c_; }
  double shift() const { return m1_; }   // X >= -m1
  double cdf(double x) const { return x <= -m1_ ? 0.0 : 1.0 - tail_prob(x); }
  double quantile(double u) const;       // inverse CDF

 private:
  double ap_, c_, m1_;
};

// Finitely supported law, centered at construction. Used by the tests and
// available for experiments with hand-built increments.
class DiscreteAtoms final : public IncrementDistribution {
 public:
  DiscreteAtoms(std::vector<double> values, std::vector<double> probs,
                std::optional<double> span = std::nullopt);

  double draw(CounterRng& rng) const override;
  double tail_prob(double t) const override;
  double draw_above(double t, CounterRng& rng) const override;
  double draw_at_most(double t, CounterRng& rng) const override;
  double draw_in(double lo, double hi, CounterRng& rng) const override;
  double second_moment() const override;
  Certified positive_moment(double p) const override;
  Certified absolute_moment(double p) const override;
  double max_finite_moment() const override { return std::numeric_limits<double>::infinity(); }
  std::optional<double> lattice_span() const override { return span_; }
  double trunc_mgf(double theta, double cutoff) const override;
  PolyTailBound tail_upper() const override { return {0.0, 0.0, values_.back()}; }

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> values_;  // ascending, mean zero
  std::vector<double> probs_;
  std::vector<double> tails_;   // tails_[i] = P(X >= values_[i])
  std::optional<double> span_;
};

// Lattice law of X' = h*floor(X/h) - E(h*floor(X/h)) derived from a
// (typically non-lattice) base law; the dominating walk of the coupling.
class FlooredLattice final : public IncrementDistribution {
 public:
  FlooredLattice(DistPtr base, double h);

  double draw(CounterRng& rng) const override;
  double tail_prob(double t) const override;
  double draw_above(double t, CounterRng& rng) const override;
  double draw_at_most(double t, CounterRng& rng) const override;
  double draw_in(double lo, double hi, CounterRng& rng) const override;
  double second_moment() const override;
  Certified positive_moment(double p) const override;
  Certified absolute_moment(double p) const override;
  double max_finite_moment() const override { return base_->max_finite_moment(); }
  std::optional<double> lattice_span() const override { return h_; }
  double lattice_offset() const override { return -mean_floor_; }
  double trunc_mgf(double theta, double cutoff) const override;
  PolyTailBound tail_upper() const override;

  double mean_floor() const { return mean_floor_; }   // E(h*floor(X/h)) < 0
  double value(double i) const { return h_ * i - mean_floor_; }
  double floor_index(double base_x) const { return std::floor(base_x / h_); }
  const IncrementDistribution& base() const { return *base_; }

 private:
  double cell_tail(double i) const;   // P(floor(X/h) >= i) = P(X >= i h)

  DistPtr base_;
  double h_;
  double mean_floor_, mean_floor_err_;
  double i_min_;                      // lowest cell with mass
};

// Series E(h*floor((c/h)V)) for the lattice-Pareto law; exposed for the
// h -> 0 and bracketing checks.
Certified lattice_pareto_mean_floor(double alpha_prime, double c, double h);

}  // namespace qx
