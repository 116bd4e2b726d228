#pragma once

// Brute-force oracles used only by the tests. Everything here is
// independent of the sampler implementation: plain dynamic programming and
// exhaustive enumeration on small laws.

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

namespace qxtest {

// Distribution of sup_n sum_i (x_i - mu) for a finitely supported step law
// whose steps all sit on a common grid. Computed by finite-horizon DP with
// a Chernoff bound certifying both the horizon and the lower cutoff.
class WalkMaxDP {
 public:
  WalkMaxDP(std::vector<double> values, std::vector<double> probs, double mu, double grid,
            double level_cap)
      : mu_(mu), grid_(grid), cap_(level_cap) {
    if (values.size() != probs.size()) throw std::invalid_argument("WalkMaxDP: size mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      steps_.push_back(to_grid(values[i] - mu));
      probs_.push_back(probs[i]);
    }
    // Cramer root of E e^{t (X-mu)} = 1 by bisection; requires some
    // positive step and negative drift.
    double lo = 1e-9, hi = 1.0;
    while (mgf(hi) < 1.0 && hi < 1e6) hi *= 2.0;
    if (mgf(hi) < 1.0) throw std::runtime_error("WalkMaxDP: no Cramer root");
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      (mgf(mid) < 1.0 ? lo : hi) = mid;
    }
    theta_ = lo;
    build();
  }

  // P(M <= level), certified within cert_error().
  double cdf(double level) const {
    long b = to_grid(level);
    if (b < 0) return 0.0;
    if (b >= static_cast<long>(cdf_.size())) b = static_cast<long>(cdf_.size()) - 1;
    return cdf_[static_cast<std::size_t>(b)];
  }
  double pmf(double level) const {
    long b = to_grid(level);
    if (b < 0 || b >= static_cast<long>(cdf_.size())) return 0.0;
    return b == 0 ? cdf_[0] : cdf_[b] - cdf_[b - 1];
  }
  double cert_error() const { return err_; }
  double grid() const { return grid_; }
  long levels() const { return static_cast<long>(cdf_.size()); }

 private:
  long to_grid(double v) const { return std::lround(v / grid_); }
  double mgf(double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < steps_.size(); ++i)
      s += probs_[i] * std::exp(t * grid_ * static_cast<double>(steps_[i]));
    return s;
  }

  void build() {
    const long bmax = to_grid(cap_);
    // floor: escape probability from depth below is <= exp(-theta (b - x))
    const long floor_off = static_cast<long>(std::ceil(40.0 / (theta_ * grid_)));
    cdf_.assign(static_cast<std::size_t>(bmax) + 1, 0.0);
    err_ = 0.0;
    for (long b = 0; b <= bmax; ++b) {
      // state: position index relative to the barrier b, in [-(b+floor), 0]
      const long width = b + floor_off + 1;
      std::vector<double> mass(static_cast<std::size_t>(width), 0.0);
      mass[static_cast<std::size_t>(b + floor_off)] = 1.0;  // start at 0 = offset b+floor
      double dead = 0.0;   // mass absorbed below the floor (counted as "never exceeds")
      double alive = 1.0;
      double err = std::exp(-theta_ * grid_ * static_cast<double>(floor_off));
      int guard = 0;
      while (alive - dead > 1e-13 && ++guard < 100000) {
        std::vector<double> next(static_cast<std::size_t>(width), 0.0);
        double ndead = dead;
        for (long x = 0; x < width; ++x) {
          const double p0 = mass[static_cast<std::size_t>(x)];
          if (p0 == 0.0) continue;
          for (std::size_t i = 0; i < steps_.size(); ++i) {
            const long y = x + steps_[i];
            const double q = p0 * probs_[i];
            if (y >= width) continue;          // exceeded the barrier: drop
            if (y < 0)
              ndead += q;                      // deep below: certified never-exceed
            else
              next[static_cast<std::size_t>(y)] += q;
          }
        }
        double still = 0.0;
        for (double v : next) still += v;
        mass.swap(next);
        alive = still + ndead;
        dead = ndead;
        if (still < 1e-13) break;
      }
      cdf_[static_cast<std::size_t>(b)] = dead + [&] {
        double s = 0.0;
        for (double v : mass) s += v;
        return s;  // leftover in-band mass cannot exceed within 1e-13
      }();
      err_ = std::max(err_, err + 1e-12);
    }
  }

  double mu_, grid_, cap_, theta_ = 0.0, err_ = 0.0;
  std::vector<long> steps_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Exhaustive path enumeration over a finite atom law: calls f(path, prob)
// for every length-n path.
template <typename F>
void enumerate_paths(const std::vector<double>& values, const std::vector<double>& probs,
                     std::size_t n, F&& f) {
  std::vector<double> path(n);
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      path[i] = values[idx[i]];
      p *= probs[idx[i]];
    }
    f(path, p);
    std::size_t i = 0;
    while (i < n && ++idx[i] == values.size()) idx[i++] = 0;
    if (i == n) break;
  }
}

}  // namespace qxtest
