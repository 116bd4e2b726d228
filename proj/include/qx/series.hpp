#pragma once

#include <functional>

namespace qx {

// Value with a certified absolute error bound.
struct Certified {
  double value = 0.0;
  double error = 0.0;
  double lo() const { return value - error; }
  double hi() const { return value + error; }
};

// Hurwitz zeta  sum_{j>=0} (a+j)^-s  for s > 1, a > 0.
// Direct summation of the head plus an Euler-Maclaurin tail; the returned
// error bound covers the truncated Euler-Maclaurin remainder.
Certified hurwitz_zeta(double s, double a);

// Adaptive Simpson quadrature of f over [lo, hi] with absolute tolerance.
Certified integrate(const std::function<double(double)>& f, double lo, double hi,
                    double tol);

// Kahan-compensated accumulator.
class Accumulator {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double sum() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace qx
