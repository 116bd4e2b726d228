#include "qx/series.hpp"

#include <cmath>
#include <stdexcept>

namespace qx {

Certified hurwitz_zeta(double s, double a) {
  if (!(s > 1.0) || !(a > 0.0)) throw std::domain_error("hurwitz_zeta: need s>1, a>0");
  // Sum the head until a+N is large enough that the Euler-Maclaurin tail
  // with three correction terms is tiny.
  std::size_t n_head = 0;
  if (a < 4096.0) n_head = static_cast<std::size_t>(4096.0 - a) + 1;
  Accumulator acc;
  for (std::size_t j = 0; j < n_head; ++j) acc.add(std::pow(a + static_cast<double>(j), -s));
  const double A = a + static_cast<double>(n_head);
  const double As = std::pow(A, -s);
  double tail = std::pow(A, 1.0 - s) / (s - 1.0) + 0.5 * As + s * As / A / 12.0 -
                s * (s + 1.0) * (s + 2.0) * As / (A * A * A) / 720.0;
  // remainder after the B4 term is bounded by the first omitted term
  double err = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * As /
               (A * A * A * A * A) / 30240.0;
  return {acc.sum() + tail, err + 1e-15 * (acc.sum() + tail)};
}

namespace {

double simpson(const std::function<double(double)>& f, double lo, double hi, double flo,
               double fmid, double fhi) {
  return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
}

void adapt(const std::function<double(double)>& f, double lo, double hi, double flo,
           double fmid, double fhi, double whole, double tol, int depth, Certified& out) {
  const double mid = 0.5 * (lo + hi);
  const double fl = f(0.5 * (lo + mid));
  const double fr = f(0.5 * (mid + hi));
  const double left = simpson(f, lo, mid, flo, fl, fmid);
  const double right = simpson(f, mid, hi, fmid, fr, fhi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    out.value += left + right + delta / 15.0;
    out.error += std::abs(delta) / 15.0 + tol;
    return;
  }
  adapt(f, lo, mid, flo, fl, fmid, left, 0.5 * tol, depth - 1, out);
  adapt(f, mid, hi, fmid, fr, fhi, right, 0.5 * tol, depth - 1, out);
}

}  // namespace

Certified integrate(const std::function<double(double)>& f, double lo, double hi,
                    double tol) {
  if (hi <= lo) return {0.0, 0.0};
  Certified out;
  const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
  adapt(f, lo, hi, flo, fmid, fhi, simpson(f, lo, hi, flo, fmid, fhi), tol, 48, out);
  return out;
}

}  // namespace qx
