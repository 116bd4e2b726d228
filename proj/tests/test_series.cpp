#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qx/series.hpp"

using namespace qx;

TEST_CASE("hurwitz zeta reference values") {
  CHECK(hurwitz_zeta(2.0, 1.0).value == Catch::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
  CHECK(hurwitz_zeta(3.0, 1.0).value == Catch::Approx(1.2020569031595943).epsilon(1e-12));
  // zeta(s, a) - a^-s = zeta(s, a+1)
  const double s = 2.9, a = 81.0;
  CHECK(hurwitz_zeta(s, a).value - std::pow(a, -s) ==
        Catch::Approx(hurwitz_zeta(s, a + 1.0).value).epsilon(1e-13));
}

TEST_CASE("hurwitz zeta error bound covers truncation") {
  const double s = 7.0, a = 31.0;
  Certified z = hurwitz_zeta(s, a);
  double direct = 0.0;
  for (int j = 200000; j-- > 0;) direct += std::pow(a + j, -s);
  CHECK(std::abs(z.value - direct) <= z.error + 1e-15);
}

TEST_CASE("adaptive quadrature") {
  Certified q = integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12);
  CHECK(q.value == Catch::Approx(1.0 / 3.0).epsilon(1e-10));
  Certified s = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(s.value == Catch::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(s.value - 2.0) <= s.error + 1e-12);
}

TEST_CASE("kahan accumulator") {
  Accumulator acc;
  for (int i = 0; i < 1000000; ++i) acc.add(0.1);
  CHECK(acc.sum() == Catch::Approx(100000.0).epsilon(1e-12));
}
