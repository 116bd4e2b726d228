#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qx/increment.hpp"
#include "qx/oracles.hpp"

using namespace qx;

namespace {
const LatticePareto& light() {
  static LatticePareto d(7.0, 3.0, 0.1);
  return d;
}
const LatticePareto& heavy() {
  static LatticePareto d(2.9, 8.0, 0.1);
  return d;
}
}  // namespace

TEST_CASE("raw pareto tail helper") {
  // P(V > 1) = 2^-7 surfaces as the index tail at j = r
  CHECK(light().index_tail(30.0) == Catch::Approx(std::pow(2.0, -7.0)).epsilon(1e-15));
}

TEST_CASE("mean floor series") {
  Certified m0 = lattice_pareto_mean_floor(7.0, 3.0, 0.1);
  CHECK(m0.value >= 0.4);         // c E(V) - h
  CHECK(m0.value <= 0.5);         // c E(V)
  CHECK(m0.value == Catch::Approx(0.451942).epsilon(1e-4));
  CHECK(m0.error < 1e-9);

  Certified m1 = lattice_pareto_mean_floor(2.9, 0.85, 0.1);
  CHECK(m1.value >= 0.85 / 1.9 - 0.1);
  CHECK(m1.value <= 0.85 / 1.9);

  // h -> 0 recovers c E(V)
  Certified m2 = lattice_pareto_mean_floor(7.0, 3.0, 0.001);
  CHECK(std::abs(m2.value - 0.5) < 0.0011);

  CHECK_THROWS_AS(lattice_pareto_mean_floor(0.9, 1.0, 0.1), std::domain_error);
}

TEST_CASE("tail probabilities match simulation") {
  const auto& d = light();
  // removing only the bottom atom leaves 1 - P(Y=0)
  CHECK(d.tail_prob(-d.centering()) == Catch::Approx(d.index_tail(1.0)).epsilon(1e-15));
  CHECK(d.tail_prob(-d.centering() - d.lattice_span().value()) == 1.0);

  CounterRng rng(11, 0, 0);
  const int n = 2000000;
  const double grid[5] = {-0.3, 0.0, 0.3, 1.0, 3.0};
  int hits[5] = {0, 0, 0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double x = d.draw(rng);
    for (int g = 0; g < 5; ++g)
      if (x > grid[g]) ++hits[g];
  }
  for (int g = 0; g < 5; ++g) {
    const double p = d.tail_prob(grid[g]);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(hits[g] / double(n) - p) < 4.0 * se + 1e-9);
  }
}

TEST_CASE("centered mean and lattice closure") {
  const auto& d = heavy();
  CounterRng rng(12, 0, 0);
  const int n = 10000000;
  double sum = 0.0;
  bool closed = true;
  for (int i = 0; i < n; ++i) {
    const double x = d.draw(rng);
    sum += x;
    if (i % 97 == 0) {
      const double j = std::round((x + d.centering()) / 0.1);
      closed = closed && (x == d.atom_value(j));
    }
  }
  const double sigma = std::sqrt(d.second_moment());
  CHECK(std::abs(sum / n) < 4.0 * sigma / std::sqrt(double(n)));
  CHECK(closed);
}

TEST_CASE("conditional draws above a level") {
  const auto& d = light();
  CounterRng rng(13, 0, 0);
  const double t = 1.0;
  double mean_cond = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) {
    const double x = d.draw_above(t, rng);
    REQUIRE(x > t);
    mean_cond += x;
  }
  mean_cond /= n;
  // rejection oracle for the same conditional mean
  CounterRng rng2(14, 0, 0);
  double mean_rej = 0.0;
  int kept = 0;
  while (kept < n) {
    const double x = d.draw(rng2);
    if (x > t) {
      mean_rej += x;
      ++kept;
    }
  }
  mean_rej /= n;
  CHECK(std::abs(mean_cond - mean_rej) < 0.01);

  // continuous helper: E(V | V > 1) = 4/3 for alpha' = 7
  ContinuousPareto cp(7.0, 1.0);
  CounterRng rng3(15, 0, 0);
  double mv = 0.0;
  for (int i = 0; i < n; ++i) mv += cp.draw_above(1.0 - cp.shift(), rng3) + cp.shift();
  CHECK(mv / n == Catch::Approx(4.0 / 3.0).margin(0.005));
}

TEST_CASE("conditional draw below a high quantile is indistinguishable") {
  const auto& d = light();
  // t above the 99.9999th percentile
  double t = 1.0;
  while (d.tail_prob(t) > 1e-6) t += 0.5;
  CounterRng rng(16, 0, 0);
  std::vector<double> cond(300000), uncond(300000);
  for (auto& v : cond) v = d.draw_at_most(t, rng);
  for (auto& v : uncond) v = d.draw(rng);
  KsResult ks = ks_two_sample(cond, uncond);
  CHECK(ks.d < 0.005);
}

TEST_CASE("conditional draw on empty region throws") {
  const auto& d = light();
  CounterRng rng(17, 0, 0);
  CHECK_THROWS_AS(d.draw_at_most(-d.centering() - 0.2, rng), std::domain_error);
}

TEST_CASE("truncated mgf") {
  DiscreteAtoms two({-1.0, 1.0}, {0.5, 0.5}, 2.0);
  CHECK(two.trunc_mgf(0.3, 1.0) == Catch::Approx(std::cosh(0.3)).epsilon(1e-14));
  CHECK(two.trunc_mgf(0.3, 0.0) == Catch::Approx(0.5 * std::exp(-0.3)).epsilon(1e-14));
  CHECK(two.trunc_mgf(0.7, -2.0) == 0.0);

  const auto& d = light();
  for (double cutoff : {0.5, 2.0, 7.7}) {
    CHECK(d.trunc_mgf(0.0, cutoff) ==
          Catch::Approx(1.0 - d.tail_prob(cutoff)).margin(1e-12));
  }
  CHECK(d.trunc_mgf(0.2, -d.centering() - 0.2) == 0.0);

  ContinuousPareto cp(7.0, 3.0);
  CHECK_THROWS_AS(cp.trunc_mgf(0.1, 1.0), NonLatticeError);
}

TEST_CASE("moments") {
  const auto& d = light();
  // E X^2 against a plain Monte Carlo bracketing
  CounterRng rng(18, 0, 0);
  double s2 = 0.0;
  const int n = 4000000;
  for (int i = 0; i < n; ++i) {
    const double x = d.draw(rng);
    s2 += x * x;
  }
  CHECK(d.second_moment() == Catch::Approx(s2 / n).margin(0.01));

  Certified p3 = d.positive_moment(3.0);
  CHECK(p3.value > 0.0);
  CHECK(p3.error < 0.05 * p3.value + 1e-6);
  Certified a15 = d.absolute_moment(1.5);
  CHECK(a15.value > 0.0);
  CHECK_THROWS_AS(d.positive_moment(7.5), std::domain_error);

  CHECK_THROWS_AS(LatticePareto(1.8, 1.0, 0.5).second_moment(), std::domain_error);
}
