#include "qx/coupling.hpp"

#include <cmath>

namespace qx {

double LatticeCoupling::refine(double primed_value, CounterRng& rng) const {
  if (identity) return primed_value;
  const double i = std::round((primed_value + mean_floor) / h);
  return target->draw_in(i * h, (i + 1.0) * h, rng);
}

LatticeCoupling build_coupling(DistPtr target, double h, double mu) {
  if (!(h > 0.0) || h > mu)
    throw std::domain_error("build_coupling: need 0 < h <= mu for a positive primed drift");
  LatticeCoupling cp;
  cp.target = target;
  cp.h = h;
  cp.mu = mu;
  if (auto span = target->lattice_span()) {
    if (std::abs(*span - h) > 1e-12 * h)
      throw std::domain_error("build_coupling: lattice target requires h equal to its span");
    // floor(X/h) shifts every atom index by the same integer, so X' == X
    // and only the drift changes.
    const double c0 = target->lattice_offset();            // values = h j + c0
    const double frac = c0 / h - std::floor(c0 / h);       // in [0,1)
    cp.mean_floor = -h * frac;                             // E(h floor(X/h))
    cp.primed = target;
    cp.identity = true;
  } else {
    auto primed = std::make_shared<FlooredLattice>(target, h);
    cp.mean_floor = primed->mean_floor();
    cp.primed = std::move(primed);
  }
  cp.mu_prime = mu - cp.mean_floor - h;
  if (!(cp.mu_prime > 0.0)) throw std::domain_error("build_coupling: primed drift not positive");
  return cp;
}

double psi_lattice_eval(const IncrementDistribution& d, double theta, double cutoff) {
  if (!d.lattice_span())
    throw NonLatticeError("psi_lattice_eval: lattice laws only");
  return std::log(d.trunc_mgf(theta, cutoff)) - std::log1p(-d.tail_prob(cutoff));
}

BackwardSample sample_backward_via_coupling(const LatticeCoupling& cp,
                                            const AlgorithmParams& params_primed,
                                            Replica& r, std::uint64_t n,
                                            std::uint64_t* stop_index) {
  Sampler primed_sampler(params_primed, cp.primed);
  BackwardEngine engine(primed_sampler, r);
  engine.extend_certified(n);

  std::vector<double> x;       // refined target increments
  std::vector<double> tpos{0.0};
  auto refine_upto = [&](std::uint64_t j) {
    while (x.size() < j) {
      const double xi = cp.refine(engine.increments()[x.size()], r.main);
      r.budget.charge();
      x.push_back(xi);
      tpos.push_back(tpos.back() + xi - cp.mu);
    }
  };
  refine_upto(n);
  double m_min = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) m_min = std::min(m_min, tpos[k]);

  // N = inf{k >= n : M'_k + S'_k(mu') <= min_{j<=n} S_j(mu)}
  std::uint64_t N = n;
  for (;;) {
    const std::vector<double> sm = engine.suffix_max();
    const std::uint64_t cert = engine.certified();
    bool found = false;
    for (std::uint64_t k = N; k <= cert; ++k) {
      if (sm[k] <= m_min) {
        N = k;
        found = true;
        break;
      }
    }
    if (found) break;
    N = cert + 1;
    engine.extend_certified(N);
  }
  refine_upto(N);
  if (stop_index) *stop_index = N;

  // pathwise domination of the drifted walks
  const auto& ppos = engine.positions();
  for (std::uint64_t k = 1; k <= N; ++k) {
    ++r.identity_checks;
    if (ppos[k] < tpos[k] - 1e-9 * (1.0 + std::abs(tpos[k])))
      throw RatioViolation("coupling: domination violated");
  }

  BackwardSample bs;
  bs.recorded_length = N;
  bs.milestones = engine.milestones();
  bs.positions.assign(tpos.begin(), tpos.begin() + static_cast<std::ptrdiff_t>(n + 1));
  bs.increments.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  bs.maxima.resize(n + 1);
  std::vector<double> tsm(N + 1);
  double run = -std::numeric_limits<double>::infinity();
  for (std::uint64_t k = N + 1; k-- > 0;) {
    run = std::max(run, tpos[k]);
    tsm[k] = run;
  }
  for (std::uint64_t k = 0; k <= n; ++k) bs.maxima[k] = tsm[k] - tpos[k];
  return bs;
}

}  // namespace qx
