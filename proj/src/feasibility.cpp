#include "qx/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qx {

void AlgorithmParams::validate_structural() const {
  if (!(mu > 0.0)) throw std::domain_error("params: mu must be positive");
  if (!(m >= 1.0)) throw std::domain_error("params: m must be >= 1");
  if (!(L >= 1.0)) throw std::domain_error("params: L must be >= 1");
  if (!(gamma > 0.0)) throw std::domain_error("params: gamma must be positive");
  if (!(delta > 0.0 && delta <= 0.5)) throw std::domain_error("params: delta must be in (0, 1/2]");
  if (mode == MomentMode::FiniteVariance) {
    if (!(alpha > 2.0)) throw std::domain_error("params: alpha must exceed 2");
  } else {
    if (!(epsilon > 0.0 && epsilon < 1.0))
      throw std::domain_error("params: beta12 epsilon must be in (0,1)");
    if (!(alpha > 1.0 && alpha <= (1.0 + epsilon) * (1.0 - delta)))
      throw std::domain_error("params: beta12 needs 1 < alpha <= (1+eps)(1-delta)");
    if (!(delta <= epsilon / 2.0))
      throw std::domain_error("params: beta12 needs delta <= eps/2");
  }
}

const ConstraintResult* FeasibilityReport::find(const std::string& name) const {
  for (const auto& c : items)
    if (c.name == name) return &c;
  return nullptr;
}

std::string FeasibilityReport::pretty() const {
  std::ostringstream os;
  os << (feasible ? "FEASIBLE" : "INFEASIBLE") << " (k_audit=" << k_audit
     << ", eps=" << epsilon_used << ")\n";
  for (const auto& c : items) {
    os << "  [" << (c.pass ? "ok" : "FAIL") << "] " << c.name << " = " << c.value
       << " (bound " << c.bound << ")";
    if (!c.note.empty()) os << "  " << c.note;
    os << "\n";
  }
  return os.str();
}

std::string FeasibilityReport::to_json() const {
  std::ostringstream os;
  os << "{\"feasible\":" << (feasible ? "true" : "false") << ",\"k_audit\":" << k_audit
     << ",\"epsilon_used\":" << epsilon_used << ",\"constraints\":[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& c = items[i];
    os << (i ? "," : "") << "{\"name\":\"" << c.name << "\",\"pass\":"
       << (c.pass ? "true" : "false") << ",\"value\":" << c.value << ",\"bound\":" << c.bound
       << "}";
  }
  os << "]}";
  return os.str();
}

double lemma5_constant_finite_variance(double gamma, double ex2) {
  return (gamma * gamma * std::exp(gamma) / 2.0 + 2.0) * ex2;
}

double lemma5_constant_beta12(double gamma, double eps, double abs_moment) {
  return (gamma * gamma / 2.0 * std::exp(gamma) / (1.0 - eps) + 2.0) * abs_moment;
}

double ci1_lhs(const AlgorithmParams& p, const IncrementDistribution& d, double z) {
  const double thr = std::pow(z + p.m, 1.0 - p.delta);
  return 6.0 * std::pow(1.0 + 2.0 * z + p.m, p.alpha) * d.tail_prob(thr) /
         ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * p.mu);
}

double ci2_lhs(const AlgorithmParams& p, const IncrementDistribution& d, double z) {
  const double w = p.m + z;
  const double ex2 = d.second_moment();
  const double expo = -p.gamma * std::pow(w, p.delta) +
                      p.gamma * p.gamma * std::exp(p.gamma) * ex2 * z /
                          (std::pow(w, 2.0 * (1.0 - p.delta)) * p.mu) +
                      4.0 * (z / p.mu) * d.tail_prob(std::pow(w, 1.0 - p.delta));
  const double pref = 3.0 * std::pow(1.0 + 2.0 * z + p.m, p.alpha) /
                      ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * z);
  return pref * std::exp(expo);
}

namespace {

// max_{u >= u_min} u^alpha exp(-u^delta); the unconstrained maximizer is
// u* = (alpha/delta)^{1/delta}.
double constrained_power_exp_max(double alpha, double delta, double u_min) {
  const double u_star = std::pow(alpha / delta, 1.0 / delta);
  const double u = std::max(u_min, u_star);
  return std::pow(u, alpha) * std::exp(-std::pow(u, delta));
}

double grid_sup(const std::function<double(double)>& f, double mu, int k_audit, double* argz) {
  double best = 0.0;
  double z = mu;
  for (int k = 0; k <= k_audit; ++k, z *= 2.0) {
    double v = f(z);
    if (v > best) {
      best = v;
      if (argz) *argz = z;
    }
  }
  return best;
}

}  // namespace

std::vector<ConstraintResult> check_ci1(const AlgorithmParams& p,
                                        const IncrementDistribution& d, int k_audit) {
  std::vector<ConstraintResult> out;
  double argz = p.mu;
  const double sup = grid_sup([&](double z) { return ci1_lhs(p, d, z); }, p.mu, k_audit, &argz);
  std::ostringstream note;
  note << "sup at z=" << argz;
  out.push_back({"CI1_grid", sup <= 1.0 + 1e-9, sup, 1.0, note.str()});

  // Envelope for z > mu 2^k_audit: with P(X>t) <= amp t^-idx,
  //   lhs(z) <= [6 2^a amp / ((a-1)(m+1)^{a-1} mu)] w^{a - idx(1-d)},  w = z+m,
  // which decreases in w once a < idx(1-d).
  const PolyTailBound env = d.tail_upper();
  const double w0 = p.mu * std::pow(2.0, k_audit + 1) + p.m;
  ConstraintResult tail{"CI1_tail_envelope", false, 0.0, 1.0, ""};
  if (env.amp == 0.0) {
    tail.pass = std::pow(w0, 1.0 - p.delta) > env.t0;
    tail.value = tail.pass ? 0.0 : std::numeric_limits<double>::infinity();
    tail.note = "bounded support";
  } else if (p.alpha >= env.index * (1.0 - p.delta)) {
    tail.pass = false;
    tail.value = std::numeric_limits<double>::infinity();
    tail.note = "alpha >= (tail index)(1-delta): supremum over z diverges";
  } else {
    const double c0 = 6.0 * std::pow(2.0, p.alpha) * env.amp /
                      ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * p.mu);
    tail.value = c0 * std::pow(w0, p.alpha - env.index * (1.0 - p.delta));
    tail.pass = tail.value <= 1.0 && std::pow(w0, 1.0 - p.delta) > env.t0;
  }
  out.push_back(tail);
  return out;
}

std::vector<ConstraintResult> check_ci2(const AlgorithmParams& p,
                                        const IncrementDistribution& d, int k_audit) {
  std::vector<ConstraintResult> out;
  double argz = p.mu;
  const double sup = grid_sup([&](double z) { return ci2_lhs(p, d, z); }, p.mu, k_audit, &argz);
  std::ostringstream note;
  note << "sup at z=" << argz;
  // informational: the closed-form global bound (C_m_4) with the max taken
  // over the constrained range u >= gamma^{1/delta} m
  const double ex2 = d.second_moment();
  const double aux_b = std::pow(1.0 - 2.0 * p.delta, 1.0 - 2.0 * p.delta) /
                       std::pow(2.0 * (1.0 - p.delta), 2.0 * (1.0 - p.delta));
  const double cm4 = 3.0 * std::pow(2.0, p.alpha) * std::pow(p.gamma, -p.alpha / p.delta) /
                     ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * p.mu) *
                     std::exp((p.gamma * p.gamma * std::exp(p.gamma) + 4.0) * ex2 * aux_b /
                              (p.mu * std::pow(p.m, 1.0 - 2.0 * p.delta))) *
                     constrained_power_exp_max(p.alpha, p.delta,
                                               std::pow(p.gamma, 1.0 / p.delta) * p.m);
  note << "; global closed-form bound (C_m_4) = " << cm4;
  out.push_back({"CI2_grid", sup <= 1.0 + 1e-9, sup, 1.0, note.str()});

  // Envelope beyond the grid: for w = z+m >= w0,
  //   lhs <= [6 2^a / ((a-1)(m+1)^{a-1})] w^{a-1}
  //          exp(-g w^d + Kq w^{2d-1} + Kt w^{1-idx(1-d)}),
  // decreasing once g d w^d >= (a-1).
  const PolyTailBound env = d.tail_upper();
  const double w0 = p.mu * std::pow(2.0, k_audit + 1) + p.m;
  ConstraintResult tail{"CI2_tail_envelope", false, 0.0, 1.0, ""};
  double kt = 0.0;
  bool kt_ok = true;
  if (env.amp > 0.0) {
    if (env.index * (1.0 - p.delta) <= 1.0)
      kt_ok = false;
    else
      kt = 4.0 * env.amp / p.mu;
  }
  const double kq = p.gamma * p.gamma * std::exp(p.gamma) * ex2 / p.mu;
  const bool monotone = p.gamma * p.delta * std::pow(w0, p.delta) >= (p.alpha - 1.0);
  if (!kt_ok) {
    tail.pass = false;
    tail.value = std::numeric_limits<double>::infinity();
    tail.note = "(tail index)(1-delta) <= 1: envelope diverges";
  } else {
    const double expo = -p.gamma * std::pow(w0, p.delta) + kq * std::pow(w0, 2.0 * p.delta - 1.0) +
                        (env.amp > 0.0 ? kt * std::pow(w0, 1.0 - env.index * (1.0 - p.delta)) : 0.0);
    tail.value = 6.0 * std::pow(2.0, p.alpha) /
                 ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0)) *
                 std::pow(w0, p.alpha - 1.0) * std::exp(expo);
    tail.pass = monotone && tail.value <= 1.0;
    if (!monotone) tail.note = "envelope not yet decreasing at the grid edge";
  }
  out.push_back(tail);
  return out;
}

std::vector<ConstraintResult> check_ci2_beta12(const AlgorithmParams& p,
                                               const IncrementDistribution& d) {
  std::vector<ConstraintResult> out;
  const double abs_m = d.absolute_moment(1.0 + p.epsilon).hi();
  // moment precondition backing the log-MGF lemma at every C_k >= m+mu
  const double in1 = abs_m / std::pow(p.m, (1.0 - p.delta) * (1.0 + p.epsilon));
  out.push_back({"Cm3_beta12", in1 <= 0.5, in1, 0.5, "E|X|^{1+eps} m^{-(1-d)(1+eps)}"});
  const double a_gamma = lemma5_constant_beta12(p.gamma, p.epsilon, abs_m);
  const double value = 3.0 * std::pow(2.0, p.alpha) * std::pow(p.gamma, -p.alpha / p.delta) /
                       ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * p.mu) *
                       std::exp(2.0 * a_gamma / p.mu) *
                       constrained_power_exp_max(p.alpha, p.delta,
                                                 std::pow(p.gamma, 1.0 / p.delta) * p.m);
  out.push_back({"CI2_beta12", value <= 1.0, value, 1.0, ""});
  return out;
}

FeasibilityReport check_feasibility(const AlgorithmParams& p, const IncrementDistribution& d,
                                    int k_audit) {
  FeasibilityReport rep;
  rep.k_audit = k_audit;
  try {
    p.validate_structural();
    rep.items.push_back({"structural", true, 0.0, 0.0, ""});
  } catch (const std::exception& e) {
    rep.items.push_back({"structural", false, 0.0, 0.0, e.what()});
    rep.feasible = false;
    return rep;
  }

  // With no positive increment mass the walk is non-increasing minus drift,
  // upward crossings are impossible and the ratio lemmas are vacuous.
  if (d.tail_prob(0.0) == 0.0) {
    rep.epsilon_used = 1.0;
    for (const char* name : {"CI1_grid", "CI1_tail_envelope", "CI2_grid", "CI2_tail_envelope"})
      rep.items.push_back({name, true, 0.0, 1.0, "no positive increment mass"});
    rep.feasible = true;
    return rep;
  }

  if (p.mode == MomentMode::FiniteVariance) {
    // Cond_Alpha: some eps with 2 < alpha <= (2+eps)(1-delta) and E|X|^{2+eps} finite.
    const double eps_req = p.alpha / (1.0 - p.delta) - 2.0;
    const double eps_max = d.max_finite_moment() - 2.0;  // strict upper limit
    ConstraintResult ca{"Cond_Alpha", false, eps_req, eps_max, ""};
    if (eps_req <= 0.0) {
      rep.epsilon_used = std::min(1.0, std::isfinite(eps_max) ? 0.5 * eps_max : 1.0);
      ca.pass = true;
    } else if (eps_req < eps_max) {
      rep.epsilon_used =
          std::isfinite(eps_max) ? eps_req + 0.5 * (eps_max - eps_req) : eps_req + 1.0;
      ca.pass = true;
    } else {
      ca.note = "no eps with alpha <= (2+eps)(1-delta) and E|X|^{2+eps} < inf";
    }
    std::ostringstream os;
    os << "eps_used=" << rep.epsilon_used;
    if (ca.pass && eps_req > 0.0) {
      // informational Chebyshev constant (C_m_2)
      const double mom = d.positive_moment(2.0 + rep.epsilon_used).hi();
      os << "; global Chebyshev bound (C_m_2) = "
         << 6.0 * std::pow(2.0, p.alpha) * mom /
                ((p.alpha - 1.0) * std::pow(p.m + 1.0, p.alpha - 1.0) * p.mu);
    }
    ca.note = ca.note.empty() ? os.str() : ca.note;
    rep.items.push_back(ca);

    const double ex2 = d.second_moment();
    const double cm3 = ex2 / std::pow(p.m, 2.0 * (1.0 - p.delta));
    rep.items.push_back({"Cm3", cm3 <= 0.5, cm3, 0.5, "E(X^2) m^{-2(1-d)}"});

    for (auto& c : check_ci1(p, d, k_audit)) rep.items.push_back(std::move(c));
    for (auto& c : check_ci2(p, d, k_audit)) rep.items.push_back(std::move(c));
  } else {
    rep.epsilon_used = p.epsilon;
    for (auto& c : check_ci1(p, d, k_audit)) rep.items.push_back(std::move(c));
    for (auto& c : check_ci2_beta12(p, d)) rep.items.push_back(std::move(c));
  }

  rep.feasible = std::all_of(rep.items.begin(), rep.items.end(),
                             [](const ConstraintResult& c) { return c.pass; });
  return rep;
}

double minimize_m(const IncrementDistribution& d, AlgorithmParams base, double m_cap,
                  double rel_tol, int k_audit) {
  auto feasible = [&](double m) {
    AlgorithmParams p = base;
    p.m = m;
    return check_feasibility(p, d, k_audit).feasible;
  };
  if (feasible(1.0)) return 1.0;
  double lo = 1.0, hi = 2.0;
  while (hi < m_cap && !feasible(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= m_cap && !feasible(hi)) {
    AlgorithmParams p = base;
    p.m = m_cap;
    throw InfeasibleError(check_feasibility(p, d, k_audit));
  }
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

AlgorithmParams solve_params(const IncrementDistribution& d, AlgorithmParams base,
                             const std::vector<double>& deltas,
                             const std::vector<double>& gammas, double m_cap) {
  AlgorithmParams best = base;
  double best_m = std::numeric_limits<double>::infinity();
  for (double delta : deltas) {
    for (double gamma : gammas) {
      AlgorithmParams p = base;
      p.delta = delta;
      p.gamma = gamma;
      try {
        const double m = minimize_m(d, p, m_cap);
        if (m < best_m) {
          best_m = m;
          best = p;
          best.m = m;
        }
      } catch (const InfeasibleError&) {
      } catch (const std::domain_error&) {
      }
    }
  }
  if (!std::isfinite(best_m)) {
    AlgorithmParams p = base;
    p.m = m_cap;
    throw InfeasibleError(check_feasibility(p, d));
  }
  return best;
}

CmZeroResult check_cm0(const AlgorithmParams& p, const IncrementDistribution& d,
                       std::uint64_t steps, std::uint64_t seed) {
  CounterRng rng(seed, 0xC303, 0);
  double w = 0.0;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < steps; ++i) {
    w = std::max(0.0, w + d.draw(rng) - p.mu);
    if (w > p.m && w <= (p.L + 1.0) * p.m) ++hits;
  }
  return {hits > 0, static_cast<double>(hits) / static_cast<double>(steps), steps};
}

}  // namespace qx
