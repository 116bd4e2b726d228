#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qx {

// Moment regime the feasibility conditions are checked under.
//   FiniteVariance: E X^2 < inf, dominating index alpha in (2, (2+eps)(1-delta)].
//   Beta12:         only E|X|^{1+eps} < inf, alpha in (1, (1+eps)(1-delta)].
enum class MomentMode { FiniteVariance, Beta12 };

struct AlgorithmParams {
  double mu = 1.0;      // drift subtracted per step
  double m = 1.0;       // milestone height
  double L = 1.0;       // downward milestone multiplier (depth L*m)
  double alpha = 4.0;   // index of the dominating Pareto behind g
  double gamma = 1.0;   // tilting strength
  double delta = 0.38;  // threshold exponent, in (0, 1/2]
  MomentMode mode = MomentMode::FiniteVariance;
  double epsilon = 0.0;  // Beta12 only: E|X|^{1+eps} < inf

  void validate_structural() const;
};

struct ConstraintResult {
  std::string name;
  bool pass = false;
  double value = 0.0;   // achieved supremum / left-hand side
  double bound = 1.0;
  std::string note;
};

struct FeasibilityReport {
  bool feasible = false;
  double epsilon_used = 0.0;  // epsilon backing Cond_Alpha in finite-variance mode
  int k_audit = 60;
  std::vector<ConstraintResult> items;

  const ConstraintResult* find(const std::string& name) const;
  std::string pretty() const;
  std::string to_json() const;
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(FeasibilityReport r)
      : std::runtime_error("parameters infeasible:\n" + r.pretty()), report(std::move(r)) {}
  FeasibilityReport report;
};

}  // namespace qx
