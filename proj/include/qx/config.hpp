#pragma once

#include <string>

#include "qx/increment.hpp"
#include "qx/params.hpp"

namespace qx {

// One experiment scenario, loaded from a JSON file. See README for the schema.
struct ScenarioConfig {
  std::string name = "scenario";

  // distribution spec
  double alpha_prime = 7.0;
  double c = 3.0;
  double h = 0.1;            // 0 => continuous (non-lattice) target
  double mu = 1.0;

  // algorithm parameters; when solve is set, m is found by the solver and
  // the optional sweep lists refine (delta, gamma)
  AlgorithmParams params;
  bool solve = false;
  std::vector<double> sweep_deltas;
  std::vector<double> sweep_gammas;

  std::uint64_t replicas = 1000;
  std::uint64_t horizon_n = 0;          // backward horizon per replica
  std::size_t lindley_length = 1000000;
  std::size_t lindley_batch = 25;
  std::uint64_t seed = 1;
  int threads = 1;
  std::uint64_t watchdog = 0;
  double coupling_h = 0.0;              // > 0 activates the lattice bridge
  std::string output_dir;

  static ScenarioConfig from_file(const std::string& path);
  static ScenarioConfig from_json_text(const std::string& text);
  DistPtr make_distribution() const;
};

}  // namespace qx
