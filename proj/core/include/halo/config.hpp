#pragma once

#include <string>
#include <vector>

#include "halo/service.hpp"
#include "halo/sim.hpp"
#include "halo/types.hpp"

namespace halo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Malformed file or schema violation, with field context.
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
/// Well-formed file violating a semantic invariant.
struct ValidationError : ConfigError {
  using ConfigError::ConfigError;
};

struct ExperimentConfig {
  std::string label;
  std::vector<GroupSpec> groups;
  std::vector<double> lambdas;
  std::vector<std::string> policies;
  ServiceDistribution service = ServiceDistribution::exponential();
  SimConfig sim;
  std::string output_dir = ".";

  ClusterSpec cluster() const { return ClusterSpec(groups); }
};

/// Load and validate a JSON experiment config. Unknown fields are an
/// error. Every lambda must satisfy 0 < lambda < total capacity.
ExperimentConfig load_config(const std::string& path);

}  // namespace halo
