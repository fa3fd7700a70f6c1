#pragma once

#include <string>

#include "halo/rng.hpp"

namespace halo {

enum class ServiceKind { kExponential, kDeterministic, kLognormal, kBoundedPareto };

/// Mean-1 service-requirement distribution. Parameters are normalized
/// analytically so the mean is exactly 1 work unit.
class ServiceDistribution {
 public:
  static ServiceDistribution exponential();
  static ServiceDistribution deterministic();
  static ServiceDistribution lognormal(double sigma);
  /// Bounded Pareto with tail exponent `shape` and upper/lower bound ratio
  /// `bound_ratio`; the lower bound is solved so the mean is 1.
  static ServiceDistribution bounded_pareto(double shape, double bound_ratio);

  static ServiceDistribution parse(const std::string& kind, double sigma, double shape,
                                   double bound_ratio);

  double sample(RngStream& stream) const;

  ServiceKind kind() const { return kind_; }
  /// Analytic second moment E[X^2] of the normalized distribution.
  double second_moment() const;
  std::string name() const;

 private:
  ServiceDistribution(ServiceKind kind, double a, double b, double c)
      : kind_(kind), a_(a), b_(b), c_(c) {}

  ServiceKind kind_;
  double a_ = 0.0;  // lognormal: mu;      pareto: lower bound L
  double b_ = 0.0;  // lognormal: sigma;   pareto: shape alpha
  double c_ = 0.0;  // pareto: upper bound H
};

}  // namespace halo
