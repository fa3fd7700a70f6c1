#include "halo/service.hpp"

#include <cmath>
#include <stdexcept>

namespace halo {

ServiceDistribution ServiceDistribution::exponential() {
  return ServiceDistribution(ServiceKind::kExponential, 0.0, 0.0, 0.0);
}

ServiceDistribution ServiceDistribution::deterministic() {
  return ServiceDistribution(ServiceKind::kDeterministic, 0.0, 0.0, 0.0);
}

ServiceDistribution ServiceDistribution::lognormal(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("lognormal sigma must be positive");
  }
  // E[X] = exp(mu + sigma^2/2) = 1  =>  mu = -sigma^2/2
  return ServiceDistribution(ServiceKind::kLognormal, -0.5 * sigma * sigma, sigma, 0.0);
}

ServiceDistribution ServiceDistribution::bounded_pareto(double shape, double bound_ratio) {
  if (!(shape > 0.0) || shape == 1.0) {
    throw std::invalid_argument("bounded pareto shape must be positive and != 1");
  }
  if (!(bound_ratio > 1.0)) {
    throw std::invalid_argument("bounded pareto bound ratio must exceed 1");
  }
  // With H = r L:  E[X] = L * (alpha/(alpha-1)) * (1 - r^(1-alpha)) / (1 - r^-alpha)
  const double alpha = shape;
  const double r = bound_ratio;
  const double mean_at_unit_l =
      (alpha / (alpha - 1.0)) * (1.0 - std::pow(r, 1.0 - alpha)) / (1.0 - std::pow(r, -alpha));
  const double lower = 1.0 / mean_at_unit_l;
  return ServiceDistribution(ServiceKind::kBoundedPareto, lower, alpha, r * lower);
}

ServiceDistribution ServiceDistribution::parse(const std::string& kind, double sigma,
                                               double shape, double bound_ratio) {
  if (kind == "exponential") return exponential();
  if (kind == "deterministic") return deterministic();
  if (kind == "lognormal") return lognormal(sigma);
  if (kind == "bounded_pareto") return bounded_pareto(shape, bound_ratio);
  throw std::invalid_argument("unknown service distribution: " + kind);
}

double ServiceDistribution::sample(RngStream& stream) const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return stream.exponential(1.0);
    case ServiceKind::kDeterministic:
      return 1.0;
    case ServiceKind::kLognormal:
      return std::exp(a_ + b_ * stream.normal());
    case ServiceKind::kBoundedPareto: {
      // Inverse CDF of the truncated Pareto on [L, H].
      const double u = stream.uniform01();
      const double tail = 1.0 - std::pow(a_ / c_, b_);
      return a_ * std::pow(1.0 - u * tail, -1.0 / b_);
    }
  }
  throw std::logic_error("unreachable");
}

double ServiceDistribution::second_moment() const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return 2.0;
    case ServiceKind::kDeterministic:
      return 1.0;
    case ServiceKind::kLognormal:
      // E[X^2] = exp(2 mu + 2 sigma^2); with mu = -sigma^2/2 this is exp(sigma^2).
      return std::exp(b_ * b_);
    case ServiceKind::kBoundedPareto: {
      const double alpha = b_;
      const double l = a_;
      const double h = c_;
      if (alpha == 2.0) {
        return (alpha * std::pow(l, alpha)) / (1.0 - std::pow(l / h, alpha)) *
               std::log(h / l);
      }
      return (alpha / (2.0 - alpha)) * (std::pow(h, 2.0 - alpha) - std::pow(l, 2.0 - alpha)) *
             std::pow(l, alpha) / (1.0 - std::pow(l / h, alpha));
    }
  }
  throw std::logic_error("unreachable");
}

std::string ServiceDistribution::name() const {
  switch (kind_) {
    case ServiceKind::kExponential:
      return "exponential";
    case ServiceKind::kDeterministic:
      return "deterministic";
    case ServiceKind::kLognormal:
      return "lognormal";
    case ServiceKind::kBoundedPareto:
      return "bounded_pareto";
  }
  return "?";
}

}  // namespace halo
