#pragma once

#include "halo/types.hpp"

namespace halo {

/// rho = lambda / sum(k_i * mu_i). Values >= 1 are returned, not rejected,
/// so callers can detect overload.
double utilization(const ClusterSpec& cluster, const ArrivalRate& rate);

/// T = sum_i p_i / (mu_i - lambda * p_i / k_i). Groups with p_i = 0
/// contribute nothing. Throws UnstableError{i} if a loaded group saturates.
double mean_response_time(const ClusterSpec& cluster, const ArrivalRate& rate,
                          const LoadSplit& split);

/// Capacity-proportional split: p_i = k_i mu_i / sum_j k_j mu_j.
LoadSplit proportional_split(const ClusterSpec& cluster);

/// Closed-form minimum mean response time, valid only when every group
/// carries positive load at the optimum. Throws OverloadedError when
/// lambda >= capacity and OutsideValidityRegionError when some group sits
/// below its activation threshold.
double closed_form_optimal_T(const ClusterSpec& cluster, const ArrivalRate& rate);

/// Per-group smallest lambda at which the group enters the optimal active
/// set. Groups with the maximal speed have threshold 0.
std::vector<double> activation_thresholds(const ClusterSpec& cluster);

/// Minimizing split via the square-root rule with active-set clamping.
/// Throws OverloadedError / DegenerateRateError.
SplitSolution optimal_split(const ClusterSpec& cluster, const ArrivalRate& rate);

/// Expand group probabilities to per-server probabilities, p_i / k_i each,
/// in group-major server order.
std::vector<double> per_server_weights(const ClusterSpec& cluster,
                                       const LoadSplit& split);

}  // namespace halo
