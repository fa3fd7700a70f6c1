#pragma once

#include "halo/types.hpp"

namespace halo {

/// Brute-force search for the optimal split, used to verify the closed
/// forms. No square-root rule, no activation thresholds: a coarse grid
/// scan (step `resolution`) refined by ternary search for n = 2, projected
/// coordinate descent from the proportional split for n > 2.
/// resolution must lie in (0, 0.01].
SplitSolution oracle_optimal_split(const ClusterSpec& cluster, const ArrivalRate& rate,
                                   double resolution);

}  // namespace halo
