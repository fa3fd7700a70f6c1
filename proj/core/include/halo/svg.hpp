#pragma once

#include <string>
#include <vector>

#include "halo/report.hpp"

namespace halo {

/// Self-contained 800x600 SVG: analytic curves from the analyze rows as
/// solid polylines, simulated points (if any) with CI error bars, a legend
/// of exact policy names. Output bytes are deterministic for fixed inputs.
std::string render_chart(const std::vector<AnalyzeRow>& analytic,
                         const std::vector<SweepRow>& simulated);

}  // namespace halo
