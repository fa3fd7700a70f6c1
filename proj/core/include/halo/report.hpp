#pragma once

#include <optional>
#include <string>
#include <vector>

#include "halo/config.hpp"

namespace halo {

/// %.17g rendering used by every CSV column so values round-trip exactly.
std::string format_double(double v);

struct AnalyzeRow {
  std::string scenario;
  double lambda;
  double rho;
  double t_proportional;
  double t_optimal;
  std::string regime;  // "closed_form" or "active_set"
};

struct ValidateRow {
  double lambda;
  double oracle_t;
  double proportional_t;
  std::optional<double> closed_form_t;  // absent outside the validity region
  bool ordering_ok;                     // oracle T <= T_prop + 1e-9
  bool closed_form_ok;                  // relative gap < 1e-6 where applicable
};

struct SweepRow {
  std::string scenario;
  std::string policy;
  double lambda;
  double rho;
  std::optional<double> analytic_t;
  std::optional<double> simulated_t;
  std::optional<double> ci_halfwidth;
  std::optional<std::uint64_t> jobs_counted;
  std::uint64_t seed;
  std::string regime;
  std::string error;
};

/// Closed-form tabulation, one row per lambda, no simulation.
std::vector<AnalyzeRow> cmd_analyze(const ExperimentConfig& config);
std::string analyze_csv(const std::vector<AnalyzeRow>& rows);

/// Oracle adjudication of the closed forms. all_pass is the exit gate.
struct ValidateReport {
  std::vector<ValidateRow> rows;
  bool all_pass;
  std::string text;  // the printed PASS/FAIL table
};
ValidateReport cmd_validate(const ExperimentConfig& config, double resolution);

/// Simulation sweep over every (lambda, policy) cell. Saturated cells get
/// an error note instead of aborting the sweep.
std::vector<SweepRow> cmd_simulate(const ExperimentConfig& config);
std::string sweep_csv(const std::vector<SweepRow>& rows);
/// Header of sweep.csv, fixed column order.
extern const char* const kSweepCsvHeader;

/// Optimal split report for a single lambda, printable.
struct SplitReport {
  std::vector<double> probabilities;
  double response_time;
  std::string regime;
  std::vector<std::size_t> active_groups;
};
SplitReport cmd_split(const ExperimentConfig& config, double lambda);

}  // namespace halo
