#include "halo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "halo/oracle.hpp"
#include "halo/queueing.hpp"

namespace halo {

const char* const kSweepCsvHeader =
    "scenario,policy,lambda,rho,analytic_T,simulated_T,ci_halfwidth,jobs_counted,seed,regime,"
    "error";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

// Optimum plus the regime label: closed_form when every group is active.
std::pair<double, std::string> optimum_with_regime(const ClusterSpec& cluster, double lambda) {
  try {
    return {closed_form_optimal_T(cluster, ArrivalRate(lambda)), "closed_form"};
  } catch (const OutsideValidityRegionError&) {
    return {optimal_split(cluster, ArrivalRate(lambda)).response_time, "active_set"};
  }
}

}  // namespace

std::vector<AnalyzeRow> cmd_analyze(const ExperimentConfig& config) {
  const ClusterSpec cluster = config.cluster();
  const LoadSplit prop = proportional_split(cluster);
  std::vector<AnalyzeRow> rows;
  for (double lambda : config.lambdas) {
    const ArrivalRate rate(lambda);
    const auto [t_opt, regime] = optimum_with_regime(cluster, lambda);
    rows.push_back(AnalyzeRow{config.label, lambda, utilization(cluster, rate),
                              mean_response_time(cluster, rate, prop), t_opt, regime});
  }
  return rows;
}

std::string analyze_csv(const std::vector<AnalyzeRow>& rows) {
  std::ostringstream out;
  out << "scenario,lambda,rho,T_proportional,T_optimal,regime\n";
  for (const auto& r : rows) {
    out << r.scenario << ',' << format_double(r.lambda) << ',' << format_double(r.rho) << ','
        << format_double(r.t_proportional) << ',' << format_double(r.t_optimal) << ','
        << r.regime << '\n';
  }
  return out.str();
}

ValidateReport cmd_validate(const ExperimentConfig& config, double resolution) {
  const ClusterSpec cluster = config.cluster();
  const LoadSplit prop = proportional_split(cluster);
  ValidateReport report;
  report.all_pass = true;

  std::ostringstream out;
  out << "lambda        oracle_T      T_prop        closed_form_T  ordering  closed_form\n";
  for (double lambda : config.lambdas) {
    const ArrivalRate rate(lambda);
    ValidateRow row{};
    row.lambda = lambda;
    row.oracle_t = oracle_optimal_split(cluster, rate, resolution).response_time;
    row.proportional_t = mean_response_time(cluster, rate, prop);
    row.ordering_ok = row.oracle_t <= row.proportional_t + 1e-9;
    try {
      row.closed_form_t = closed_form_optimal_T(cluster, rate);
      row.closed_form_ok =
          std::abs(*row.closed_form_t - row.oracle_t) / row.oracle_t < 1e-6;
    } catch (const OutsideValidityRegionError&) {
      row.closed_form_t = std::nullopt;
      // Outside the validity region the active-set solver stands in.
      const double solver_t = optimal_split(cluster, rate).response_time;
      row.closed_form_ok = std::abs(solver_t - row.oracle_t) / row.oracle_t < 1e-6;
    }
    report.all_pass = report.all_pass && row.ordering_ok && row.closed_form_ok;

    char line[160];
    std::snprintf(line, sizeof(line), "%-13.6g %-13.9g %-13.9g %-14s %-9s %s\n", lambda,
                  row.oracle_t, row.proportional_t,
                  row.closed_form_t ? format_double(*row.closed_form_t).c_str() : "n/a",
                  row.ordering_ok ? "PASS" : "FAIL", row.closed_form_ok ? "PASS" : "FAIL");
    out << line;
    report.rows.push_back(row);
  }
  out << (report.all_pass ? "RESULT: PASS\n" : "RESULT: FAIL\n");
  report.text = out.str();
  return report;
}

std::vector<SweepRow> cmd_simulate(const ExperimentConfig& config) {
  const ClusterSpec cluster = config.cluster();
  std::vector<SweepRow> rows;
  for (double lambda : config.lambdas) {
    const ArrivalRate rate(lambda);
    const double rho = utilization(cluster, rate);
    const auto regime = optimum_with_regime(cluster, lambda).second;
    for (const auto& policy : config.policies) {
      SweepRow row{};
      row.scenario = config.label;
      row.policy = policy;
      row.lambda = lambda;
      row.rho = rho;
      row.seed = config.sim.seed;
      row.regime = regime;

      try {
        if (policy == "halo_rnd") {
          row.analytic_t = optimal_split(cluster, rate).response_time;
        } else if (policy == "rnd") {
          const std::size_t n = cluster.total_servers();
          std::vector<double> group_probs;
          for (const auto& g : cluster.groups()) {
            group_probs.push_back(static_cast<double>(g.count) / static_cast<double>(n));
          }
          row.analytic_t = mean_response_time(cluster, rate, LoadSplit(group_probs));
        }

        // Known stationary splits are pre-checked so an unstable cell is
        // reported instead of simulated into divergence.
        if (policy_has_known_split(policy)) {
          const Dispatcher probe = build_policy(policy, cluster, rate, config.sim.seed);
          std::vector<double> weights = probe.config().weights;
          if (weights.empty()) {  // plain rr: uniform fractions
            weights.assign(cluster.total_servers(),
                           1.0 / static_cast<double>(cluster.total_servers()));
          }
          std::size_t server = 0;
          for (std::size_t g = 0; g < cluster.num_groups(); ++g) {
            const auto& grp = cluster.groups()[g];
            for (std::size_t s = 0; s < grp.count; ++s, ++server) {
              if (weights[server] > 0.0 && lambda * weights[server] >= grp.speed) {
                throw SaturatedRunError();
              }
            }
          }
        } else if (rho >= 1.0) {
          throw SaturatedRunError();
        }

        const SimResult sim =
            run_simulation(cluster, rate, config.service, policy, config.sim);
        row.simulated_t = sim.mean_response_time;
        row.ci_halfwidth = sim.ci_halfwidth;
        row.jobs_counted = sim.jobs_counted;
      } catch (const UnstableError&) {
        row.analytic_t = std::nullopt;
        row.error = "SaturatedRun";
      } catch (const SaturatedRunError&) {
        row.error = "SaturatedRun";
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.scenario << ',' << r.policy << ',' << format_double(r.lambda) << ','
        << format_double(r.rho) << ',' << (r.analytic_t ? format_double(*r.analytic_t) : "")
        << ',' << (r.simulated_t ? format_double(*r.simulated_t) : "") << ','
        << (r.ci_halfwidth ? format_double(*r.ci_halfwidth) : "") << ','
        << (r.jobs_counted ? std::to_string(*r.jobs_counted) : "") << ','
        << std::to_string(r.seed) << ',' << r.regime << ',' << r.error << '\n';
  }
  return out.str();
}

SplitReport cmd_split(const ExperimentConfig& config, double lambda) {
  const ClusterSpec cluster = config.cluster();
  const SplitSolution solution = optimal_split(cluster, ArrivalRate(lambda));
  SplitReport report;
  report.probabilities = solution.split.probabilities();
  report.response_time = solution.response_time;
  report.active_groups = solution.active_groups;
  report.regime = optimum_with_regime(cluster, lambda).second;
  return report;
}

}  // namespace halo
