// halosim: analytic + simulation front end for heterogeneity-aware load
// balancing experiments.
//
// Subcommands:
//   analyze   closed-form table (T at the proportional split vs optimum)
//   validate  cross-check closed forms against the brute-force oracle
//   simulate  run the discrete-event sweep, write sweep.csv
//   chart     render scenario SVG charts
//   split     print the optimal split for one lambda

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "halo/config.hpp"
#include "halo/report.hpp"
#include "halo/svg.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitAllSaturated = 3;

halo::ExperimentConfig load_or_exit(const std::string& path) {
  try {
    return halo::load_config(path);
  } catch (const halo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    std::exit(kExitConfigError);
  }
}

void apply_overrides(halo::ExperimentConfig& config, const std::string& out_dir,
                     long long seed_flag) {
  if (!out_dir.empty()) config.output_dir = out_dir;
  if (seed_flag >= 0) config.sim.seed = static_cast<std::uint64_t>(seed_flag);
  if (const char* env = std::getenv("HALOSIM_SEED")) {
    config.sim.seed = std::strtoull(env, nullptr, 10);
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << path << '\n';
    std::exit(kExitConfigError);
  }
  out << contents;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heterogeneity-aware load balancing toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  long long seed_flag = -1;
  double resolution = 1e-3;
  double lambda = 0.0;

  auto* analyze = app.add_subcommand("analyze", "closed-form response time table");
  analyze->add_option("--config", config_path)->required();
  analyze->add_option("--out", out_dir);

  auto* validate = app.add_subcommand("validate", "oracle cross-check of the closed forms");
  validate->add_option("--config", config_path)->required();
  validate->add_option("--resolution", resolution)->check(CLI::Range(1e-6, 0.01));

  auto* simulate = app.add_subcommand("simulate", "discrete-event simulation sweep");
  simulate->add_option("--config", config_path)->required();
  simulate->add_option("--out", out_dir);
  simulate->add_option("--seed", seed_flag);

  auto* chart = app.add_subcommand("chart", "render scenario SVG chart");
  chart->add_option("--config", config_path)->required();
  chart->add_option("--out", out_dir)->required();

  auto* split = app.add_subcommand("split", "optimal split for one lambda");
  split->add_option("--config", config_path)->required();
  split->add_option("--lambda", lambda)->required();

  CLI11_PARSE(app, argc, argv);

  auto config = load_or_exit(config_path);
  apply_overrides(config, out_dir, seed_flag);
  const std::filesystem::path out(config.output_dir);

  if (*analyze) {
    const auto rows = halo::cmd_analyze(config);
    const std::string csv = halo::analyze_csv(rows);
    std::cout << csv;
    write_file(out / "analyze.csv", csv);
    return kExitOk;
  }

  if (*validate) {
    const auto report = halo::cmd_validate(config, resolution);
    std::cout << report.text;
    return report.all_pass ? kExitOk : kExitValidationFailure;
  }

  if (*simulate) {
    const auto rows = halo::cmd_simulate(config);
    const std::string csv = halo::sweep_csv(rows);
    write_file(out / "sweep.csv", csv);
    std::cout << csv;
    bool any_ok = false;
    for (const auto& row : rows) {
      if (row.error.empty()) any_ok = true;
    }
    return any_ok ? kExitOk : kExitAllSaturated;
  }

  if (*chart) {
    const auto analytic = halo::cmd_analyze(config);
    std::vector<halo::SweepRow> simulated;  // overlay sweep.csv points when present
    // The chart uses analytic curves always; simulated overlays come from a
    // prior `simulate` run in the same output directory.
    // Parsing is intentionally minimal: the file is our own dialect.
    const std::filesystem::path sweep_path = out / "sweep.csv";
    if (std::filesystem::exists(sweep_path)) {
      std::ifstream in(sweep_path);
      std::string line;
      std::getline(in, line);  // header
      while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i) {
          if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
          }
        }
        if (fields.size() < 11 || fields[5].empty()) continue;
        halo::SweepRow row{};
        row.scenario = fields[0];
        row.policy = fields[1];
        row.lambda = std::strtod(fields[2].c_str(), nullptr);
        row.simulated_t = std::strtod(fields[5].c_str(), nullptr);
        if (!fields[6].empty()) row.ci_halfwidth = std::strtod(fields[6].c_str(), nullptr);
        simulated.push_back(std::move(row));
      }
    }
    write_file(out / (config.label + ".svg"), halo::render_chart(analytic, simulated));
    return kExitOk;
  }

  if (*split) {
    try {
      const auto report = halo::cmd_split(config, lambda);
      std::cout << "lambda: " << halo::format_double(lambda) << '\n';
      std::cout << "regime: " << report.regime << '\n';
      std::cout << "T: " << halo::format_double(report.response_time) << '\n';
      for (std::size_t i = 0; i < report.probabilities.size(); ++i) {
        std::cout << "p[" << i << "]: " << halo::format_double(report.probabilities[i])
                  << '\n';
      }
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitConfigError;
    }
    return kExitOk;
  }

  return kExitOk;
}
