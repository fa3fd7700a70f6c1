#include "halo/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "halo/policy.hpp"

namespace halo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) {
      throw ParseError("unknown field '" + key + "' in " + where);
    }
  }
}

double require_number(const json& obj, const std::string& field, const std::string& where) {
  if (!obj.contains(field)) throw ParseError("missing field '" + field + "' in " + where);
  if (!obj[field].is_number()) {
    throw ParseError("field '" + field + "' in " + where + " must be a number");
  }
  return obj[field].get<double>();
}

std::vector<double> parse_lambdas(const json& value) {
  std::vector<double> lambdas;
  if (value.is_array()) {
    for (const auto& v : value) {
      if (!v.is_number()) throw ParseError("lambdas entries must be numbers");
      lambdas.push_back(v.get<double>());
    }
  } else if (value.is_object()) {
    reject_unknown(value, {"from", "to", "steps"}, "lambdas");
    const double from = require_number(value, "from", "lambdas");
    const double to = require_number(value, "to", "lambdas");
    const double steps_d = require_number(value, "steps", "lambdas");
    const auto steps = static_cast<long>(steps_d);
    if (steps < 1 || steps_d != static_cast<double>(steps)) {
      throw ParseError("lambdas.steps must be a positive integer");
    }
    if (steps == 1) {
      lambdas.push_back(from);
    } else {
      for (long i = 0; i < steps; ++i) {
        lambdas.push_back(from + (to - from) * static_cast<double>(i) /
                                     static_cast<double>(steps - 1));
      }
    }
  } else {
    throw ParseError("lambdas must be an array or a {from, to, steps} object");
  }
  return lambdas;
}

ServiceDistribution parse_service(const json& value) {
  if (!value.is_object()) throw ParseError("service must be an object");
  reject_unknown(value, {"kind", "sigma", "shape", "bound_ratio"}, "service");
  if (!value.contains("kind") || !value["kind"].is_string()) {
    throw ParseError("service.kind must be a string");
  }
  const std::string kind = value["kind"].get<std::string>();
  const double sigma = value.contains("sigma") ? require_number(value, "sigma", "service") : 1.0;
  const double shape = value.contains("shape") ? require_number(value, "shape", "service") : 1.5;
  const double ratio =
      value.contains("bound_ratio") ? require_number(value, "bound_ratio", "service") : 100.0;
  try {
    return ServiceDistribution::parse(kind, sigma, shape, ratio);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
}

SimConfig parse_sim(const json& value) {
  if (!value.is_object()) throw ParseError("sim must be an object");
  reject_unknown(value, {"total_jobs", "warmup_fraction", "replications", "seed", "batch_count"},
                 "sim");
  SimConfig sim;
  if (value.contains("total_jobs")) {
    sim.total_jobs = static_cast<std::uint64_t>(require_number(value, "total_jobs", "sim"));
  }
  if (value.contains("warmup_fraction")) {
    sim.warmup_fraction = require_number(value, "warmup_fraction", "sim");
  }
  if (value.contains("replications")) {
    sim.replications = static_cast<std::uint32_t>(require_number(value, "replications", "sim"));
  }
  if (value.contains("seed")) {
    sim.seed = static_cast<std::uint64_t>(require_number(value, "seed", "sim"));
  }
  if (value.contains("batch_count")) {
    sim.batch_count = static_cast<std::uint32_t>(require_number(value, "batch_count", "sim"));
  }
  if (sim.warmup_fraction < 0.0 || sim.warmup_fraction > 0.5) {
    throw ValidationError("sim.warmup_fraction must lie in [0, 0.5]");
  }
  if (sim.total_jobs < static_cast<std::uint64_t>(sim.batch_count) * 100) {
    throw ValidationError("sim.total_jobs must be at least batch_count * 100");
  }
  if (sim.replications < 1) throw ValidationError("sim.replications must be >= 1");
  return sim;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");
  reject_unknown(doc, {"label", "groups", "lambdas", "policies", "service", "sim", "output_dir"},
                 "config");

  ExperimentConfig config;
  config.label = doc.value("label", std::filesystem::path(path).stem().string());

  if (!doc.contains("groups") || !doc["groups"].is_array() || doc["groups"].empty()) {
    throw ParseError("groups must be a non-empty array");
  }
  for (const auto& g : doc["groups"]) {
    if (!g.is_object()) throw ParseError("groups entries must be objects");
    reject_unknown(g, {"count", "speed"}, "groups entry");
    const double count_d = require_number(g, "count", "groups entry");
    const double speed = require_number(g, "speed", "groups entry");
    const auto count = static_cast<long>(count_d);
    if (count < 1 || count_d != static_cast<double>(count)) {
      throw ValidationError("group count must be a positive integer");
    }
    if (!(speed > 0.0) || !std::isfinite(speed)) {
      throw ValidationError("group speed must be positive and finite");
    }
    config.groups.push_back(GroupSpec{static_cast<std::size_t>(count), speed});
  }

  if (!doc.contains("lambdas")) throw ParseError("missing field 'lambdas'");
  config.lambdas = parse_lambdas(doc["lambdas"]);
  if (config.lambdas.empty()) throw ValidationError("at least one lambda is required");

  if (!doc.contains("policies") || !doc["policies"].is_array()) {
    throw ParseError("policies must be an array of policy names");
  }
  for (const auto& p : doc["policies"]) {
    if (!p.is_string()) throw ParseError("policies entries must be strings");
    const std::string name = p.get<std::string>();
    if (!is_valid_policy_name(name)) throw ValidationError("unknown policy name: " + name);
    config.policies.push_back(name);
  }
  if (config.policies.empty()) throw ValidationError("at least one policy is required");

  if (doc.contains("service")) config.service = parse_service(doc["service"]);
  if (doc.contains("sim")) config.sim = parse_sim(doc["sim"]);
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) throw ParseError("output_dir must be a string");
    config.output_dir = doc["output_dir"].get<std::string>();
  }

  const double capacity = config.cluster().total_capacity();
  for (double lambda : config.lambdas) {
    if (!(lambda > 0.0) || lambda >= capacity) {
      throw ValidationError("lambda " + std::to_string(lambda) +
                            " must satisfy 0 < lambda < capacity " + std::to_string(capacity));
    }
  }
  return config;
}

}  // namespace halo
