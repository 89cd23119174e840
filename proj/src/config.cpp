#include "riskurn/config.hpp"

#include <fstream>

namespace riskurn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& j, const std::string& path, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

double number_field(const json& j, const std::string& path, const char* key) {
  return number_at(member(j, path, key), path + "." + key);
}

std::uint64_t unsigned_field(const json& j, const std::string& path,
                             const char* key, std::uint64_t fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_number_integer() ||
      (it->is_number_integer() && !it->is_number_unsigned() &&
       it->get<std::int64_t>() < 0)) {
    fail(path + "." + key, "expected a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

bool bool_field(const json& j, const std::string& path, const char* key,
                bool fallback) {
  const auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
  return it->get<bool>();
}

std::string string_field(const json& j, const std::string& path, const char* key) {
  const json& v = member(j, path, key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

UrnParameters parse_urn(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  UrnParameters params;
  params.blue_initial = number_field(j, path, "b0");
  params.red_initial = number_field(j, path, "r0");
  params.increment = number_field(j, path, "k");
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return params;
}

json urn_to_json(const UrnParameters& params) {
  return json{{"b0", params.blue_initial},
              {"r0", params.red_initial},
              {"k", params.increment}};
}

GroupSpec parse_group(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  GroupSpec group;
  group.name = string_field(j, path, "name");
  group.fraction = number_field(j, path, "fraction");
  if (j.contains("bias")) {
    group.bias = number_field(j, path, "bias");
  }
  if (j.contains("urn")) {
    group.initial_override = parse_urn(j.at("urn"), path + ".urn");
  }
  return group;
}

SnapshotSpec parse_snapshot(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  SnapshotSpec spec;
  spec.time = unsigned_field(j, path, "time", 1);
  spec.lookahead = unsigned_field(j, path, "lookahead", 1);
  spec.bins = unsigned_field(j, path, "bins", 10);
  if (j.contains("threshold")) {
    spec.threshold = number_field(j, path, "threshold");
  }
  return spec;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
  if (!doc.is_object()) fail("config", "expected a JSON object");

  ExperimentConfig config;
  config.cohort.params = parse_urn(member(doc, "config", "urn"), "urn");

  const json& cohort = member(doc, "config", "cohort");
  if (!cohort.is_object()) fail("cohort", "expected an object");
  config.cohort.population =
      static_cast<std::size_t>(unsigned_field(cohort, "cohort", "population", 0));
  config.cohort.horizon =
      static_cast<std::size_t>(unsigned_field(cohort, "cohort", "horizon", 0));
  config.cohort.master_seed = unsigned_field(cohort, "cohort", "seed", 0);
  config.cohort.record_full_paths =
      bool_field(cohort, "cohort", "record_full_paths", true);

  if (doc.contains("groups")) {
    const json& groups = doc.at("groups");
    if (!groups.is_array() || groups.empty()) {
      fail("groups", "expected a non-empty array");
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      config.cohort.groups.push_back(
          parse_group(groups[g], "groups[" + std::to_string(g) + "]"));
    }
  } else {
    // Documented default: one unbiased group covering the whole cohort.
    config.cohort.groups.push_back({"all", 1.0, 0.0, std::nullopt});
  }

  try {
    config.cohort.validate();
  } catch (const std::invalid_argument& e) {
    fail("cohort", e.what());
  }

  if (doc.contains("snapshot")) {
    config.snapshot = parse_snapshot(doc.at("snapshot"), "snapshot");
    try {
      config.snapshot->validate(config.cohort.horizon);
    } catch (const std::invalid_argument& e) {
      fail("snapshot", e.what());
    }
  }

  if (doc.contains("output")) {
    const json& output = doc.at("output");
    if (!output.is_object()) fail("output", "expected an object");
    if (output.contains("directory")) {
      config.output.directory = string_field(output, "output", "directory");
    }
    if (output.contains("format")) {
      config.output.format = string_field(output, "output", "format");
      if (config.output.format != "csv" && config.output.format != "tsv") {
        fail("output.format", "expected \"csv\" or \"tsv\"");
      }
    }
  }
  return config;
}

json ExperimentConfig::to_json() const {
  json doc;
  doc["urn"] = urn_to_json(cohort.params);
  doc["cohort"] = {{"population", cohort.population},
                   {"horizon", cohort.horizon},
                   {"seed", cohort.master_seed},
                   {"record_full_paths", cohort.record_full_paths}};
  json groups = json::array();
  for (const GroupSpec& group : cohort.groups) {
    json g{{"name", group.name}, {"fraction", group.fraction}, {"bias", group.bias}};
    if (group.initial_override) {
      g["urn"] = urn_to_json(*group.initial_override);
    }
    groups.push_back(std::move(g));
  }
  doc["groups"] = std::move(groups);
  if (snapshot) {
    doc["snapshot"] = {{"time", snapshot->time},
                       {"lookahead", snapshot->lookahead},
                       {"bins", snapshot->bins},
                       {"threshold", snapshot->threshold}};
  }
  doc["output"] = {{"directory", output.directory.string()},
                   {"format", output.format}};
  return doc;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("config: cannot open '" + file.string() + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return from_json(doc);
}

}  // namespace riskurn
