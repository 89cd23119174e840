#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "riskurn/cohort.hpp"
#include "riskurn/validation.hpp"

namespace riskurn {

// Configuration error with the offending field path in the message,
// e.g. "groups[1].fraction: must be in (0, 1]".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputOptions {
  std::filesystem::path directory = "out";
  std::string format = "csv";  // csv | tsv

  bool operator==(const OutputOptions&) const = default;
};

// One experiment document. Sections: urn, cohort, groups, snapshot, output.
// A missing groups section defaults to a single unbiased group covering the
// whole cohort.
struct ExperimentConfig {
  CohortConfig cohort;
  std::optional<SnapshotSpec> snapshot;
  OutputOptions output;

  static ExperimentConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;

  // Parses a JSON document from disk; throws ConfigError with a
  // field-addressed message on any problem.
  static ExperimentConfig load(const std::filesystem::path& file);

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace riskurn
