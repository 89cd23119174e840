#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "riskurn/cohort.hpp"
#include "riskurn/config.hpp"
#include "riskurn/ks.hpp"
#include "riskurn/validation.hpp"

// Tabular emitters/readers and JSON report serialization. Tabular files are
// delimiter-separated with a single header row, UTF-8, LF line endings.
// Doubles are written in shortest round-trip form so re-parsing an emitted
// file reproduces the in-memory values exactly.

namespace riskurn {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

char delimiter_for(const std::string& format);  // "csv" -> ',', "tsv" -> '\t'

// path_id,step,p,x  (cmd `path`: raw trajectories without group labels)
void write_paths_csv(std::ostream& out, std::span<const DefendantTrajectory> paths,
                     char delim = ',');

// path_id,step,p,x,group
void write_trajectories_csv(std::ostream& out, const CohortResult& result,
                            char delim = ',');

// path_id,p_final,group
void write_endpoints_csv(std::ostream& out, const CohortResult& result,
                         char delim = ',');

// bin_low,bin_high,count,density  (equal-width bins over [0, 1])
void write_histogram_csv(std::ostream& out, std::span<const double> values,
                         std::size_t bins, char delim = ',');

// t,group_a,group_b,gap,se  (one row per group pair per time; `gap` is the
// high-risk classification-rate gap)
void write_disparity_csv(std::ostream& out,
                         std::span<const DisparityRecord> curve,
                         char delim = ',');

struct EndpointRow {
  std::size_t path_id;
  double p_final;
  std::string group;

  bool operator==(const EndpointRow&) const = default;
};

std::vector<EndpointRow> read_endpoints_csv(std::istream& in, char delim = ',');

struct TrajectoryRow {
  std::size_t path_id;
  std::size_t step;
  double p;
  int x;
  std::string group;

  bool operator==(const TrajectoryRow&) const = default;
};

std::vector<TrajectoryRow> read_trajectories_csv(std::istream& in,
                                                 bool with_group,
                                                 char delim = ',');

nlohmann::json to_json(const GoodnessOfFitResult& r);
GoodnessOfFitResult gof_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ValidationReport& r);
ValidationReport validation_report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const DisparityRecord& r);
nlohmann::json to_json(const AmplificationReport& r);

// Run provenance: exact config echo, seed, artifact version, command line.
void write_manifest(const std::filesystem::path& directory,
                    const std::string& command, std::uint64_t seed,
                    const nlohmann::json& config_echo);

}  // namespace riskurn
