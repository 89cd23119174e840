#include "riskurn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "riskurn/version.hpp"

namespace riskurn {

namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line, char delim) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, delim)) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == delim) fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
  return value;
}

std::size_t parse_size(const std::string& s) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("malformed integer '" + s + "'");
  }
  return value;
}

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json bins_to_json(const std::vector<BinStats>& bins) {
  json out = json::array();
  for (const BinStats& bin : bins) {
    out.push_back({{"lower", bin.lower},
                   {"upper", bin.upper},
                   {"count", bin.count},
                   {"mean_score", optional_to_json(bin.mean_score)},
                   {"observed_rate", optional_to_json(bin.observed_rate)}});
  }
  return out;
}

std::vector<BinStats> bins_from_json(const json& j) {
  std::vector<BinStats> bins;
  for (const json& b : j) {
    BinStats bin;
    bin.lower = b.at("lower").get<double>();
    bin.upper = b.at("upper").get<double>();
    bin.count = b.at("count").get<std::size_t>();
    bin.mean_score = optional_from_json(b.at("mean_score"));
    bin.observed_rate = optional_from_json(b.at("observed_rate"));
    bins.push_back(bin);
  }
  return bins;
}

}  // namespace

std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw std::runtime_error("double formatting failed");
  }
  return std::string(buffer, ptr);
}

char delimiter_for(const std::string& format) {
  if (format == "csv") return ',';
  if (format == "tsv") return '\t';
  throw std::invalid_argument("unknown tabular format '" + format + "'");
}

void write_paths_csv(std::ostream& out,
                     std::span<const DefendantTrajectory> paths, char delim) {
  out << "path_id" << delim << "step" << delim << "p" << delim << "x" << '\n';
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const DefendantTrajectory& traj = paths[id];
    for (std::size_t s = 0; s < traj.horizon(); ++s) {
      out << id << delim << s + 1 << delim
          << format_double(traj.probabilities[s]) << delim
          << (is_high_risk(traj.classifications[s]) ? 1 : 0) << '\n';
    }
  }
}

void write_trajectories_csv(std::ostream& out, const CohortResult& result,
                            char delim) {
  if (!result.has_full_paths()) {
    throw std::invalid_argument("full paths required");
  }
  out << "path_id" << delim << "step" << delim << "p" << delim << "x" << delim
      << "group" << '\n';
  for (std::size_t d = 0; d < result.trajectories.size(); ++d) {
    const DefendantTrajectory& traj = result.trajectories[d];
    const std::string& group = result.group_name(d);
    for (std::size_t s = 0; s < traj.horizon(); ++s) {
      out << d << delim << s + 1 << delim
          << format_double(traj.probabilities[s]) << delim
          << (is_high_risk(traj.classifications[s]) ? 1 : 0) << delim << group
          << '\n';
    }
  }
}

void write_endpoints_csv(std::ostream& out, const CohortResult& result,
                         char delim) {
  out << "path_id" << delim << "p_final" << delim << "group" << '\n';
  for (std::size_t d = 0; d < result.final_probabilities.size(); ++d) {
    out << d << delim << format_double(result.final_probabilities[d]) << delim
        << result.group_name(d) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, std::span<const double> values,
                         std::size_t bins, char delim) {
  if (bins == 0) {
    throw std::invalid_argument("histogram needs at least one bin");
  }
  std::vector<std::size_t> counts(bins, 0);
  for (const double v : values) {
    auto b = static_cast<std::size_t>(v * static_cast<double>(bins));
    counts[std::min(b, bins - 1)] += 1;
  }
  const double width = 1.0 / static_cast<double>(bins);
  const double total = static_cast<double>(values.size());
  out << "bin_low" << delim << "bin_high" << delim << "count" << delim
      << "density" << '\n';
  for (std::size_t b = 0; b < bins; ++b) {
    const double density =
        total > 0.0 ? static_cast<double>(counts[b]) / (total * width) : 0.0;
    out << format_double(width * static_cast<double>(b)) << delim
        << format_double(b + 1 == bins ? 1.0 : width * static_cast<double>(b + 1))
        << delim << counts[b] << delim << format_double(density) << '\n';
  }
}

void write_disparity_csv(std::ostream& out,
                         std::span<const DisparityRecord> curve, char delim) {
  out << "t" << delim << "group_a" << delim << "group_b" << delim << "gap"
      << delim << "se" << '\n';
  for (const DisparityRecord& record : curve) {
    for (const PairDisparity& pair : record.pairs) {
      out << record.time << delim << pair.group_a << delim << pair.group_b
          << delim << format_double(pair.rate_gap) << delim
          << format_double(pair.rate_gap_se) << '\n';
    }
  }
}

std::vector<EndpointRow> read_endpoints_csv(std::istream& in, char delim) {
  std::vector<EndpointRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line, delim);
    if (fields.size() != 3) {
      throw std::invalid_argument("malformed endpoint row '" + line + "'");
    }
    rows.push_back({parse_size(fields[0]), parse_double(fields[1]), fields[2]});
  }
  return rows;
}

std::vector<TrajectoryRow> read_trajectories_csv(std::istream& in,
                                                 bool with_group, char delim) {
  std::vector<TrajectoryRow> rows;
  std::string line;
  if (!std::getline(in, line)) return rows;  // header
  const std::size_t expected = with_group ? 5 : 4;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line, delim);
    if (fields.size() != expected) {
      throw std::invalid_argument("malformed trajectory row '" + line + "'");
    }
    TrajectoryRow row;
    row.path_id = parse_size(fields[0]);
    row.step = parse_size(fields[1]);
    row.p = parse_double(fields[2]);
    row.x = static_cast<int>(parse_size(fields[3]));
    if (with_group) row.group = fields[4];
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const GoodnessOfFitResult& r) {
  return json{{"statistic", r.statistic},
              {"sample_size", r.sample_size},
              {"threshold", r.threshold},
              {"passed", r.passed}};
}

GoodnessOfFitResult gof_from_json(const json& j) {
  GoodnessOfFitResult r;
  r.statistic = j.at("statistic").get<double>();
  r.sample_size = j.at("sample_size").get<std::size_t>();
  r.threshold = j.at("threshold").get<double>();
  r.passed = j.at("passed").get<bool>();
  return r;
}

json to_json(const ValidationReport& r) {
  json groups = json::array();
  for (const GroupValidation& g : r.per_group) {
    groups.push_back({{"group", g.group},
                      {"count", g.count},
                      {"auc", optional_to_json(g.auc)},
                      {"per_bin", bins_to_json(g.per_bin)},
                      {"scored_above_threshold", g.scored_above_threshold},
                      {"high_risk_rate", g.high_risk_rate},
                      {"outcome_rate", g.outcome_rate}});
  }
  return json{{"snapshot",
               {{"time", r.spec.time},
                {"lookahead", r.spec.lookahead},
                {"bins", r.spec.bins},
                {"threshold", r.spec.threshold}}},
              {"sample_size", r.sample_size},
              {"per_bin", bins_to_json(r.per_bin)},
              {"auc", optional_to_json(r.auc)},
              {"calibration_gap", r.calibration_gap},
              {"per_group", std::move(groups)},
              {"statistical_parity_gap", r.statistical_parity_gap},
              {"classification_rate_gap", r.classification_rate_gap},
              {"predictive_parity_gap", r.predictive_parity_gap}};
}

ValidationReport validation_report_from_json(const json& j) {
  ValidationReport r;
  const json& spec = j.at("snapshot");
  r.spec.time = spec.at("time").get<std::size_t>();
  r.spec.lookahead = spec.at("lookahead").get<std::size_t>();
  r.spec.bins = spec.at("bins").get<std::size_t>();
  r.spec.threshold = spec.at("threshold").get<double>();
  r.sample_size = j.at("sample_size").get<std::size_t>();
  r.per_bin = bins_from_json(j.at("per_bin"));
  r.auc = optional_from_json(j.at("auc"));
  r.calibration_gap = j.at("calibration_gap").get<double>();
  for (const json& g : j.at("per_group")) {
    GroupValidation gv;
    gv.group = g.at("group").get<std::string>();
    gv.count = g.at("count").get<std::size_t>();
    gv.auc = optional_from_json(g.at("auc"));
    gv.per_bin = bins_from_json(g.at("per_bin"));
    gv.scored_above_threshold = g.at("scored_above_threshold").get<double>();
    gv.high_risk_rate = g.at("high_risk_rate").get<double>();
    gv.outcome_rate = g.at("outcome_rate").get<double>();
    r.per_group.push_back(std::move(gv));
  }
  r.statistical_parity_gap = j.at("statistical_parity_gap").get<double>();
  r.classification_rate_gap = j.at("classification_rate_gap").get<double>();
  r.predictive_parity_gap = j.at("predictive_parity_gap").get<double>();
  return r;
}

json to_json(const DisparityRecord& r) {
  json groups = json::array();
  for (const GroupDisparityStat& g : r.groups) {
    groups.push_back({{"group", g.group},
                      {"count", g.count},
                      {"mean_probability", g.mean_probability},
                      {"score_fraction", g.score_fraction},
                      {"high_risk_rate", g.high_risk_rate}});
  }
  json pairs = json::array();
  for (const PairDisparity& p : r.pairs) {
    pairs.push_back({{"group_a", p.group_a},
                     {"group_b", p.group_b},
                     {"score_gap", p.score_gap},
                     {"rate_gap", p.rate_gap},
                     {"rate_gap_se", p.rate_gap_se}});
  }
  return json{{"time", r.time},
              {"threshold", r.threshold},
              {"groups", std::move(groups)},
              {"pairs", std::move(pairs)}};
}

json to_json(const AmplificationReport& r) {
  const auto finite_or_null = [](double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
  };
  return json{{"snapshot_report", to_json(r.snapshot)},
              {"snapshot_gap", r.snapshot_gap},
              {"final_gap", r.final_gap},
              {"ratio", finite_or_null(r.ratio)},
              {"ci_low", finite_or_null(r.ci_low)},
              {"ci_high", finite_or_null(r.ci_high)},
              {"bootstrap_resamples", r.bootstrap_resamples},
              {"ci_level", r.ci_level}};
}

void write_manifest(const std::filesystem::path& directory,
                    const std::string& command, std::uint64_t seed,
                    const json& config_echo) {
  const json manifest{{"command", command},
                      {"version", version},
                      {"seed", seed},
                      {"config", config_echo}};
  std::ofstream out(directory / "manifest.json", std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write manifest in '" + directory.string() + "'");
  }
  out << manifest.dump(2) << '\n';
}

}  // namespace riskurn
