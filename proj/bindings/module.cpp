#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "riskurn/beta.hpp"
#include "riskurn/cohort.hpp"
#include "riskurn/config.hpp"
#include "riskurn/enumeration.hpp"
#include "riskurn/ks.hpp"
#include "riskurn/rng.hpp"
#include "riskurn/urn.hpp"
#include "riskurn/validation.hpp"
#include "riskurn/version.hpp"

namespace py = pybind11;
using namespace riskurn;

namespace {

std::vector<int> classifications_to_ints(const std::vector<Classification>& xs) {
  std::vector<int> out;
  out.reserve(xs.size());
  for (const Classification x : xs) out.push_back(is_high_risk(x) ? 1 : 0);
  return out;
}

// Exact rationals cross the boundary as fractions.Fraction, losslessly.
py::object to_fraction(const rational& r) {
  static py::object fraction_type =
      py::module_::import("fractions").attr("Fraction");
  return fraction_type(r.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Reinforced risk-scoring simulator and audit harness";
  m.attr("__version__") = version;

  py::class_<UrnParameters>(m, "UrnParameters")
      .def(py::init([](double b0, double r0, double k) {
             UrnParameters p{b0, r0, k};
             p.validate();
             return p;
           }),
           py::arg("b0") = 1.0, py::arg("r0") = 1.0, py::arg("k") = 1.0)
      .def_readonly("b0", &UrnParameters::blue_initial)
      .def_readonly("r0", &UrnParameters::red_initial)
      .def_readonly("k", &UrnParameters::increment)
      .def("__repr__", [](const UrnParameters& p) {
        return "UrnParameters(b0=" + std::to_string(p.blue_initial) +
               ", r0=" + std::to_string(p.red_initial) +
               ", k=" + std::to_string(p.increment) + ")";
      });

  py::class_<UrnState>(m, "UrnState")
      .def(py::init([](double blue, double red, std::uint64_t step) {
             return UrnState{blue, red, step};
           }),
           py::arg("blue"), py::arg("red"), py::arg("step") = 0)
      .def_readonly("blue", &UrnState::blue)
      .def_readonly("red", &UrnState::red)
      .def_readonly("step", &UrnState::step);

  py::class_<DefendantTrajectory>(m, "DefendantTrajectory")
      .def_readonly("probabilities", &DefendantTrajectory::probabilities)
      .def_property_readonly("classifications",
                             [](const DefendantTrajectory& t) {
                               return classifications_to_ints(t.classifications);
                             })
      .def_readonly("seed", &DefendantTrajectory::seed)
      .def_property_readonly("endpoint", &DefendantTrajectory::endpoint)
      .def("__len__", &DefendantTrajectory::horizon);

  m.def("initial_probability", &initial_probability, py::arg("params"));
  m.def("gamma_weight", &gamma_weight, py::arg("i"), py::arg("params"));
  m.def("classic_gamma_weight", &classic_gamma_weight, py::arg("i"));
  m.def(
      "update_probability",
      [](double p_prev, int x_prev, std::uint64_t i, const UrnParameters& params) {
        return update_probability(
            p_prev, x_prev ? Classification::high_risk : Classification::low_risk,
            i, params);
      },
      py::arg("p_prev"), py::arg("x_prev"), py::arg("i"), py::arg("params"));
  m.def(
      "step",
      [](const UrnState& state, const UrnParameters& params, double draw) {
        const auto [next, x] = step(state, params, draw);
        return py::make_tuple(next, is_high_risk(x) ? 1 : 0);
      },
      py::arg("state"), py::arg("params"), py::arg("draw"));
  m.def("counts_to_probability", &counts_to_probability, py::arg("state"));
  m.def("simulate_path", &simulate_path, py::arg("params"), py::arg("horizon"),
        py::arg("seed"));
  m.def(
      "enumerate_exact",
      [](const UrnParameters& params, std::size_t horizon) {
        py::list out;
        for (const ExactPath& path : enumerate_exact(params, horizon)) {
          out.append(py::make_tuple(classifications_to_ints(path.sequence),
                                    to_fraction(path.probability)));
        }
        return out;
      },
      py::arg("params"), py::arg("horizon"),
      "All classification sequences with exact fractional probabilities");

  py::class_<BetaParams>(m, "BetaParams")
      .def(py::init([](double alpha, double beta) {
             BetaParams p{alpha, beta};
             p.validate();
             return p;
           }),
           py::arg("alpha"), py::arg("beta"))
      .def_readonly("alpha", &BetaParams::alpha)
      .def_readonly("beta", &BetaParams::beta);

  m.def("limit_distribution", &limit_distribution, py::arg("params"));
  m.def("beta_pdf", &beta_pdf, py::arg("params"), py::arg("x"));
  m.def("beta_cdf", &beta_cdf, py::arg("params"), py::arg("x"));
  m.def("beta_moments", &beta_moments, py::arg("params"));

  py::class_<GoodnessOfFitResult>(m, "GoodnessOfFitResult")
      .def_readonly("statistic", &GoodnessOfFitResult::statistic)
      .def_readonly("sample_size", &GoodnessOfFitResult::sample_size)
      .def_readonly("threshold", &GoodnessOfFitResult::threshold)
      .def_readonly("passed", &GoodnessOfFitResult::passed);

  m.def(
      "ks_statistic",
      [](std::vector<double> samples, const std::function<double(double)>& cdf) {
        return ks_statistic(samples, cdf);
      },
      py::arg("samples"), py::arg("cdf"));
  m.def(
      "fit_limit_law",
      [](std::vector<double> endpoints, const UrnParameters& params,
         double significance) {
        return fit_limit_law(endpoints, params, significance);
      },
      py::arg("endpoints"), py::arg("params"), py::arg("significance") = 0.01);

  py::class_<GroupSpec>(m, "GroupSpec")
      .def(py::init([](std::string name, double fraction, double bias,
                       std::optional<UrnParameters> urn) {
             return GroupSpec{std::move(name), fraction, bias, std::move(urn)};
           }),
           py::arg("name"), py::arg("fraction") = 1.0, py::arg("bias") = 0.0,
           py::arg("urn") = std::nullopt)
      .def_readonly("name", &GroupSpec::name)
      .def_readonly("fraction", &GroupSpec::fraction)
      .def_readonly("bias", &GroupSpec::bias)
      .def_readonly("urn", &GroupSpec::initial_override);

  py::class_<CohortConfig>(m, "CohortConfig")
      .def(py::init([](std::size_t population, std::size_t horizon,
                       const UrnParameters& params, std::vector<GroupSpec> groups,
                       std::uint64_t seed, bool record_full_paths) {
             CohortConfig config{population, horizon,     params,
                                 std::move(groups), seed, record_full_paths};
             if (config.groups.empty()) {
               config.groups.push_back({"all", 1.0, 0.0, std::nullopt});
             }
             config.validate();
             return config;
           }),
           py::arg("population"), py::arg("horizon"),
           py::arg("params") = UrnParameters::classic(),
           py::arg("groups") = std::vector<GroupSpec>{}, py::arg("seed") = 0,
           py::arg("record_full_paths") = true)
      .def_readonly("population", &CohortConfig::population)
      .def_readonly("horizon", &CohortConfig::horizon)
      .def_readonly("params", &CohortConfig::params)
      .def_readonly("groups", &CohortConfig::groups)
      .def_readonly("seed", &CohortConfig::master_seed)
      .def_readonly("record_full_paths", &CohortConfig::record_full_paths);

  py::class_<CohortResult>(m, "CohortResult")
      .def_readonly("final_probabilities", &CohortResult::final_probabilities)
      .def_property_readonly("final_classifications",
                             [](const CohortResult& r) {
                               return classifications_to_ints(r.final_classifications);
                             })
      .def_property_readonly("groups",
                             [](const CohortResult& r) {
                               std::vector<std::string> names;
                               names.reserve(r.group_index.size());
                               for (std::size_t d = 0; d < r.group_index.size(); ++d) {
                                 names.push_back(r.group_name(d));
                               }
                               return names;
                             })
      .def_property_readonly("has_full_paths", &CohortResult::has_full_paths)
      .def_readonly("trajectories", &CohortResult::trajectories)
      .def("probability_at", &CohortResult::probability_at, py::arg("defendant"),
           py::arg("time"))
      .def(
          "classification_at",
          [](const CohortResult& r, std::size_t defendant, std::size_t time) {
            return is_high_risk(r.classification_at(defendant, time)) ? 1 : 0;
          },
          py::arg("defendant"), py::arg("time"));

  m.def("apply_bias", &apply_bias, py::arg("p"), py::arg("delta"));
  m.def("run_cohort", &run_cohort, py::arg("config"), py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<GroupDisparityStat>(m, "GroupDisparityStat")
      .def_readonly("group", &GroupDisparityStat::group)
      .def_readonly("count", &GroupDisparityStat::count)
      .def_readonly("mean_probability", &GroupDisparityStat::mean_probability)
      .def_readonly("score_fraction", &GroupDisparityStat::score_fraction)
      .def_readonly("high_risk_rate", &GroupDisparityStat::high_risk_rate);

  py::class_<PairDisparity>(m, "PairDisparity")
      .def_readonly("group_a", &PairDisparity::group_a)
      .def_readonly("group_b", &PairDisparity::group_b)
      .def_readonly("score_gap", &PairDisparity::score_gap)
      .def_readonly("rate_gap", &PairDisparity::rate_gap)
      .def_readonly("rate_gap_se", &PairDisparity::rate_gap_se);

  py::class_<DisparityRecord>(m, "DisparityRecord")
      .def_readonly("time", &DisparityRecord::time)
      .def_readonly("threshold", &DisparityRecord::threshold)
      .def_readonly("groups", &DisparityRecord::groups)
      .def_readonly("pairs", &DisparityRecord::pairs);

  m.def("group_disparity", &group_disparity, py::arg("result"), py::arg("time"),
        py::arg("threshold") = 0.5);
  m.def("disparity_curve", &disparity_curve, py::arg("result"),
        py::arg("threshold") = 0.5);

  py::class_<SnapshotSpec>(m, "SnapshotSpec")
      .def(py::init([](std::size_t time, std::size_t lookahead, std::size_t bins,
                       double threshold) {
             return SnapshotSpec{time, lookahead, bins, threshold};
           }),
           py::arg("time") = 1, py::arg("lookahead") = 1, py::arg("bins") = 10,
           py::arg("threshold") = 0.5)
      .def_readonly("time", &SnapshotSpec::time)
      .def_readonly("lookahead", &SnapshotSpec::lookahead)
      .def_readonly("bins", &SnapshotSpec::bins)
      .def_readonly("threshold", &SnapshotSpec::threshold);

  py::class_<BinStats>(m, "BinStats")
      .def_readonly("lower", &BinStats::lower)
      .def_readonly("upper", &BinStats::upper)
      .def_readonly("count", &BinStats::count)
      .def_readonly("mean_score", &BinStats::mean_score)
      .def_readonly("observed_rate", &BinStats::observed_rate);

  py::class_<GroupValidation>(m, "GroupValidation")
      .def_readonly("group", &GroupValidation::group)
      .def_readonly("count", &GroupValidation::count)
      .def_readonly("auc", &GroupValidation::auc)
      .def_readonly("per_bin", &GroupValidation::per_bin)
      .def_readonly("scored_above_threshold", &GroupValidation::scored_above_threshold)
      .def_readonly("high_risk_rate", &GroupValidation::high_risk_rate)
      .def_readonly("outcome_rate", &GroupValidation::outcome_rate);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("spec", &ValidationReport::spec)
      .def_readonly("sample_size", &ValidationReport::sample_size)
      .def_readonly("per_bin", &ValidationReport::per_bin)
      .def_readonly("auc", &ValidationReport::auc)
      .def_readonly("calibration_gap", &ValidationReport::calibration_gap)
      .def_readonly("per_group", &ValidationReport::per_group)
      .def_readonly("statistical_parity_gap", &ValidationReport::statistical_parity_gap)
      .def_readonly("classification_rate_gap", &ValidationReport::classification_rate_gap)
      .def_readonly("predictive_parity_gap", &ValidationReport::predictive_parity_gap);

  m.def(
      "auc",
      [](std::vector<double> scores, std::vector<int> outcomes) {
        return auc(scores, outcomes);
      },
      py::arg("scores"), py::arg("outcomes"));
  m.def("snapshot_validation", &snapshot_validation, py::arg("result"),
        py::arg("spec"));
  m.def("one_shot_power", &one_shot_power, py::arg("config"), py::arg("spec"),
        py::arg("repetitions"), py::arg("alpha") = 0.05, py::arg("threads") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<AmplificationReport>(m, "AmplificationReport")
      .def_readonly("snapshot", &AmplificationReport::snapshot)
      .def_readonly("curve", &AmplificationReport::curve)
      .def_readonly("snapshot_gap", &AmplificationReport::snapshot_gap)
      .def_readonly("final_gap", &AmplificationReport::final_gap)
      .def_readonly("ratio", &AmplificationReport::ratio)
      .def_readonly("ci_low", &AmplificationReport::ci_low)
      .def_readonly("ci_high", &AmplificationReport::ci_high)
      .def_readonly("bootstrap_resamples", &AmplificationReport::bootstrap_resamples)
      .def_readonly("ci_level", &AmplificationReport::ci_level);

  m.def(
      "amplification_report",
      [](const CohortResult& result, const SnapshotSpec& spec,
         std::size_t bootstrap_resamples, double ci_level,
         std::optional<std::uint64_t> seed) {
        AmplificationOptions options;
        options.bootstrap_resamples = bootstrap_resamples;
        options.ci_level = ci_level;
        options.seed = seed;
        return amplification_report(result, spec, options);
      },
      py::arg("result"), py::arg("spec"), py::arg("bootstrap_resamples") = 1000,
      py::arg("ci_level") = 0.99, py::arg("seed") = std::nullopt);

  m.def("stream_seed", &stream_seed, py::arg("master"), py::arg("domain"),
        py::arg("index"));
}
