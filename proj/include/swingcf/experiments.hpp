#pragma once

// Scenario orchestration: truth, observations, filters, metrics, export.

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "swingcf/filters.hpp"
#include "swingcf/swing_carleman.hpp"
#include "swingcf/swing_model.hpp"

namespace swingcf {

inline constexpr const char* kCodeVersion = "0.1.0";
/// Revision of docs/NOTES.md that the stored swing matrices correspond to.
inline constexpr const char* kDiscrepancyNotesVersion = "notes-1";

struct ScenarioConfig {
  std::string name = "custom";
  SwingParams params;
  SwingState init_state = SwingState::Zero();
  double init_Py1 = 0.0;
  double init_Py2 = 0.0;
  double init_Py1y2 = 0.0;
  Eigen::Vector2d init_mean_offset = Eigen::Vector2d::Zero();
  double dt = 1e-3;
  double horizon = 10.0;
  std::optional<Disturbance> disturbance;
  std::uint64_t seed = 1;
  std::vector<FilterKind> filters{FilterKind::carleman, FilterKind::ekf};

  void validate() const;
  FilterInit filter_init() const;
};

ScenarioConfig builtin_scenario(const std::string& name);

nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);
/// Builtin name or a path to a JSON scenario document.
ScenarioConfig load_scenario(const std::string& name_or_path);

struct FilterRun {
  EstimatePath estimate;
  Eigen::Matrix2Xd abs_error;  // |y_hat - y| per state on the shared grid
  Eigen::Vector2d max_abs_error = Eigen::Vector2d::Zero();
};

struct RunResult {
  ScenarioConfig config;
  StatePath truth;
  Eigen::VectorXd dz;
  AugmentedPath bilinear;
  std::map<FilterKind, FilterRun> filters;

  double time(long k) const { return static_cast<double>(k) * truth.dt; }
};

/// Max-abs-error summary for one filter and one state across seeds.
struct ErrorStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single seed
  double min = 0.0;
  double max = 0.0;
};

struct AggregateReport {
  ScenarioConfig config;
  std::vector<std::uint64_t> seeds;
  std::map<FilterKind, std::vector<Eigen::Vector2d>> per_seed;  // max errors by seed index
  std::map<FilterKind, std::vector<long>> negative_variance_events;
  std::map<FilterKind, double> min_cov_eigenvalue;
  std::map<FilterKind, std::array<ErrorStats, 2>> stats;
  /// Fraction of seeds where the Carleman filter's max error is strictly
  /// below the EKF's, per state. Present only when both filters ran.
  std::optional<Eigen::Vector2d> win_rate;
};

RunResult run_scenario(const ScenarioConfig& cfg);

/// Runs seeds cfg.seed, cfg.seed + 1, ... and aggregates.
AggregateReport compare_filters(const ScenarioConfig& cfg, int n_seeds);

ErrorStats summarize(const std::vector<double>& values);

nlohmann::json to_json(const AggregateReport& report);

/// Writes truth.csv, obs.csv, bilinear.csv, est_<name>.csv, errors.csv and
/// meta.json. Filter files are skipped when `include_filters` is false.
void export_run(const RunResult& result, const std::filesystem::path& dir, bool include_filters = true);

/// Writes report.json and meta.json.
void export_report(const AggregateReport& report, const std::filesystem::path& dir);

nlohmann::json embedding_to_json(const BilinearSDE<double>& sys);

}  // namespace swingcf
