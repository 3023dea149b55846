#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "locfuse/core.hpp"

namespace locfuse {

struct PoseError {
  double rotation_deg = 0.0;
  double translation = 0.0;  // camera-center distance, scene units
};

// Angle of R_est * R_gt^T and the distance between camera centers.
PoseError pose_error(const Pose& estimate, const Pose& ground_truth);

struct Threshold {
  double max_translation = 0.0;
  double max_rotation_deg = 0.0;
};

struct ThresholdSpec {
  std::vector<Threshold> thresholds{{0.25, 2.0}, {0.5, 5.0}, {5.0, 10.0}};

  void validate() const;
  // "0.25,2;0.5,5;5,10"
  static ThresholdSpec parse(const std::string& text);
  ThresholdSpec scaled(double translation_scale) const;
};

struct BenchmarkReport {
  std::size_t total = 0;
  std::size_t localized = 0;
  double failure_rate = 0.0;  // fraction of queries with no estimate
  std::optional<double> median_rotation_deg;
  std::optional<double> median_translation;
  ThresholdSpec thresholds;
  std::vector<double> percent_within;  // one per threshold, 0-100
};

// Median of a non-empty list (mean of the middle two for even counts).
double median(std::vector<double> values);

// Failed queries (nullopt) count against every threshold and are excluded
// from the medians.
BenchmarkReport aggregate(std::span<const std::optional<PoseError>> errors,
                          const ThresholdSpec& thresholds = {});

std::string report_to_json(const BenchmarkReport& report, int indent = 2);
// Aligned plain-text table.
std::string report_to_table(const BenchmarkReport& report);
// One CSV header/row pair for sweeps: <key columns>, then one column per
// threshold, median_translation, median_rotation_deg, failure_rate.
std::string report_csv_header(std::span<const std::string> key_columns,
                              const ThresholdSpec& thresholds);
std::string report_csv_row(std::span<const std::string> key_values,
                           const BenchmarkReport& report);

}  // namespace locfuse
