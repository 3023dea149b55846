#include "locfuse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace locfuse {

PoseError pose_error(const Pose& estimate, const Pose& ground_truth) {
  const Eigen::Matrix3d rel =
      estimate.rotation_matrix() * ground_truth.rotation_matrix().transpose();
  const double c = std::clamp((rel.trace() - 1.0) / 2.0, -1.0, 1.0);
  PoseError e;
  e.rotation_deg = std::acos(c) * 180.0 / std::numbers::pi;
  e.translation = (estimate.center() - ground_truth.center()).norm();
  return e;
}

void ThresholdSpec::validate() const {
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto& t = thresholds[i];
    if (!(t.max_translation > 0.0) || !(t.max_rotation_deg > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "thresholds must be positive", i);
    }
    if (i > 0 && (t.max_translation < thresholds[i - 1].max_translation ||
                  t.max_rotation_deg < thresholds[i - 1].max_rotation_deg)) {
      throw Error(ErrorCode::InvalidArgument, "thresholds must be sorted ascending", i);
    }
  }
}

ThresholdSpec ThresholdSpec::parse(const std::string& text) {
  ThresholdSpec spec;
  spec.thresholds.clear();
  std::stringstream pairs(text);
  std::string item;
  while (std::getline(pairs, item, ';')) {
    if (item.empty()) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ParseError, "threshold '" + item + "' is not 't,r'");
    }
    try {
      Threshold t;
      t.max_translation = std::stod(item.substr(0, comma));
      t.max_rotation_deg = std::stod(item.substr(comma + 1));
      spec.thresholds.push_back(t);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "threshold '" + item + "' is not numeric");
    }
  }
  if (spec.thresholds.empty()) {
    throw Error(ErrorCode::ParseError, "empty threshold list");
  }
  spec.validate();
  return spec;
}

ThresholdSpec ThresholdSpec::scaled(double translation_scale) const {
  ThresholdSpec out = *this;
  for (auto& t : out.thresholds) t.max_translation *= translation_scale;
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "median of nothing");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchmarkReport aggregate(std::span<const std::optional<PoseError>> errors,
                          const ThresholdSpec& thresholds) {
  thresholds.validate();
  BenchmarkReport r;
  r.total = errors.size();
  r.thresholds = thresholds;
  std::vector<double> rot;
  std::vector<double> trans;
  std::vector<std::size_t> within(thresholds.thresholds.size(), 0);
  for (const auto& e : errors) {
    if (!e) continue;
    rot.push_back(e->rotation_deg);
    trans.push_back(e->translation);
    for (std::size_t i = 0; i < within.size(); ++i) {
      const auto& t = thresholds.thresholds[i];
      if (e->translation <= t.max_translation && e->rotation_deg <= t.max_rotation_deg) {
        ++within[i];
      }
    }
  }
  r.localized = rot.size();
  if (r.total > 0) {
    r.failure_rate = static_cast<double>(r.total - r.localized) / static_cast<double>(r.total);
  }
  if (!rot.empty()) {
    r.median_rotation_deg = median(rot);
    r.median_translation = median(trans);
  }
  for (std::size_t w : within) {
    r.percent_within.push_back(
        r.total ? 100.0 * static_cast<double>(w) / static_cast<double>(r.total) : 0.0);
  }
  return r;
}

namespace {

std::string threshold_label(const Threshold& t) {
  std::ostringstream os;
  os << t.max_translation << "/" << t.max_rotation_deg;
  return os.str();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string report_to_json(const BenchmarkReport& report, int indent) {
  nlohmann::ordered_json j;
  j["total"] = report.total;
  j["localized"] = report.localized;
  j["failure_rate"] = report.failure_rate;
  j["median_translation"] =
      report.median_translation ? nlohmann::ordered_json(*report.median_translation)
                                : nlohmann::ordered_json(nullptr);
  j["median_rotation_deg"] =
      report.median_rotation_deg ? nlohmann::ordered_json(*report.median_rotation_deg)
                                 : nlohmann::ordered_json(nullptr);
  auto& th = j["thresholds"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < report.thresholds.thresholds.size(); ++i) {
    const auto& t = report.thresholds.thresholds[i];
    th.push_back({{"max_translation", t.max_translation},
                  {"max_rotation_deg", t.max_rotation_deg},
                  {"percent", report.percent_within.at(i)}});
  }
  return j.dump(indent);
}

std::string report_to_table(const BenchmarkReport& report) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-24s %12zu\n", "queries", report.total);
  os << line;
  std::snprintf(line, sizeof line, "%-24s %12zu\n", "localized", report.localized);
  os << line;
  std::snprintf(line, sizeof line, "%-24s %11.2f%%\n", "failure rate",
                100.0 * report.failure_rate);
  os << line;
  if (report.median_translation) {
    std::snprintf(line, sizeof line, "%-24s %12.6g\n", "median translation",
                  *report.median_translation);
    os << line;
    std::snprintf(line, sizeof line, "%-24s %12.6g\n", "median rotation (deg)",
                  *report.median_rotation_deg);
    os << line;
  }
  for (std::size_t i = 0; i < report.percent_within.size(); ++i) {
    std::snprintf(line, sizeof line, "%-24s %11.2f%%\n",
                  ("within " + threshold_label(report.thresholds.thresholds[i])).c_str(),
                  report.percent_within[i]);
    os << line;
  }
  return os.str();
}

std::string report_csv_header(std::span<const std::string> key_columns,
                              const ThresholdSpec& thresholds) {
  std::ostringstream os;
  for (const auto& k : key_columns) os << k << ",";
  for (const auto& t : thresholds.thresholds) {
    os << "pct_" << fmt(t.max_translation) << "_" << fmt(t.max_rotation_deg) << ",";
  }
  os << "median_translation,median_rotation_deg,failure_rate\n";
  return os.str();
}

std::string report_csv_row(std::span<const std::string> key_values,
                           const BenchmarkReport& report) {
  std::ostringstream os;
  for (const auto& k : key_values) os << k << ",";
  for (double p : report.percent_within) os << fmt(p) << ",";
  os << (report.median_translation ? fmt(*report.median_translation) : "nan") << ","
     << (report.median_rotation_deg ? fmt(*report.median_rotation_deg) : "nan") << ","
     << fmt(report.failure_rate) << "\n";
  return os.str();
}

}  // namespace locfuse
