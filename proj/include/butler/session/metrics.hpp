#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace butler::session {

struct MetricsRecord {
  std::string task_id;
  bool task_success = false;
  bool planning_success = false;
  std::int64_t completion_time_ms = 0;  // simulated
  int voice = 0;
  int gesture = 0;
  bool operator==(const MetricsRecord&) const = default;
};

nlohmann::json record_to_json(const MetricsRecord& r);
MetricsRecord record_from_json(const nlohmann::json& j);

struct TaskRow {
  std::string task_id;
  int runs = 0;
  int task_successes = 0;
  int planning_successes = 0;
  std::optional<double> mean_time_s;  // over successful runs
  double voice = 0.0;                 // mean per run
  double gesture = 0.0;
};

/// Rows in first-seen task order.
std::vector<TaskRow> aggregate(const std::vector<MetricsRecord>& records);

struct Report {
  std::string table;
  nlohmann::json summary;  // {"records": [...], "tasks": [...], "mean": {...}}
};

/// Per-task rows ("3/3", seconds with one decimal, "3 (2+1)") plus a mean row
/// in percent. Throws std::invalid_argument on an empty record list.
Report report_metrics(const std::vector<MetricsRecord>& records);

/// Records stored in a summary produced by report_metrics.
std::vector<MetricsRecord> records_from_summary(const nlohmann::json& summary);

std::string format_interactions(double voice, double gesture);

}  // namespace butler::session
