#include "butler/session/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace butler::session {

using nlohmann::json;

json record_to_json(const MetricsRecord& r) {
  return {{"task_id", r.task_id},
          {"task_success", r.task_success},
          {"planning_success", r.planning_success},
          {"completion_time_ms", r.completion_time_ms},
          {"interactions", {{"voice", r.voice}, {"gesture", r.gesture}}}};
}

MetricsRecord record_from_json(const json& j) {
  MetricsRecord r;
  r.task_id = j.at("task_id").get<std::string>();
  r.task_success = j.at("task_success").get<bool>();
  r.planning_success = j.at("planning_success").get<bool>();
  r.completion_time_ms = j.at("completion_time_ms").get<std::int64_t>();
  r.voice = j.at("interactions").at("voice").get<int>();
  r.gesture = j.at("interactions").at("gesture").get<int>();
  return r;
}

std::vector<TaskRow> aggregate(const std::vector<MetricsRecord>& records) {
  std::vector<TaskRow> rows;
  std::map<std::string, std::size_t> index;
  std::map<std::string, std::pair<double, int>> times;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace(r.task_id, rows.size());
    if (inserted) {
      TaskRow fresh;
      fresh.task_id = r.task_id;
      rows.push_back(std::move(fresh));
    }
    TaskRow& row = rows[it->second];
    ++row.runs;
    row.task_successes += r.task_success ? 1 : 0;
    row.planning_successes += r.planning_success ? 1 : 0;
    row.voice += r.voice;
    row.gesture += r.gesture;
    if (r.task_success) {
      auto& [sum, n] = times[r.task_id];
      sum += static_cast<double>(r.completion_time_ms) / 1000.0;
      ++n;
    }
  }
  for (auto& row : rows) {
    row.voice /= row.runs;
    row.gesture /= row.runs;
    if (auto it = times.find(row.task_id); it != times.end()) row.mean_time_s = it->second.first / it->second.second;
  }
  return rows;
}

namespace {

bool integral(double v) { return std::abs(v - std::round(v)) < 1e-9; }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string ratio(int k, int n) { return std::to_string(k) + "/" + std::to_string(n); }

}  // namespace

std::string format_interactions(double voice, double gesture) {
  double total = voice + gesture;
  if (integral(voice) && integral(gesture)) {
    return std::to_string(std::lround(total)) + " (" + std::to_string(std::lround(voice)) + "+" +
           std::to_string(std::lround(gesture)) + ")";
  }
  return fmt("%.1f", total) + " (" + fmt("%.1f", voice) + "+" + fmt("%.1f", gesture) + ")";
}

Report report_metrics(const std::vector<MetricsRecord>& records) {
  if (records.empty()) throw std::invalid_argument("report_metrics needs at least one record");
  auto rows = aggregate(records);

  std::string table = pad("Task", 8) + pad("Task SR", 10) + pad("Planning SR", 13) + pad("Time", 10) + "Interactions (V+G)\n";
  int runs = 0, task_ok = 0, plan_ok = 0;
  double time_sum = 0.0, voice_sum = 0.0, gesture_sum = 0.0;
  int timed = 0;
  json tasks = json::array();
  for (const auto& r : rows) {
    std::string time = r.mean_time_s ? fmt("%.1fs", *r.mean_time_s) : "-";
    table += pad(r.task_id, 8) + pad(ratio(r.task_successes, r.runs), 10) + pad(ratio(r.planning_successes, r.runs), 13) +
             pad(time, 10) + format_interactions(r.voice, r.gesture) + "\n";
    runs += r.runs;
    task_ok += r.task_successes;
    plan_ok += r.planning_successes;
    if (r.mean_time_s) {
      time_sum += *r.mean_time_s;
      ++timed;
    }
    voice_sum += r.voice;
    gesture_sum += r.gesture;
    tasks.push_back({{"task_id", r.task_id},
                     {"runs", r.runs},
                     {"task_successes", r.task_successes},
                     {"planning_successes", r.planning_successes},
                     {"mean_time_s", r.mean_time_s ? json(*r.mean_time_s) : json(nullptr)},
                     {"voice", r.voice},
                     {"gesture", r.gesture}});
  }
  double n = static_cast<double>(rows.size());
  double task_sr = 100.0 * task_ok / runs;
  double plan_sr = 100.0 * plan_ok / runs;
  std::optional<double> mean_time = timed ? std::optional(time_sum / timed) : std::nullopt;
  table += pad("Mean", 8) + pad(fmt("%.1f%%", task_sr), 10) + pad(fmt("%.1f%%", plan_sr), 13) +
           pad(mean_time ? fmt("%.1fs", *mean_time) : "-", 10) + format_interactions(voice_sum / n, gesture_sum / n) + "\n";

  json recs = json::array();
  for (const auto& r : records) recs.push_back(record_to_json(r));
  json summary{{"records", recs},
               {"tasks", tasks},
               {"mean",
                {{"task_sr", task_sr},
                 {"planning_sr", plan_sr},
                 {"time_s", mean_time ? json(*mean_time) : json(nullptr)},
                 {"voice", voice_sum / n},
                 {"gesture", gesture_sum / n}}}};
  return {table, summary};
}

std::vector<MetricsRecord> records_from_summary(const json& summary) {
  std::vector<MetricsRecord> out;
  for (const auto& r : summary.at("records")) out.push_back(record_from_json(r));
  return out;
}

}  // namespace butler::session
