#include "butler/session/script.hpp"

#include <cstdio>
#include <fstream>

#include "butler/common/text.hpp"

namespace butler::session {

using nlohmann::json;

namespace {

ScriptEvent parse_event(const json& e, std::size_t index) {
  std::string where = "events[" + std::to_string(index) + "]";
  if (!e.is_object()) throw ScriptError(where + " must be an object");
  ScriptEvent ev;
  ev.at_ms = e.value("at_ms", std::int64_t{0});
  if (ev.at_ms < 0) throw ScriptError(where + ".at_ms is negative");
  if (e.contains("chat")) {
    ev.what = ChatEvent{e["chat"].get<std::string>()};
  } else if (e.contains("point")) {
    const json& p = e["point"];
    PointEvent pt;
    if (p.contains("object")) pt.object = p["object"].get<std::string>();
    if (p.contains("xy")) pt.xy = world::Vec2{p["xy"].at(0).get<double>(), p["xy"].at(1).get<double>()};
    if (pt.object.has_value() == pt.xy.has_value()) throw ScriptError(where + ".point needs exactly one of object, xy");
    ev.what = pt;
  } else if (e.contains("expect")) {
    const json& x = e["expect"];
    ev.what = ExpectEvent{x.at("kind").get<std::string>(), x.value("contains", std::string())};
  } else {
    throw ScriptError(where + " has no chat, point or expect");
  }
  return ev;
}

bool message_matches(const wire::Message& m, const ExpectEvent& x) {
  auto has = [&](const std::string& s) { return text::contains_case_insensitive(s, x.contains); };
  if (const auto* r = std::get_if<wire::ResponseMsg>(&m.payload)) {
    return (x.kind == "response" || x.kind == behavior::to_string(r->kind)) && has(r->text);
  }
  if (const auto* d = std::get_if<wire::Disambiguation>(&m.payload)) return x.kind == "disambiguation" && has(d->prompt);
  if (const auto* s = std::get_if<wire::Status>(&m.payload)) {
    return x.kind == "status" && (has(s->action) || has(s->outcome.status) || has(s->outcome.error.value_or("")) ||
                                  has(s->outcome.answer.value_or("")));
  }
  return x.kind == wire::type_name(m.payload);
}

struct Outcome {
  EpisodeStats stats;
  std::vector<std::string> transcript;
  bool diverged = false;
  std::int64_t end_ms = 0;
};

Outcome replay(const world::Scenario& scenario, const Script& script, const ReplayConfig& cfg, bool strict) {
  Session s(scenario.world, cfg.planner, cfg.session);
  s.set_goals(scenario.goals);
  Outcome out;
  std::vector<wire::Message> pending;  // after the previous expect's match
  s.set_sink([&](const wire::Message& m) {
    out.transcript.push_back(transcript_line(m));
    pending.push_back(m);
  });

  s.emit_frame();
  for (const auto& ev : script.events) {
    s.advance_to(std::max(ev.at_ms, s.now()));
    if (const auto* c = std::get_if<ChatEvent>(&ev.what)) {
      s.chat(c->text);
    } else if (const auto* p = std::get_if<PointEvent>(&ev.what)) {
      const perception::Frame& f = s.emit_frame();
      world::Vec2 target;
      if (p->object) {
        const world::ObjectRecord* o = s.world().find_object(*p->object);
        if (!o) throw ScriptError("script points at unknown object '" + *p->object + "'");
        target = o->pose;
      } else {
        target = *p->xy;
      }
      s.on_point(f.frame_id, f.view.to_pixel(target));
    } else {
      const auto& x = std::get<ExpectEvent>(ev.what);
      auto hit = std::find_if(pending.begin(), pending.end(), [&](const wire::Message& m) { return message_matches(m, x); });
      bool ok = hit != pending.end();
      pending.erase(pending.begin(), ok ? hit + 1 : pending.end());
      if (!ok) {
        if (s.stats().injected_failure || !strict) {
          out.diverged = true;
          break;
        }
        throw ScriptError("task " + script.task_id + ": expected " + x.kind + " containing \"" + x.contains +
                          "\" at " + std::to_string(ev.at_ms) + " ms");
      }
    }
  }
  out.stats = s.stats();
  out.end_ms = s.now();
  return out;
}

}  // namespace

Script parse_script(const json& j) {
  Script s;
  const json* events = &j;
  if (j.is_object()) {
    s.task_id = j.value("task_id", std::string());
    if (j.contains("interactions")) {
      s.expected_voice = j["interactions"].at("voice").get<int>();
      s.expected_gesture = j["interactions"].at("gesture").get<int>();
    }
    if (!j.contains("events")) throw ScriptError("script has no events");
    events = &j["events"];
  }
  if (!events->is_array()) throw ScriptError("script events must be a list");
  try {
    for (std::size_t i = 0; i < events->size(); ++i) s.events.push_back(parse_event((*events)[i], i));
  } catch (const json::exception& e) {
    throw ScriptError(std::string("malformed script: ") + e.what());
  }
  for (std::size_t i = 1; i < s.events.size(); ++i) {
    if (s.events[i].at_ms < s.events[i - 1].at_ms) throw ScriptError("script event times must be nondecreasing");
  }
  return s;
}

Script load_script_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScriptError("cannot open script " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ScriptError(path.string() + ": " + e.what());
  }
  Script s = parse_script(j);
  if (s.task_id.empty()) s.task_id = path.stem().string();
  return s;
}

ReplayResult run_script(const world::Scenario& scenario, const Script& script, const ReplayConfig& cfg) {
  if (!cfg.planner) throw std::invalid_argument("run_script needs a planner");
  // With detection noise on, a script may legitimately go off its rails.
  Outcome o = replay(scenario, script, cfg, cfg.session.skills.detection_noise == 0.0);

  ReplayResult r;
  r.transcript = std::move(o.transcript);
  r.diverged = o.diverged;
  r.record.task_id = script.task_id;
  r.record.task_success = o.stats.goals_met_ms && *o.stats.goals_met_ms <= cfg.budget_ms;
  r.record.completion_time_ms = o.stats.goals_met_ms ? *o.stats.goals_met_ms : o.end_ms;
  r.record.voice = o.stats.voice;
  r.record.gesture = o.stats.gesture;

  r.record.planning_success = r.record.task_success;
  if (!r.record.task_success && cfg.counterfactual) {
    ReplayConfig clean = cfg;
    clean.session.skills.failure_probability.clear();
    clean.session.skills.detection_noise = 0.0;
    Outcome c = replay(scenario, script, clean, false);
    r.record.planning_success = c.stats.goals_met_ms && *c.stats.goals_met_ms <= cfg.budget_ms;
  }
  return r;
}

std::string transcript_line(const wire::Message& m) {
  char head[64];
  std::snprintf(head, sizeof head, "[%8.1fs] #%llu ", static_cast<double>(m.timestamp_ms) / 1000.0,
                static_cast<unsigned long long>(m.seq));
  std::string line = head;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, wire::FrameMsg>) {
          line += "frame " + std::to_string(p.frame_id) + " " + std::to_string(p.width) + "x" + std::to_string(p.height);
        } else if constexpr (std::is_same_v<T, wire::ResponseMsg>) {
          line += "response(" + std::string(behavior::to_string(p.kind)) + ") " + p.text;
        } else if constexpr (std::is_same_v<T, wire::Status>) {
          line += "status step " + std::to_string(p.step_index) + " " + p.action + " -> " + p.outcome.status;
          if (p.outcome.error) line += " " + *p.outcome.error;
          if (p.outcome.answer) line += " \"" + *p.outcome.answer + "\"";
          line += " (" + std::to_string(p.outcome.duration_ms) + " ms)";
        } else if constexpr (std::is_same_v<T, wire::Disambiguation>) {
          line += "disambiguation \"" + p.prompt + "\" [" + text::join(p.candidates, ", ") + "] frame " +
                  std::to_string(p.frame_id);
        } else if constexpr (std::is_same_v<T, wire::ProtocolError>) {
          line += "protocol_error " + p.error;
        } else {
          line += std::string(wire::type_name(m.payload));
        }
      },
      m.payload);
  return line;
}

}  // namespace butler::session
