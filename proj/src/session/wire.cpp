#include "butler/session/wire.hpp"

namespace butler::session {

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::combined: return "combined";
    case Mode::voice_only: return "voice_only";
    case Mode::gesture_only: return "gesture_only";
  }
  return "combined";
}

std::optional<Mode> mode_from_string(std::string_view s) {
  for (auto m : {Mode::combined, Mode::voice_only, Mode::gesture_only}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

const std::vector<std::string>& gesture_only_commands() {
  static const std::vector<std::string> commands{"pick this", "place here", "go here", "open", "close", "what is this"};
  return commands;
}

namespace wire {

using nlohmann::json;

namespace {

struct TypeName {
  std::string_view operator()(const Chat&) const { return "chat"; }
  std::string_view operator()(const Point&) const { return "point"; }
  std::string_view operator()(const SetMode&) const { return "mode"; }
  std::string_view operator()(const FrameMsg&) const { return "frame"; }
  std::string_view operator()(const ResponseMsg&) const { return "response"; }
  std::string_view operator()(const Status&) const { return "status"; }
  std::string_view operator()(const Disambiguation&) const { return "disambiguation"; }
  std::string_view operator()(const ProtocolError&) const { return "protocol_error"; }
};

json optional_string(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> read_optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<std::string>();
}

void write_payload(json& j, const Payload& p) {
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Chat>) {
          j["text"] = v.text;
        } else if constexpr (std::is_same_v<T, Point>) {
          j["frame_id"] = v.frame_id;
          j["x_px"] = v.x_px;
          j["y_px"] = v.y_px;
        } else if constexpr (std::is_same_v<T, SetMode>) {
          j["mode"] = to_string(v.mode);
        } else if constexpr (std::is_same_v<T, FrameMsg>) {
          j["frame_id"] = v.frame_id;
          j["width"] = v.width;
          j["height"] = v.height;
          j["png_base64"] = v.png_base64;
          j["view"] = {{"scale", v.view.scale}, {"tx", v.view.tx}, {"ty", v.view.ty}};
        } else if constexpr (std::is_same_v<T, ResponseMsg>) {
          j["text"] = v.text;
          j["kind"] = behavior::to_string(v.kind);
        } else if constexpr (std::is_same_v<T, Status>) {
          j["plan"] = v.plan;
          j["step_index"] = v.step_index;
          j["action"] = v.action;
          j["outcome"] = {{"status", v.outcome.status},
                          {"error", optional_string(v.outcome.error)},
                          {"reason", optional_string(v.outcome.reason)},
                          {"answer", optional_string(v.outcome.answer)},
                          {"duration_ms", v.outcome.duration_ms}};
        } else if constexpr (std::is_same_v<T, Disambiguation>) {
          j["prompt"] = v.prompt;
          j["candidates"] = v.candidates;
          j["frame_id"] = v.frame_id;
        } else if constexpr (std::is_same_v<T, ProtocolError>) {
          j["error"] = v.error;
          j["ref_seq"] = v.ref_seq ? json(*v.ref_seq) : json(nullptr);
        }
      },
      p);
}

Payload read_payload(const std::string& type, const json& j) {
  if (type == "chat") return Chat{j.at("text").get<std::string>()};
  if (type == "point") return Point{j.at("frame_id").get<perception::FrameId>(), j.at("x_px").get<double>(), j.at("y_px").get<double>()};
  if (type == "mode") {
    auto m = mode_from_string(j.at("mode").get<std::string>());
    if (!m) throw DecodeError("unknown mode '" + j.at("mode").get<std::string>() + "'");
    return SetMode{*m};
  }
  if (type == "frame") {
    const json& v = j.at("view");
    return FrameMsg{j.at("frame_id").get<perception::FrameId>(), j.at("width").get<int>(), j.at("height").get<int>(),
                    j.at("png_base64").get<std::string>(),
                    {v.at("scale").get<double>(), v.at("tx").get<double>(), v.at("ty").get<double>()}};
  }
  if (type == "response") {
    auto k = behavior::response_kind_from_string(j.at("kind").get<std::string>());
    if (!k) throw DecodeError("unknown response kind");
    return ResponseMsg{j.at("text").get<std::string>(), *k};
  }
  if (type == "status") {
    const json& o = j.at("outcome");
    Outcome out{o.at("status").get<std::string>(), read_optional_string(o, "error"), read_optional_string(o, "reason"),
                read_optional_string(o, "answer"), o.at("duration_ms").get<std::int64_t>()};
    return Status{j.at("plan").get<std::string>(), j.at("step_index").get<int>(), j.value("action", std::string()), out};
  }
  if (type == "disambiguation") {
    return Disambiguation{j.at("prompt").get<std::string>(), j.at("candidates").get<std::vector<std::string>>(),
                          j.at("frame_id").get<perception::FrameId>()};
  }
  if (type == "protocol_error") {
    std::optional<std::uint64_t> ref;
    if (j.contains("ref_seq") && !j["ref_seq"].is_null()) ref = j["ref_seq"].get<std::uint64_t>();
    return ProtocolError{j.at("error").get<std::string>(), ref};
  }
  throw DecodeError("unknown message type '" + type + "'");
}

}  // namespace

std::string_view type_name(const Payload& p) { return std::visit(TypeName{}, p); }

bool is_client_payload(const Payload& p) {
  return std::holds_alternative<Chat>(p) || std::holds_alternative<Point>(p) || std::holds_alternative<SetMode>(p);
}

json to_json(const Message& m) {
  json j{{"type", type_name(m.payload)}, {"seq", m.seq}, {"timestamp_ms", m.timestamp_ms}};
  write_payload(j, m.payload);
  return j;
}

Message from_json(const json& j) {
  if (!j.is_object()) throw DecodeError("message must be a JSON object");
  std::optional<std::uint64_t> seq;
  try {
    if (j.contains("seq") && j["seq"].is_number_unsigned()) seq = j["seq"].get<std::uint64_t>();
    if (!j.contains("type") || !j["type"].is_string()) throw DecodeError("missing 'type'", seq);
    if (!seq) throw DecodeError("missing or invalid 'seq'");
    Message m;
    m.seq = *seq;
    m.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
    m.payload = read_payload(j["type"].get<std::string>(), j);
    return m;
  } catch (const DecodeError& e) {
    if (!e.seq() && seq) throw DecodeError(e.what(), seq);
    throw;
  } catch (const json::exception& e) {
    throw DecodeError(std::string("malformed message: ") + e.what(), seq);
  }
}

std::string encode(const Message& m) { return to_json(m).dump(); }

Message decode(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DecodeError(std::string("not JSON: ") + e.what());
  }
  return from_json(j);
}

bool SeqGuard::accept(std::uint64_t seq) {
  if (last_ && seq <= *last_) return false;
  last_ = seq;
  return true;
}

}  // namespace wire
}  // namespace butler::session
