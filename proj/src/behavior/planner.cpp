#include "butler/behavior/planner.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "butler/common/text.hpp"
#include "butler/world/queries.hpp"

namespace butler::behavior {

using skills::ActionArg;
using skills::PrimitiveAction;
using skills::SkillKind;
using Tokens = std::vector<std::string>;

const std::vector<std::string>& skill_signatures() {
  static const std::vector<std::string> sigs{"move(target)",     "pick(target)",     "placeon(target)",
                                             "open(container)", "close(container)", "vqa(question, target?)"};
  return sigs;
}

PlannerContext make_planner_context(const world::WorldModel& w, std::vector<HistoryEntry> history, bool close_after_check) {
  PlannerContext ctx;
  for (const auto& z : w.zones) ctx.known_locations.push_back(z.name);
  ctx.skills = skill_signatures();
  ctx.history = std::move(history);
  ctx.location_directory = world::build_location_directory(w);
  for (const auto& [id, o] : w.objects) {
    if (!o.is_container) continue;
    ctx.containers.insert(text::to_lower(o.name));
    ctx.containers.insert(text::to_lower(o.category));
    for (const auto& s : o.synonyms) ctx.containers.insert(text::to_lower(s));
    if (const world::Zone* z = world::zone_of_object(w, id)) ctx.containers.insert(z->name);
  }
  if (const world::Zone* z = world::robot_zone(w)) ctx.current_zone = z->name;
  ctx.close_after_check = close_after_check;
  return ctx;
}

namespace {

bool is_back_reference(const std::string& s) { return s == "it" || s == "one" || s == "them"; }

Tokens strip_filler(const Tokens& tokens, const PatternTable& table) {
  Tokens out;
  for (const auto& t : tokens) {
    if (!table.filler.contains(t)) out.push_back(t);
  }
  return out;
}

std::vector<Tokens> split_clauses(const Tokens& tokens) {
  std::vector<Tokens> out(1);
  for (const auto& t : tokens) {
    if (t == "and" || t == "then") {
      if (!out.back().empty()) out.emplace_back();
    } else {
      out.back().push_back(t);
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

std::vector<Tokens> clauses_of(const Tokens& tokens, const PatternTable& table) {
  auto clauses = split_clauses(strip_filler(tokens, table));
  for (auto& c : clauses) {
    auto first = std::find_if(c.begin(), c.end(), [&](const std::string& t) { return !table.lead_filler.contains(t); });
    c.erase(c.begin(), first);
  }
  return clauses;
}

bool is_known_location(const PlannerContext& ctx, const std::string& s) {
  return std::find(ctx.known_locations.begin(), ctx.known_locations.end(), s) != ctx.known_locations.end();
}

const std::vector<std::string>* directory_lookup(const PlannerContext& ctx, const std::string& s) {
  if (auto it = ctx.location_directory.find(s); it != ctx.location_directory.end()) return &it->second;
  Tokens q = text::tokenize(s);
  for (const auto& [key, zones] : ctx.location_directory) {
    Tokens k = text::tokenize(key);
    if (k.size() != q.size()) continue;
    bool all = true;
    for (std::size_t i = 0; i < k.size() && all; ++i) all = text::token_matches(q[i], k[i]);
    if (all) return &zones;
  }
  return nullptr;
}

bool valid_location(const PlannerContext& ctx, const std::string& s) {
  return is_known_location(ctx, s) || ctx.containers.contains(s) || directory_lookup(ctx, s) != nullptr;
}

struct SlotValue {
  std::string text;
  bool star = false;
};

struct Draft {
  PrimitiveAction action;
  std::optional<SlotValue> at;  // where a vqa step needs to be
};

struct ClauseOutcome {
  std::optional<std::vector<Draft>> steps;
  std::optional<std::string> mention;   // object the clause talks about
  std::optional<std::string> bad_location;
};

int count_stars(const std::vector<Draft>& steps) {
  int n = 0;
  for (const auto& d : steps) {
    n += static_cast<int>(std::count_if(d.action.args.begin(), d.action.args.end(),
                                        [](const ActionArg& a) { return std::holds_alternative<skills::Star>(a); }));
  }
  return n;
}

std::string interpolate(const std::string& tmpl, const std::map<std::string, SlotValue>& values, bool& uses_star) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i);
      if (close != std::string::npos) {
        auto it = values.find(tmpl.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second.text;
          uses_star = uses_star || it->second.star;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

/// Renders one pattern match into draft steps, or explains why it does not fit.
ClauseOutcome render(const Pattern& p, const Bindings& bindings, const PlannerContext& ctx,
                     const std::optional<std::string>& previous_object, int clause_demonstratives) {
  ClauseOutcome out;
  std::map<std::string, SlotValue> values;
  for (const auto& [name, toks] : bindings) {
    int demo = static_cast<int>(std::count_if(toks.begin(), toks.end(), [](const std::string& t) { return text::is_demonstrative(t); }));
    if (demo > 1) return out;
    values[name] = {text::join(toks, " "), demo == 1};
  }
  if (auto it = values.find("obj"); it != values.end() && !it->second.star && !is_back_reference(it->second.text)) {
    out.mention = it->second.text;
  }
  if (auto it = values.find("loc"); it != values.end() && !it->second.star && !valid_location(ctx, it->second.text)) {
    out.bad_location = it->second.text;
    return out;
  }

  std::vector<Draft> steps;
  for (const auto& tmpl : p.emit) {
    Draft d{{tmpl.skill, {}}, {}};
    bool needs_star = false;
    for (const auto& arg : tmpl.args) {
      if (arg == "{current}") {
        if (!ctx.current_zone || !ctx.containers.contains(*ctx.current_zone)) {
          out.bad_location = "here";
          return out;
        }
        d.action.args.push_back(skills::TextArg{*ctx.current_zone});
      } else if (arg.size() > 2 && arg.front() == '{' && arg.back() == '}' && arg.find('{', 1) == std::string::npos) {
        auto it = values.find(arg.substr(1, arg.size() - 2));
        if (it == values.end()) return out;
        if (it->second.star) {
          d.action.args.push_back(skills::Star{});
        } else {
          std::string v = it->second.text;
          if (is_back_reference(v) && previous_object) v = *previous_object;
          d.action.args.push_back(skills::TextArg{v});
        }
      } else {
        d.action.args.push_back(skills::TextArg{interpolate(arg, values, needs_star)});
      }
    }
    if (needs_star) d.action.args.push_back(skills::Star{});
    if (tmpl.skill == SkillKind::vqa && p.at) {
      if (auto it = values.find(*p.at); it != values.end()) d.at = it->second;
    }
    steps.push_back(std::move(d));
  }

  if (p.inspect) {
    std::vector<Draft> expanded;
    for (auto& d : steps) {
      bool container = d.action.skill == SkillKind::vqa && d.at && !d.at->star && ctx.containers.contains(d.at->text);
      if (container) expanded.push_back({{SkillKind::open, {skills::TextArg{d.at->text}}}, {}});
      std::optional<std::string> closing = container ? std::optional(d.at->text) : std::nullopt;
      expanded.push_back(std::move(d));
      if (closing && ctx.close_after_check) expanded.push_back({{SkillKind::close, {skills::TextArg{*closing}}}, {}});
    }
    steps = std::move(expanded);
  }

  if (count_stars(steps) != clause_demonstratives) return out;
  out.steps = std::move(steps);
  return out;
}

ClauseOutcome plan_clause(const PatternTable& table, const Tokens& clause, const PlannerContext& ctx,
                          const std::optional<std::string>& previous_object) {
  int demonstratives =
      static_cast<int>(std::count_if(clause.begin(), clause.end(), [](const std::string& t) { return text::is_demonstrative(t); }));
  ClauseOutcome result;
  for (const auto& p : table.patterns) {
    ClauseOutcome found;
    match_pattern(p, table, clause, [&](const Bindings& b) {
      ClauseOutcome c = render(p, b, ctx, previous_object, demonstratives);
      if (c.steps) {
        found = std::move(c);
        return true;
      }
      if (c.bad_location && !result.bad_location) result.bad_location = c.bad_location;
      return false;
    });
    if (found.steps) return found;
  }
  return result;
}

/// Last object mentioned by an earlier instruction, found by matching it again.
std::optional<std::string> history_mention(const PatternTable& table, const PlannerContext& ctx) {
  for (auto h = ctx.history.rbegin(); h != ctx.history.rend(); ++h) {
    std::optional<std::string> mention;
    for (const auto& clause : clauses_of(text::tokenize(h->instruction), table)) {
      for (const auto& p : table.patterns) {
        bool hit = match_pattern(p, table, clause, [&](const Bindings& b) {
          auto it = b.find("obj");
          if (it == b.end()) return true;
          std::string v = text::join(it->second, " ");
          bool demo = std::any_of(it->second.begin(), it->second.end(), [](const std::string& t) { return text::is_demonstrative(t); });
          if (!demo && !is_back_reference(v)) mention = v;
          return true;
        });
        if (hit) break;
      }
    }
    if (mention) return mention;
  }
  return std::nullopt;
}

/// Where the robot has to go before acting on `target`, if anywhere.
std::optional<std::string> destination(const PlannerContext& ctx, const std::string& target,
                                       const std::optional<std::string>& current) {
  if (is_known_location(ctx, target)) return target;
  const auto* zones = directory_lookup(ctx, target);
  if (!zones) return std::nullopt;
  if (zones->size() == 1) return zones->front();
  if (current && std::find(zones->begin(), zones->end(), *current) != zones->end()) return current;
  return target;  // several places or none: navigate to the object itself
}

std::string position_key(const PlannerContext& ctx, const std::string& dest) {
  return is_known_location(ctx, dest) ? dest : "~" + dest;
}

std::vector<PrimitiveAction> insert_moves(const std::vector<Draft>& drafts, const PlannerContext& ctx) {
  std::optional<std::string> current = ctx.current_zone;
  std::vector<PrimitiveAction> out;
  for (const auto& d : drafts) {
    const auto& a = d.action;
    if (a.skill == SkillKind::move) {
      if (const auto* t = std::get_if<skills::TextArg>(&a.args.front())) current = position_key(ctx, t->text);
      else current.reset();
      out.push_back(a);
      continue;
    }
    std::optional<std::string> target;
    if (a.skill == SkillKind::vqa) {
      if (d.at && !d.at->star && !is_back_reference(d.at->text)) target = d.at->text;
    } else if (const auto* t = std::get_if<skills::TextArg>(&a.args.front())) {
      target = t->text;
    }
    if (target) {
      if (auto dest = destination(ctx, *target, current)) {
        std::string key = position_key(ctx, *dest);
        if (key != current) {
          out.push_back({SkillKind::move, {skills::TextArg{*dest}}});
          current = key;
        }
      }
    }
    out.push_back(a);
  }
  return out;
}

std::string target_phrase(const PrimitiveAction& a, std::size_t index, const char* pointed) {
  if (index < a.args.size()) {
    if (const auto* t = std::get_if<skills::TextArg>(&a.args[index])) return "the " + t->text;
  }
  return pointed;
}

}  // namespace

std::string describe_plan(const std::vector<PrimitiveAction>& steps) {
  if (steps.empty()) return "Okay, there is nothing to do.";
  std::vector<std::string> parts;
  for (const auto& a : steps) {
    switch (a.skill) {
      case SkillKind::move: parts.push_back("go to " + target_phrase(a, 0, "where you point")); break;
      case SkillKind::pick: parts.push_back("pick up " + target_phrase(a, 0, "what you point at")); break;
      case SkillKind::placeon: parts.push_back("put it on " + target_phrase(a, 0, "what you point at")); break;
      case SkillKind::open: parts.push_back("open " + target_phrase(a, 0, "it")); break;
      case SkillKind::close: parts.push_back("close " + target_phrase(a, 0, "it")); break;
      case SkillKind::vqa: {
        const auto* q = a.args.empty() ? nullptr : std::get_if<skills::TextArg>(&a.args.front());
        parts.push_back("look into \"" + (q ? q->text : std::string()) + "\"");
        break;
      }
    }
  }
  return "Okay, I will " + text::join(parts, ", then ") + ".";
}

PlanResult RulePlanner::generate(const Instruction& i, const PlannerContext& ctx, std::stop_token) {
  PlanResult r;
  NormalizedInstruction norm;
  try {
    norm = normalize_instruction(i);
  } catch (const EmptyInstruction&) {
    r.error = PlanError::empty_instruction;
    r.response = {"I didn't catch an instruction.", ResponseKind::error, {}};
    return r;
  }

  std::vector<Draft> drafts;
  std::optional<std::string> mention;
  bool history_checked = false;
  for (const auto& clause : clauses_of(norm.tokens, table_)) {
    if (!mention && !history_checked) {
      mention = history_mention(table_, ctx);
      history_checked = true;
    }
    ClauseOutcome c = plan_clause(table_, clause, ctx, mention);
    if (!c.steps) {
      if (c.bad_location) {
        r.error = PlanError::unknown_location;
        r.response = {"Sorry, I don't know where the " + *c.bad_location + " is.", ResponseKind::error, {}};
      } else {
        r.error = PlanError::unparseable_instruction;
        r.response = {"Sorry, I don't know how to \"" + text::join(clause, " ") + "\".", ResponseKind::error, {}};
      }
      return r;
    }
    if (c.mention) mention = c.mention;
    drafts.insert(drafts.end(), c.steps->begin(), c.steps->end());
  }
  if (drafts.empty()) {
    r.error = PlanError::unparseable_instruction;
    r.response = {"Sorry, I don't know what to do.", ResponseKind::error, {}};
    return r;
  }

  Plan plan;
  plan.steps = insert_moves(drafts, ctx);
  plan.source = PlanSource::rule;
  plan.raw = serialize_plan(plan.steps);
  r.response = {describe_plan(plan.steps), ResponseKind::ack, {}};
  r.plan = std::move(plan);
  return r;
}

PromptTemplate load_prompt(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open prompt file " + path.string());
  PromptTemplate p;
  std::string first;
  std::getline(in, first);
  const std::string tag = "version:";
  if (first.rfind(tag, 0) == 0) p.version = text::trim(first.substr(tag.size()));
  else throw std::runtime_error("prompt file " + path.string() + " must start with 'version: <v>'");
  std::stringstream ss;
  ss << in.rdbuf();
  p.text = ss.str();
  return p;
}

ExternalPlanner::ExternalPlanner(std::shared_ptr<JsonBackend> backend, std::shared_ptr<RulePlanner> fallback, PromptTemplate prompt)
    : backend_(std::move(backend)), fallback_(std::move(fallback)), prompt_(std::move(prompt)) {}

nlohmann::json ExternalPlanner::make_request(const Instruction& i, const PlannerContext& ctx, const PromptTemplate& prompt) {
  nlohmann::json history = nlohmann::json::array();
  for (const auto& h : ctx.history) {
    history.push_back({{"instruction", h.instruction}, {"plan", h.plan}, {"outcomes", h.outcomes}});
  }
  nlohmann::json req{{"instruction", i.text},
                     {"known_locations", ctx.known_locations},
                     {"skills", ctx.skills},
                     {"history", history}};
  if (!prompt.version.empty()) {
    req["prompt_version"] = prompt.version;
    req["prompt"] = prompt.text;
  }
  return req;
}

PlanResult ExternalPlanner::fall_back(const Instruction& i, const PlannerContext& ctx, int retries, const std::string& why) {
  PlanResult r = fallback_->generate(i, ctx);
  r.fallback = true;
  r.retries = retries;
  r.response.text = "fallback (" + why + "): " + r.response.text;
  return r;
}

PlanResult ExternalPlanner::generate(const Instruction& i, const PlannerContext& ctx, std::stop_token stop) {
  nlohmann::json req = make_request(i, ctx, prompt_);
  for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
    if (stop.stop_requested()) return fall_back(i, ctx, attempt, "cancelled");
    nlohmann::json reply;
    try {
      reply = backend_->call(req);
    } catch (const std::exception& e) {
      return fall_back(i, ctx, attempt, "planner unreachable");
    }
    try {
      if (!reply.is_object() || !reply.contains("plan") || !reply["plan"].is_string()) {
        throw ParseError(0, "reply with a string 'plan' field");
      }
      Plan plan = parse_plan(reply["plan"].get<std::string>());
      plan.source = PlanSource::external;
      PlanResult r;
      std::string text = reply.contains("response") && reply["response"].is_string() ? reply["response"].get<std::string>()
                                                                                      : describe_plan(plan.steps);
      r.response = {text, ResponseKind::ack, {}};
      r.plan = std::move(plan);
      r.retries = attempt;
      return r;
    } catch (const ParseError& e) {
      req["retry_error"] = e.what();
    }
  }
  return fall_back(i, ctx, kMaxRetries, "plan could not be parsed");
}

}  // namespace butler::behavior
