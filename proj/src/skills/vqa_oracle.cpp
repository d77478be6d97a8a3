#include "butler/skills/vqa_oracle.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "butler/common/text.hpp"
#include "butler/perception/detect.hpp"
#include "butler/world/queries.hpp"

namespace butler::skills {

using world::ObjectId;
using world::ObjectRecord;
using world::WorldModel;

namespace {

using Tokens = std::vector<std::string>;

const std::set<std::string, std::less<>> kPrepositions{"in", "inside", "on", "at", "within"};
const std::set<std::string, std::less<>> kPhraseStops{"left", "are", "is", "there", "do", "we", "have", "remaining", "still"};
const std::set<std::string, std::less<>> kFiller{"the", "a", "an", "any", "some", "of", "please", "robi"};
const std::set<std::string, std::less<>> kReferents{"this", "that", "it", "here", "there", "one"};
const std::set<std::string, std::less<>> kGeneric{"object", "objects", "thing", "things", "item", "items", "stuff"};
const std::set<std::string, std::less<>> kStates{"open", "closed", "clean", "dirty", "empty", "full", "on", "off"};

std::ptrdiff_t find(const Tokens& t, std::string_view word, std::size_t from = 0) {
  for (std::size_t i = from; i < t.size(); ++i) {
    if (t[i] == word) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

Tokens strip_filler(Tokens t) {
  t.erase(std::remove_if(t.begin(), t.end(), [](const std::string& s) { return kFiller.contains(s); }), t.end());
  return t;
}

/// Splits tokens at the first preposition into (phrase, location phrase).
std::pair<Tokens, Tokens> split_location(const Tokens& t) {
  Tokens phrase, location;
  bool in_location = false;
  for (const auto& tok : t) {
    if (!in_location && kPrepositions.contains(tok)) {
      in_location = true;
      continue;
    }
    (in_location ? location : phrase).push_back(tok);
  }
  std::erase_if(location, [](const std::string& s) { return kPhraseStops.contains(s); });
  return {strip_filler(phrase), strip_filler(location)};
}

bool all_referents(const Tokens& t) {
  return std::all_of(t.begin(), t.end(), [](const std::string& s) { return kReferents.contains(s); });
}

bool any_generic(const Tokens& t) {
  return std::any_of(t.begin(), t.end(), [](const std::string& s) { return kGeneric.contains(s); });
}

std::string sentence(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  if (s.empty() || s.back() != '.') s.push_back('.');
  return s;
}

VqaResult fail(ErrorCode e, std::string reason) {
  VqaResult r;
  r.error = e;
  r.reason = std::move(reason);
  return r;
}

struct Scope {
  bool ok = true;
  std::string reason;
  std::optional<ObjectId> container;    // restrict to descendants
  std::optional<std::string> zone;      // restrict to objects in zone
};

Scope resolve_scope(const WorldModel& w, const Tokens& location) {
  Scope s;
  if (location.empty()) return s;
  std::string phrase = text::join(location, " ");
  if (const ObjectRecord* c = world::find_container(w, phrase)) {
    s.container = c->id;
    return s;
  }
  if (w.find_zone(phrase)) {
    s.zone = phrase;
    return s;
  }
  auto hits = perception::detect(w, phrase);
  if (!hits.empty()) {
    s.container = hits.front().object_id;
    return s;
  }
  s.ok = false;
  s.reason = "I don't know where '" + phrase + "' is";
  return s;
}

bool in_scope(const WorldModel& w, const ObjectId& id, const Scope& s) {
  if (s.container) return world::has_ancestor(w, id, *s.container);
  if (s.zone) {
    const world::Zone* z = world::zone_of_object(w, id);
    if (!z || z->name != *s.zone) return false;
    const ObjectRecord* host = world::find_container(w, *s.zone);
    return !host || host->id != id;
  }
  return true;
}

bool in_point_scope(const WorldModel& w, const ObjectId& id, const std::optional<ObjectId>& pointed) {
  return !pointed || id == *pointed || world::has_ancestor(w, id, *pointed);
}

/// Objects matching `phrase` (or any visible object when the phrase is generic).
std::vector<ObjectId> matching(const WorldModel& w, const Tokens& phrase) {
  std::vector<ObjectId> out;
  if (phrase.empty() || any_generic(phrase)) {
    for (const auto& [id, o] : w.objects) {
      if (world::is_visible(w, id) && o.parent.kind != world::ParentRef::Kind::gripper) out.push_back(id);
    }
    return out;
  }
  for (const auto& r : perception::detect(w, text::join(phrase, " "))) out.push_back(r.object_id);
  std::sort(out.begin(), out.end());
  return out;
}

/// Picks the single object a describe/identity/state question is about.
VqaResult resolve_subject(const WorldModel& w, const VqaQuery& q, const Tokens& subject_tokens) {
  if (q.pointed) {
    VqaResult r;
    r.subject = q.pointed;
    return r;
  }
  auto [phrase, location] = split_location(subject_tokens);
  if (phrase.empty() || all_referents(phrase)) {
    if (!location.empty()) phrase = {"object"};
    else if (q.focus && w.find_object(*q.focus)) {
      VqaResult r;
      r.subject = q.focus;
      return r;
    } else {
      return fail(ErrorCode::no_target, "I am not sure which object you mean");
    }
  }
  Scope scope = resolve_scope(w, location);
  if (!scope.ok) return fail(ErrorCode::no_target, scope.reason);

  std::vector<ObjectId> candidates;
  if (any_generic(phrase)) {
    for (const auto& id : matching(w, phrase)) {
      if (in_scope(w, id, scope) && (!scope.container || id != *scope.container)) candidates.push_back(id);
    }
  } else {
    auto results = perception::detect(w, text::join(phrase, " "));
    std::erase_if(results, [&](const perception::DetectionResult& r) { return !in_scope(w, r.object_id, scope); });
    if (!results.empty()) candidates = perception::top_candidates(results);
  }
  if (candidates.empty() && location.empty()) {
    // "is the cupboard open": an appliance zone stands for the container in it.
    if (const ObjectRecord* c = world::find_container(w, text::join(phrase, " "))) candidates.push_back(c->id);
  }
  if (candidates.empty()) return fail(ErrorCode::no_target, "I can't see " + text::join(phrase, " "));
  if (candidates.size() > 1) {
    VqaResult r = fail(ErrorCode::ambiguous_target, "more than one object matches");
    r.candidates = std::move(candidates);
    return r;
  }
  VqaResult r;
  r.subject = candidates.front();
  return r;
}

std::string with_article(const std::string& phrase) {
  bool vowel = !phrase.empty() && std::string_view("aeiou").find(static_cast<char>(std::tolower(phrase[0]))) != std::string_view::npos;
  return (vowel ? "an " : "a ") + phrase;
}

std::string describe(const ObjectRecord& o) {
  if (auto it = o.attributes.find("description"); it != o.attributes.end()) return sentence(it->second);
  std::string s;
  if (auto it = o.attributes.find("color"); it != o.attributes.end()) s += it->second + " ";
  return sentence(with_article(s + o.name));
}

std::string identify(const ObjectRecord& o) {
  std::string what;
  if (auto it = o.attributes.find("description"); it != o.attributes.end()) {
    what = it->second;
    if (!what.empty()) what[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(what[0])));
    if (!what.empty() && what.back() == '.') what.pop_back();
  } else {
    what = with_article(o.name);
  }
  return sentence("it is " + what);
}

std::optional<bool> attribute_flag(const ObjectRecord& o, const std::string& key) {
  auto it = o.attributes.find(key);
  if (it == o.attributes.end()) return std::nullopt;
  std::string v = text::to_lower(it->second);
  if (v == "yes" || v == "true") return true;
  if (v == "no" || v == "false") return false;
  return std::nullopt;
}

}  // namespace

std::optional<QuestionForm> classify_question(const std::string& question) {
  Tokens t = text::tokenize(question);
  if (t.empty()) return std::nullopt;
  if (find(t, "describe") >= 0) return QuestionForm::description;
  auto how = find(t, "how");
  if (how >= 0 && static_cast<std::size_t>(how + 1) < t.size() && t[how + 1] == "many") return QuestionForm::count;
  if (find(t, "any") >= 0) return QuestionForm::existence;
  if (t.size() >= 2 && (t[0] == "is" || t[0] == "are") && t[1] == "there") return QuestionForm::existence;
  if ((t[0] == "is" || t[0] == "are") && kStates.contains(t.back())) return QuestionForm::state;
  if (t[0] == "what" && t.size() >= 2 && (t[1] == "is" || t[1] == "are")) return QuestionForm::identity;
  return std::nullopt;
}

VqaResult answer_question(const WorldModel& w, const VqaQuery& q) {
  auto form = classify_question(q.question);
  if (!form) return fail(ErrorCode::unresolvable_question, "I can't answer that kind of question");
  Tokens t = text::tokenize(q.question);

  switch (*form) {
    case QuestionForm::existence:
    case QuestionForm::count: {
      std::size_t start = 0;
      if (*form == QuestionForm::count) start = static_cast<std::size_t>(find(t, "many")) + 1;
      else if (auto any = find(t, "any"); any >= 0) start = static_cast<std::size_t>(any) + 1;
      else start = 2;  // "is there ..."
      Tokens rest(t.begin() + static_cast<std::ptrdiff_t>(start), t.end());
      Tokens object_phrase;
      std::size_t i = 0;
      for (; i < rest.size() && !kPrepositions.contains(rest[i]) && !kPhraseStops.contains(rest[i]); ++i) {
        object_phrase.push_back(rest[i]);
      }
      Tokens location;
      for (; i < rest.size(); ++i) {
        if (kPrepositions.contains(rest[i])) {
          location.assign(rest.begin() + static_cast<std::ptrdiff_t>(i) + 1, rest.end());
          break;
        }
      }
      std::erase_if(location, [](const std::string& s) { return kPhraseStops.contains(s); });
      location = strip_filler(location);
      object_phrase = strip_filler(object_phrase);
      if (object_phrase.empty()) return fail(ErrorCode::unresolvable_question, "what should I look for?");

      Scope scope = resolve_scope(w, location);
      if (!scope.ok) return fail(ErrorCode::no_target, scope.reason);
      int n = 0;
      for (const auto& id : matching(w, object_phrase)) {
        if (scope.container && id == *scope.container) continue;
        if (in_scope(w, id, scope) && in_point_scope(w, id, q.pointed)) ++n;
      }
      VqaResult r;
      r.subject = q.pointed;
      if (*form == QuestionForm::existence) {
        r.answer = n > 0 ? "Yes, " + std::to_string(n) + "." : "No.";
      } else {
        r.answer = n == 0 ? "There are none." : n == 1 ? "There is 1." : "There are " + std::to_string(n) + ".";
      }
      return r;
    }

    case QuestionForm::state: {
      std::string state = t.back();
      Tokens subject(t.begin() + 1, t.end() - 1);
      VqaResult r = resolve_subject(w, q, subject);
      if (!r.subject) return r;
      const ObjectRecord& o = w.objects.at(*r.subject);
      std::optional<bool> truth;
      if (state == "open" || state == "closed") {
        if (o.is_container) {
          truth = o.is_open.value_or(false) == (state == "open");
        } else if (auto f = attribute_flag(o, "open")) {  // lids, laptops
          truth = *f == (state == "open");
        }
      } else if (state == "clean" || state == "dirty") {
        if (auto f = attribute_flag(o, "clean")) truth = *f == (state == "clean");
      } else if (state == "empty" || state == "full") {
        if (o.is_container) truth = world::children_of(w, o.id).empty() == (state == "empty");
      } else if (state == "on" || state == "off") {
        if (auto f = attribute_flag(o, "power")) truth = *f == (state == "on");
      }
      if (!truth) return fail(ErrorCode::unresolvable_question, "I can't tell whether the " + o.name + " is " + state);
      r.answer = *truth ? "Yes." : "No.";
      return r;
    }

    case QuestionForm::description:
    case QuestionForm::identity: {
      std::size_t start = *form == QuestionForm::description ? static_cast<std::size_t>(find(t, "describe")) + 1 : 2;
      Tokens subject(t.begin() + static_cast<std::ptrdiff_t>(std::min(start, t.size())), t.end());
      VqaResult r = resolve_subject(w, q, subject);
      if (!r.subject) return r;
      const ObjectRecord& o = w.objects.at(*r.subject);
      r.answer = *form == QuestionForm::description ? describe(o) : identify(o);
      return r;
    }
  }
  return fail(ErrorCode::unresolvable_question, "I can't answer that kind of question");
}

}  // namespace butler::skills
