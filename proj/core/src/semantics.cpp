#include "reqconflict/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "reqconflict/text.hpp"

namespace reqconflict {

namespace detail {
extern const std::string_view builtin_lexicon_text;
}

SynonymLexicon SynonymLexicon::parse(std::istream& in) {
  SynonymLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (text::trim(line).empty()) continue;
    std::vector<std::string> members;
    for (const auto& m : text::split(line, ',')) {
      auto n = text::normalize(m);
      if (!n.empty()) members.push_back(std::move(n));
    }
    try {
      lex.add_group(members);
    } catch (const LexiconError& e) {
      throw LexiconError("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LexiconError("cannot open lexicon " + path.string());
  return parse(in);
}

std::string_view SynonymLexicon::builtin_text() { return detail::builtin_lexicon_text; }

const SynonymLexicon& SynonymLexicon::builtin() {
  static const SynonymLexicon lex = [] {
    std::istringstream in{std::string(builtin_text())};
    return parse(in);
  }();
  return lex;
}

void SynonymLexicon::add_group(const std::vector<std::string>& members) {
  std::set<std::string> group;
  for (const auto& m : members) {
    auto n = text::normalize(m);
    if (n.empty()) continue;
    if (representative_.contains(n)) throw LexiconError("'" + n + "' already belongs to another group");
    group.insert(std::move(n));
  }
  if (group.empty()) return;
  const std::string rep = *group.begin();
  for (const auto& m : group) representative_[m] = rep;
  ++group_count_;
}

std::string SynonymLexicon::lookup(const std::string& normalized) const {
  const auto it = representative_.find(normalized);
  return it == representative_.end() ? normalized : it->second;
}

std::string SynonymLexicon::canonical(std::string_view s) const {
  const auto n = text::normalize(s);
  if (const auto it = representative_.find(n); it != representative_.end()) return it->second;
  auto words = text::split_words(n);
  for (auto& w : words) w = lookup(w);
  return text::join(words, " ");
}

bool string_eq(std::string_view a, std::string_view b, const SynonymLexicon& lex) {
  return lex.canonical(a) == lex.canonical(b);
}

namespace {

// "of uav" -> "uav", "uav's" -> "uav"; nullopt for other modifiers.
std::optional<std::string> part_of_owner(const std::string& modifier) {
  if (text::starts_with_word(modifier, "of") && modifier.size() > 3) return modifier.substr(3);
  if (modifier.size() > 2 && modifier.ends_with("'s")) return modifier.substr(0, modifier.size() - 2);
  return std::nullopt;
}

bool has_part_of(const Entity& e) {
  return std::any_of(e.modifiers().begin(), e.modifiers().end(),
                     [](const std::string& m) { return part_of_owner(m).has_value(); });
}

std::set<std::string> canonical_set(const std::set<std::string>& items, const SynonymLexicon& lex) {
  std::set<std::string> out;
  for (const auto& i : items) out.insert(lex.canonical(i));
  return out;
}

}  // namespace

bool entity_includes(const Entity& e1, const Entity& e2, const SynonymLexicon& lex) {
  if (string_eq(e1.base(), e2.base(), lex)) {
    const auto m1 = canonical_set(e1.modifiers(), lex);
    const auto m2 = canonical_set(e2.modifiers(), lex);
    if (std::includes(m2.begin(), m2.end(), m1.begin(), m1.end())) return true;
  }
  // Whole includes part. Restricted to wholes that are not themselves parts so
  // that inclusion stays transitive.
  if (has_part_of(e1)) return false;
  for (const auto& m : e2.modifiers()) {
    const auto owner = part_of_owner(m);
    if (owner && string_eq(*owner, e1.base(), lex)) return true;
  }
  return false;
}

bool entity_eq(const Entity& e1, const Entity& e2, const SynonymLexicon& lex) {
  return string_eq(e1.base(), e2.base(), lex) &&
         canonical_set(e1.modifiers(), lex) == canonical_set(e2.modifiers(), lex);
}

bool agent_eq(const std::optional<Entity>& a, const std::optional<Entity>& b, const SynonymLexicon& lex) {
  if (!a || !b) return !a && !b;
  return entity_eq(*a, *b, lex);
}

bool agent_matches(const std::optional<Entity>& a, const std::optional<Entity>& b, const SynonymLexicon& lex) {
  if (!a || !b) return true;
  return entity_eq(*a, *b, lex);
}

bool entityset_includes(const EntitySet& s1, const EntitySet& s2, const SynonymLexicon& lex) {
  return std::all_of(s2.begin(), s2.end(), [&](const Entity& e2) {
    return std::any_of(s1.begin(), s1.end(), [&](const Entity& e1) { return entity_includes(e1, e2, lex); });
  });
}

bool entityset_eq(const EntitySet& s1, const EntitySet& s2, const SynonymLexicon& lex) {
  return entityset_includes(s1, s2, lex) && entityset_includes(s2, s1, lex);
}

const char* to_string(OpRelation r) {
  switch (r) {
    case OpRelation::EQUIVALENT: return "EQUIVALENT";
    case OpRelation::INCLUDES: return "INCLUDES";
    case OpRelation::INCLUDED_BY: return "INCLUDED_BY";
    case OpRelation::CONTRADICTS: return "CONTRADICTS";
    case OpRelation::UNRELATED: return "UNRELATED";
  }
  return "UNRELATED";
}

OpRelation op_relation(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex) {
  if (!string_eq(o1.predicate, o2.predicate, lex)) return OpRelation::UNRELATED;
  using M = OperationMode;
  if (o1.mode == o2.mode) return OpRelation::EQUIVALENT;
  if (o2.mode == M::ABLE) return OpRelation::INCLUDES;
  if (o1.mode == M::ABLE) return OpRelation::INCLUDED_BY;
  return OpRelation::CONTRADICTS;
}

bool op_includes(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex) {
  const auto r = op_relation(o1, o2, lex);
  return r == OpRelation::EQUIVALENT || r == OpRelation::INCLUDES;
}

bool op_eq(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex) {
  return op_relation(o1, o2, lex) == OpRelation::EQUIVALENT;
}

bool op_contradicts(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex) {
  return op_relation(o1, o2, lex) == OpRelation::CONTRADICTS;
}

const char* to_string(ConstraintCategory c) {
  switch (c) {
    case ConstraintCategory::FREQUENCY: return "frequency";
    case ConstraintCategory::QUANTITY: return "quantity";
    case ConstraintCategory::TIME: return "time";
    case ConstraintCategory::PLACE: return "place";
    case ConstraintCategory::OTHER: return "other";
  }
  return "other";
}

ConstraintCategory categorize(std::string_view constraint) {
  static const std::set<std::string, std::less<>> frequency = {
      "every", "each", "per", "once", "twice", "thrice", "times", "hourly", "daily", "weekly",
      "monthly", "yearly", "periodically", "frequently", "repeatedly", "continuously"};
  static const std::set<std::string, std::less<>> quantity = {
      "only", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten",
      "single", "multiple", "most", "least", "maximum", "minimum", "all", "no", "none", "several", "many"};
  static const std::set<std::string, std::less<>> time = {
      "time", "immediately", "within", "before", "after", "until", "during", "always", "never", "now",
      "instantly", "promptly", "second", "seconds", "minute", "minutes", "hour", "hours", "day", "days",
      "ms", "milliseconds", "later", "first", "last", "simultaneously", "concurrently"};
  static const std::set<std::string, std::less<>> place = {"at", "in", "on", "from", "inside", "outside",
                                                           "near", "above", "below", "into", "onto"};
  const auto words = text::split_words(text::to_lower(constraint));
  const auto any_in = [&](const auto& table) {
    return std::any_of(words.begin(), words.end(), [&](const std::string& w) { return table.contains(w); });
  };
  const auto has_digit = std::any_of(words.begin(), words.end(), [](const std::string& w) {
    return std::any_of(w.begin(), w.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
  });
  if (any_in(frequency)) return ConstraintCategory::FREQUENCY;
  if (any_in(quantity) || has_digit) return ConstraintCategory::QUANTITY;
  if (any_in(time)) return ConstraintCategory::TIME;
  if (!words.empty() && place.contains(words.front())) return ConstraintCategory::PLACE;
  return ConstraintCategory::OTHER;
}

bool restriction_includes(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex) {
  const auto c1 = canonical_set(r1, lex);
  const auto c2 = canonical_set(r2, lex);
  return std::includes(c1.begin(), c1.end(), c2.begin(), c2.end());
}

bool restriction_eq(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex) {
  return canonical_set(r1, lex) == canonical_set(r2, lex);
}

std::optional<ConstraintCategory> contradicting_category(const Restriction& r1, const Restriction& r2,
                                                         const SynonymLexicon& lex) {
  const auto c1 = canonical_set(r1, lex);
  const auto c2 = canonical_set(r2, lex);
  const auto unmatched = [](const std::set<std::string>& mine, const std::set<std::string>& theirs,
                            ConstraintCategory cat) {
    return std::any_of(mine.begin(), mine.end(),
                       [&](const std::string& c) { return categorize(c) == cat && !theirs.contains(c); });
  };
  for (auto cat : {ConstraintCategory::FREQUENCY, ConstraintCategory::QUANTITY, ConstraintCategory::TIME,
                   ConstraintCategory::PLACE}) {
    if (unmatched(c1, c2, cat) && unmatched(c2, c1, cat)) return cat;
  }
  return std::nullopt;
}

bool restriction_contradicts(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex) {
  return contradicting_category(r1, r2, lex).has_value();
}

bool condition_includes(const Condition& c1, const Condition& c2, const SynonymLexicon& lex) {
  return agent_eq(c1.agent, c2.agent, lex) && op_includes(c1.operation, c2.operation, lex) &&
         entityset_includes(c1.input, c2.input, lex) && entityset_includes(c1.output, c2.output, lex) &&
         restriction_eq(c1.restriction, c2.restriction, lex);
}

bool event_includes(const EventSpec& e1, const EventSpec& e2, const SynonymLexicon& lex) {
  if (e1.is_all()) return e2.is_all();
  return std::all_of(e2.conditions.begin(), e2.conditions.end(), [&](const Condition& c2) {
    return std::any_of(e1.conditions.begin(), e1.conditions.end(),
                       [&](const Condition& c1) { return condition_includes(c1, c2, lex); });
  });
}

bool event_eq(const EventSpec& e1, const EventSpec& e2, const SynonymLexicon& lex) {
  return event_includes(e1, e2, lex) && event_includes(e2, e1, lex);
}

bool event_self_contradicts(const EventSpec& e, const SynonymLexicon& lex) {
  const auto& cs = e.conditions;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (i == j) continue;
      if (agent_eq(cs[i].agent, cs[j].agent, lex) && entityset_includes(cs[i].input, cs[j].input, lex) &&
          op_contradicts(cs[i].operation, cs[j].operation, lex) &&
          entityset_includes(cs[i].output, cs[j].output, lex)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace reqconflict
