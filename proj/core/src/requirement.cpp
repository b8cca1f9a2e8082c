#include "reqconflict/requirement.hpp"

#include <cctype>
#include <map>

#include "reqconflict/text.hpp"

namespace reqconflict {

Entity::Entity(std::string base, std::set<std::string> modifiers) {
  base_ = text::join(text::split_words(base), " ");
  if (base_.empty()) throw std::invalid_argument("entity base must not be empty");
  for (const auto& m : modifiers) {
    auto n = text::normalize(m);
    if (!n.empty()) modifiers_.insert(std::move(n));
  }
}

const char* to_string(OperationMode mode) {
  switch (mode) {
    case OperationMode::DEFAULT: return "DEFAULT";
    case OperationMode::ABLE: return "ABLE";
    case OperationMode::NOT: return "NOT";
  }
  return "DEFAULT";
}

std::optional<OperationMode> parse_mode(std::string_view s) {
  if (s == "DEFAULT") return OperationMode::DEFAULT;
  if (s == "ABLE") return OperationMode::ABLE;
  if (s == "NOT") return OperationMode::NOT;
  return std::nullopt;
}

const char* to_string(Connective c) { return c == Connective::AND ? "AND" : "OR"; }

void add_constraint(Restriction& restriction, std::string_view constraint) {
  auto n = text::normalize(constraint);
  if (!n.empty()) restriction.insert(std::move(n));
}

EventSpec EventSpec::single(Condition c) {
  EventSpec e;
  e.kind = EventKind::CONDITIONS;
  e.conditions.push_back(std::move(c));
  return e;
}

EventSpec EventSpec::joined(std::vector<Condition> cs, Connective connective) {
  EventSpec e;
  e.kind = cs.empty() ? EventKind::ALL : EventKind::CONDITIONS;
  if (cs.size() >= 2) e.connective = connective;
  e.conditions = std::move(cs);
  return e;
}

bool is_valid_id(std::string_view id) {
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id.front()))) return false;
  for (char c : id) {
    const auto u = static_cast<unsigned char>(c);
    if (!std::isalnum(u) && c != '-' && c != '_' && c != '.') return false;
  }
  return true;
}

namespace {

void check_operation(const OperationSpec& op, const std::string& where, std::vector<std::string>& out) {
  if (text::trim(op.predicate).empty()) out.push_back(where + ": empty predicate");
}

void check_restriction(const Restriction& r, const std::string& where, std::vector<std::string>& out) {
  for (const auto& c : r) {
    if (text::trim(c).empty()) out.push_back(where + ": empty restriction constraint");
  }
}

}  // namespace

std::vector<std::string> validate_requirement_set(const std::vector<Requirement>& reqs) {
  std::vector<std::string> out;
  std::map<std::string, int> seen;
  std::map<int, const Requirement*> group_rep;
  for (const auto& r : reqs) {
    const std::string where = "requirement '" + r.id + "'";
    if (!is_valid_id(r.id)) out.push_back(where + ": id must start with a letter and use letters, digits, '-', '_', '.'");
    if (++seen[r.id] == 2) out.push_back(where + ": duplicate id");
    if (r.group_id < 0) out.push_back(where + ": negative groupId");

    const auto& e = r.event;
    if (e.kind == EventKind::ALL && !e.conditions.empty()) out.push_back(where + ": event ALL with conditions");
    if (e.kind == EventKind::CONDITIONS && e.conditions.empty()) out.push_back(where + ": event without conditions");
    if (e.connective && e.conditions.size() < 2) out.push_back(where + ": connective on fewer than two conditions");
    if (!e.connective && e.conditions.size() >= 2) out.push_back(where + ": several conditions but no connective");
    for (std::size_t i = 0; i < e.conditions.size(); ++i) {
      const std::string cw = where + " condition " + std::to_string(i + 1);
      check_operation(e.conditions[i].operation, cw, out);
      check_restriction(e.conditions[i].restriction, cw, out);
    }
    check_operation(r.operation, where, out);
    check_restriction(r.restriction, where, out);

    const auto [it, inserted] = group_rep.emplace(r.group_id, &r);
    if (!inserted) {
      const auto& rep = *it->second;
      if (rep.agent != r.agent) {
        out.push_back(where + ": shares groupId " + std::to_string(r.group_id) + " with '" + rep.id +
                      "' but has a different agent");
      }
      if (rep.event != r.event) {
        out.push_back(where + ": shares groupId " + std::to_string(r.group_id) + " with '" + rep.id +
                      "' but has a different event");
      }
    }
  }
  return out;
}

}  // namespace reqconflict
