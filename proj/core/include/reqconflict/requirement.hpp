// The eight-tuple requirement model: {id, groupId, event, agent, operation,
// input, output, restriction}.

#pragma once

#include <compare>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace reqconflict {

/// A noun phrase: head (compounds included) plus its modifiers.
class Entity {
 public:
  /// Throws std::invalid_argument when `base` is blank. Modifiers are
  /// normalized (lowercased, whitespace collapsed); blank ones are dropped.
  explicit Entity(std::string base, std::set<std::string> modifiers = {});

  const std::string& base() const { return base_; }
  const std::set<std::string>& modifiers() const { return modifiers_; }

  friend bool operator==(const Entity&, const Entity&) = default;
  friend auto operator<=>(const Entity&, const Entity&) = default;

 private:
  std::string base_;
  std::set<std::string> modifiers_;
};

using EntitySet = std::set<Entity>;

enum class OperationMode { DEFAULT, ABLE, NOT };

const char* to_string(OperationMode mode);
std::optional<OperationMode> parse_mode(std::string_view s);

struct OperationSpec {
  OperationMode mode = OperationMode::DEFAULT;
  std::string predicate;  // lowercase lemma, e.g. "send", "allow to delete", "be active"

  friend bool operator==(const OperationSpec&, const OperationSpec&) = default;
  friend auto operator<=>(const OperationSpec&, const OperationSpec&) = default;
};

using Restriction = std::set<std::string>;

/// Normalizes and inserts; blank constraints are ignored.
void add_constraint(Restriction& restriction, std::string_view constraint);

struct Condition {
  std::optional<Entity> agent;
  OperationSpec operation;
  EntitySet input;
  EntitySet output;
  Restriction restriction;

  friend bool operator==(const Condition&, const Condition&) = default;
};

enum class EventKind { ALL, CONDITIONS };
enum class Connective { AND, OR };

const char* to_string(Connective c);

struct EventSpec {
  EventKind kind = EventKind::ALL;
  std::vector<Condition> conditions;
  std::optional<Connective> connective;

  static EventSpec all() { return {}; }
  static EventSpec single(Condition c);
  static EventSpec joined(std::vector<Condition> cs, Connective connective);

  bool is_all() const { return kind == EventKind::ALL; }

  friend bool operator==(const EventSpec&, const EventSpec&) = default;
};

struct Requirement {
  std::string id;
  int group_id = 0;
  EventSpec event;
  std::optional<Entity> agent;  // absent: passive voice with no by-phrase
  OperationSpec operation;
  EntitySet input;
  EntitySet output;
  Restriction restriction;

  friend bool operator==(const Requirement&, const Requirement&) = default;
};

/// True for ids of the form letter followed by letters, digits, '-', '_' or '.'.
bool is_valid_id(std::string_view id);

/// Structural problems across a set; empty when all invariants hold.
std::vector<std::string> validate_requirement_set(const std::vector<Requirement>& reqs);

}  // namespace reqconflict
