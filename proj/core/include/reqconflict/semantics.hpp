// Relational operators over tuple elements: equivalence (=), inclusion (⊃)
// and contradiction (∦), all relative to a synonym lexicon.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "reqconflict/requirement.hpp"

namespace reqconflict {

class LexiconError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Disjoint groups of mutually synonymous words or phrases.
class SynonymLexicon {
 public:
  SynonymLexicon() = default;
  /// `#` comments; one comma-separated group per line.
  static SynonymLexicon parse(std::istream& in);
  static SynonymLexicon load(const std::filesystem::path& path);
  /// The seed lexicon shipped with the library.
  static const SynonymLexicon& builtin();
  static std::string_view builtin_text();

  /// Throws LexiconError when a member already belongs to another group.
  void add_group(const std::vector<std::string>& members);

  /// Canonical spelling: the group representative of the whole phrase when
  /// it is a lexicon entry, otherwise the word-by-word representatives.
  /// Lowercased and whitespace-normalized.
  std::string canonical(std::string_view s) const;

  std::size_t group_count() const { return group_count_; }

 private:
  std::string lookup(const std::string& normalized) const;

  std::map<std::string, std::string, std::less<>> representative_;
  std::size_t group_count_ = 0;
};

bool string_eq(std::string_view a, std::string_view b, const SynonymLexicon& lex);

bool entity_includes(const Entity& e1, const Entity& e2, const SynonymLexicon& lex);
bool entity_eq(const Entity& e1, const Entity& e2, const SynonymLexicon& lex);

/// Agents in requirement-to-requirement comparisons: an absent agent equals
/// only another absent agent.
bool agent_eq(const std::optional<Entity>& a, const std::optional<Entity>& b, const SynonymLexicon& lex);
/// Agents where a condition is matched against a requirement: an absent agent
/// on either side matches any agent.
bool agent_matches(const std::optional<Entity>& a, const std::optional<Entity>& b, const SynonymLexicon& lex);

bool entityset_includes(const EntitySet& s1, const EntitySet& s2, const SynonymLexicon& lex);
bool entityset_eq(const EntitySet& s1, const EntitySet& s2, const SynonymLexicon& lex);

enum class OpRelation { EQUIVALENT, INCLUDES, INCLUDED_BY, CONTRADICTS, UNRELATED };

const char* to_string(OpRelation r);
OpRelation op_relation(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex);
/// EQUIVALENT or INCLUDES.
bool op_includes(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex);
bool op_eq(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex);
bool op_contradicts(const OperationSpec& o1, const OperationSpec& o2, const SynonymLexicon& lex);

enum class ConstraintCategory { FREQUENCY, QUANTITY, TIME, PLACE, OTHER };

const char* to_string(ConstraintCategory c);
/// First matching category in the order FREQUENCY, QUANTITY, TIME, PLACE.
ConstraintCategory categorize(std::string_view constraint);

bool restriction_includes(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex);
bool restriction_eq(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex);
/// Some category other than OTHER has, on each side, a constraint with no
/// equal counterpart on the other side.
bool restriction_contradicts(const Restriction& r1, const Restriction& r2, const SynonymLexicon& lex);
/// The category that makes restriction_contradicts true, if any.
std::optional<ConstraintCategory> contradicting_category(const Restriction& r1, const Restriction& r2,
                                                         const SynonymLexicon& lex);

/// c1 covers c2: equal agents, c1.operation ⊃ c2.operation, inputs and
/// outputs included, equal restrictions.
bool condition_includes(const Condition& c1, const Condition& c2, const SynonymLexicon& lex);
/// ALL is the always-true event: every event includes ALL, ALL includes
/// only ALL.
bool event_includes(const EventSpec& e1, const EventSpec& e2, const SynonymLexicon& lex);
bool event_eq(const EventSpec& e1, const EventSpec& e2, const SynonymLexicon& lex);
/// Two distinct conditions with equal agents, contradicting operations and
/// c1 including c2 on input and output.
bool event_self_contradicts(const EventSpec& e, const SynonymLexicon& lex);

}  // namespace reqconflict
