// Conflict detection over a set of requirement tuples: inconsistency,
// inclusion and interlock.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reqconflict/conllu.hpp"
#include "reqconflict/extractor.hpp"
#include "reqconflict/interlock.hpp"
#include "reqconflict/requirement.hpp"
#include "reqconflict/semantics.hpp"

namespace reqconflict {

enum class ConflictKind {
  OPERATION_INCONSISTENCY,
  RESTRICTION_INCONSISTENCY,
  EVENT_INCONSISTENCY,
  OPERATION_INCLUSION,
  EVENT_INCLUSION,
  OPERATION_EVENT_INTERLOCK,
  INPUT_OUTPUT_INTERLOCK,
  SELF_CONTRADICTORY_EVENT,
};

inline constexpr ConflictKind kAllConflictKinds[] = {
    ConflictKind::OPERATION_INCONSISTENCY,   ConflictKind::RESTRICTION_INCONSISTENCY,
    ConflictKind::EVENT_INCONSISTENCY,       ConflictKind::OPERATION_INCLUSION,
    ConflictKind::EVENT_INCLUSION,           ConflictKind::OPERATION_EVENT_INTERLOCK,
    ConflictKind::INPUT_OUTPUT_INTERLOCK,    ConflictKind::SELF_CONTRADICTORY_EVENT,
};

const char* to_string(ConflictKind kind);
std::optional<ConflictKind> parse_conflict_kind(std::string_view s);
bool is_interlock(ConflictKind kind);

/// NONE: symmetric kinds and interlocks. FORWARD: members[0] acts on
/// members[1] (includes it, contradicts its event). BOTH: holds either way.
enum class Direction { NONE, FORWARD, BOTH };

const char* to_string(Direction d);

struct Conflict {
  ConflictKind kind;
  std::vector<std::string> members;
  Direction direction = Direction::NONE;
  std::vector<std::string> evidence;

  friend bool operator==(const Conflict&, const Conflict&) = default;
};

/// Orders by kind, then members.
bool conflict_less(const Conflict& a, const Conflict& b);

using ParseIndex = std::map<std::string, ParsedSentence>;

// The conflict formulas, each for the ordered pair (r1, r2).
bool operation_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
bool restriction_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
bool event_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
bool operation_inclusion(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
bool event_inclusion(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
/// Executing r1's operation triggers every condition of r2's event. False
/// when r2 is triggered unconditionally (ALL).
bool operation_event_dependency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);
bool input_output_dependency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);

/// Same (event, agent) under strict agent equality.
bool same_group(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);

struct PreprocessResult {
  std::vector<Requirement> requirements;
  std::vector<Conflict> conflicts;  // self-contradictory events
  std::vector<std::vector<std::size_t>> groups;  // indices into requirements
  std::vector<std::string> warnings;
};

/// Object-clause replacement, self-contradiction removal, OR splitting
/// (ids "<id>-or<k>"), grouping.
PreprocessResult preprocess(std::vector<Requirement> reqs, const ParseIndex& parses, const SynonymLexicon& lex,
                            const ExtractorOptions& options = {});

/// Partition of indices by (event, agent); groups ordered by first member.
std::vector<std::vector<std::size_t>> group_requirements(const std::vector<Requirement>& reqs,
                                                         const SynonymLexicon& lex);

std::vector<Conflict> check_pair_same_group(const Requirement& r1, const Requirement& r2,
                                            const SynonymLexicon& lex);

struct CrossGroupResult {
  std::vector<Conflict> conflicts;
  std::vector<DependencyEdge> operation_event_edges;
};

CrossGroupResult check_pair_cross_group(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);

/// Edge r1 -> r2 in the input-output graph, with the justifying entity pairs.
std::optional<DependencyEdge> check_pair_io(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex);

std::vector<Conflict> find_interlocks(const InterlockGraph& graph);

struct DetectionResult {
  std::vector<Conflict> conflicts;
  std::vector<Requirement> analyzed;  // after preprocessing
  std::vector<std::vector<std::size_t>> groups;
  InterlockGraph operation_event{DependencyKind::OPERATION_EVENT};
  InterlockGraph input_output{DependencyKind::INPUT_OUTPUT};
  std::vector<std::string> warnings;
};

DetectionResult detect(const std::vector<Requirement>& reqs, const ParseIndex& parses, const SynonymLexicon& lex,
                       const ExtractorOptions& options = {});

}  // namespace reqconflict
