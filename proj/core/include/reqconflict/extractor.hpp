// Rule-based extraction of requirement tuples from dependency parses of
// "shall"-style sentences, plus the precheck that flags sentences outside the
// supported grammar.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reqconflict/conllu.hpp"
#include "reqconflict/requirement.hpp"

namespace reqconflict {

enum class PrecheckFlag {
  MISSING_MODAL,
  MISSING_CONDITIONAL_KEYWORD,
  CONTAINS_PRONOUN,
  MIXED_CONNECTIVES,
  NESTED_CONDITIONAL,
};

const char* to_string(PrecheckFlag flag);

std::vector<PrecheckFlag> precheck(const ParsedSentence& sentence);

enum class ExtractionErrorCode { NO_PREDICATE, NO_AGENT, MALFORMED_EVENT, NOT_NOMINAL };

const char* to_string(ExtractionErrorCode code);

class ExtractionError : public std::runtime_error {
 public:
  ExtractionError(ExtractionErrorCode code, const std::string& req_id, const std::string& detail);
  ExtractionErrorCode code() const noexcept { return code_; }
  const std::string& req_id() const noexcept { return req_id_; }

 private:
  ExtractionErrorCode code_;
  std::string req_id_;
};

/// Phrases that turn the following verb into an ABLE operation
/// ("shall enable the user to X" -> ABLE X).
class DirectiveLexicon {
 public:
  /// {enable, be able to, be capable of}
  DirectiveLexicon();
  /// One phrase per line, `#` comments.
  static DirectiveLexicon parse(std::istream& in);
  static DirectiveLexicon load(const std::filesystem::path& path);

  /// Matches a verb lemma ("enable") or a copular adjective ("able", from
  /// "be able to"). Lowercase input.
  bool matches_verb(std::string_view lemma) const;
  bool matches_adjective(std::string_view lemma) const;
  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  void add(std::string phrase);

  std::vector<std::string> phrases_;
  std::vector<std::string> verbs_;
  std::vector<std::string> adjectives_;
};

struct ExtractorOptions {
  DirectiveLexicon directives;
};

/// Where a tuple element came from.
struct Provenance {
  std::string element;  // event, agent, operation, input, output, restriction
  int tuple = 0;        // index among the requirements split from one sentence
  std::vector<int> tokens;
  std::string rule;
};

struct ExtractionTrace {
  std::string req_id;
  std::vector<Provenance> provenance;
  std::vector<std::string> warnings;
};

/// The predicate as located in the parse.
struct Predicate {
  OperationSpec operation;
  int head = 0;                    // structural head: carries subject, aux, cop
  std::vector<int> action_tokens;  // tokens whose objects are the operation's objects
  int modal = 0;                   // 0 when none
  bool passive = false;
  std::string rule;
  std::vector<int> tokens;  // everything that shaped the operation (modal, neg, directive, ...)
  /// Dependents borrowed from the first of several conjoined predicates.
  std::vector<int> shared_dependents;
  /// Tokens the object and restriction rules may look at; empty = all.
  std::vector<int> scope;
};

/// Locates the main-clause predicate. `clause_head` overrides the search and
/// names the clause's own head (used for conditional clauses). Throws
/// ExtractionError(NO_PREDICATE).
Predicate identify_operation(const ParsedSentence& sentence, const ExtractorOptions& options = {},
                             int clause_head = 0);

/// Active voice: nsubj of the head. Passive: the by-phrase, else absent.
/// With `required`, a missing active subject throws ExtractionError(NO_AGENT).
std::optional<Entity> identify_agent(const ParsedSentence& sentence, const Predicate& predicate,
                                     bool required = true, std::vector<int>* tokens = nullptr);

/// Conditional clauses introduced by when/if before the main subject.
EventSpec identify_event(const ParsedSentence& sentence, const Predicate& main,
                         const ExtractorOptions& options = {},
                         const std::vector<ParsedSentence>& clause_parses = {},
                         ExtractionTrace* trace = nullptr);

std::pair<EntitySet, EntitySet> identify_input_output(const ParsedSentence& sentence, const Predicate& predicate,
                                                      ExtractionTrace* trace = nullptr, int tuple = 0);

Restriction identify_restriction(const ParsedSentence& sentence, const Predicate& predicate,
                                 ExtractionTrace* trace = nullptr, int tuple = 0);

/// Entity rooted at a nominal token. Throws ExtractionError(NOT_NOMINAL).
Entity parse_entity(const ParsedSentence& sentence, int head);

struct ExtractionResult {
  std::vector<Requirement> requirements;
  ExtractionTrace trace;
};

/// Full tuple extraction. A main clause with several conjoined predicates
/// yields one requirement per predicate, ids "<id>.<k>", all sharing
/// `group_id`, agent and event.
ExtractionResult extract(const ParsedSentence& sentence, const std::string& id, int group_id,
                         const ExtractorOptions& options = {},
                         const std::vector<ParsedSentence>& clause_parses = {});

/// The five-tuple of a clause rooted at `clause_head` (conditions, object
/// clauses). The agent may be absent.
Condition extract_clause(const ParsedSentence& sentence, int clause_head, const ExtractorOptions& options = {},
                         ExtractionTrace* trace = nullptr, const std::string& label = "clause");

/// Head of a clausal complement of the main predicate, 0 when none.
int find_object_clause(const ParsedSentence& sentence, const ExtractorOptions& options = {});

std::string format_trace(const ExtractionTrace& trace);

}  // namespace reqconflict
