// Conflict reports, gold labels and scoring.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqconflict/detector.hpp"
#include "reqconflict/requirement.hpp"

namespace reqconflict {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GoldLabel {
  ConflictKind kind;
  std::set<std::string> members;

  friend bool operator==(const GoldLabel&, const GoldLabel&) = default;
};

/// `KIND: id1,id2,...` per line; `#` comments. Throws ValidationError.
std::vector<GoldLabel> parse_gold(std::istream& in);
std::vector<GoldLabel> load_gold(const std::filesystem::path& path);

/// Throws ValidationError naming the first gold id missing from `known_ids`.
void check_gold_ids(const std::vector<GoldLabel>& gold, const std::set<std::string>& known_ids);

struct EvaluationResult {
  std::size_t detected = 0;
  std::size_t correct = 0;
  std::size_t known = 0;
  double precision = 1.0;
  double recall = 1.0;
};

/// Counts only; precision 1 when nothing was detected, recall 1 when
/// nothing was known.
EvaluationResult evaluation_from_counts(std::size_t detected, std::size_t correct, std::size_t known);

/// A detected conflict is correct when an unused gold label has the same
/// kind and member set (matching is one-to-one).
EvaluationResult evaluate(const std::vector<Conflict>& detected, const std::vector<GoldLabel>& gold);

/// "87.50"
std::string format_percent(double fraction);

inline constexpr const char* kTupleElements[] = {"event", "agent", "operation", "input", "output", "restriction"};

struct TupleScores {
  std::size_t total = 0;
  std::size_t correct[6] = {};  // per kTupleElements
  std::size_t all_correct = 0;

  double accuracy(std::size_t element) const;
  /// Fraction of requirements with all six elements right.
  double overall() const;
  /// Mean of the six per-element accuracies.
  double average() const;
};

/// Compares tuples by id with plain structural equality per element.
/// Throws ValidationError when the id sets differ.
TupleScores score_tuples(const std::vector<Requirement>& extracted, const std::vector<Requirement>& gold);

struct AggregateScores {
  double macro_average = 1.0;  // mean over datasets of their average accuracy
  double micro_average = 1.0;  // element-level accuracy over the pooled requirements
  double macro_overall = 1.0;
  double micro_overall = 1.0;
};

AggregateScores aggregate(const std::vector<TupleScores>& datasets);

std::string format_tuple_table(const std::vector<std::pair<std::string, TupleScores>>& datasets);
std::string format_evaluation(const EvaluationResult& result);

nlohmann::ordered_json to_json(const Conflict& conflict);
/// One JSON object per line.
std::string conflicts_jsonl(const std::vector<Conflict>& conflicts);
std::string conflicts_text(const std::vector<Conflict>& conflicts);

}  // namespace reqconflict
