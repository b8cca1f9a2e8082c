// Dependency-parsed requirement sentences and their CoNLL-U reader/writer.
//
// A ParsedSentence is immutable after loading. The extraction rules only
// ever query it through the accessors below (token lookup, arc search,
// subtree walks), so any UD-style parser output can feed the pipeline once
// its relation labels have been mapped onto the vocabulary used here
// (dobj, nsubjpass, auxpass, neg, nmod:<case>, ...).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reqconflict {

/// Error raised for malformed CoNLL-U input. `line()` is 1-based, 0 when the
/// problem is not tied to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line)
      : std::runtime_error(std::move(message)), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;  // "_" when the parser gave none
  std::string upos;
  std::string xpos;
  std::string feats = "_";
  std::string deps = "_";
  std::string misc = "_";

  bool space_after() const;

  friend bool operator==(const Token&, const Token&) = default;
};

struct DependencyArc {
  int head = 0;  // 0 is the virtual root
  int dependent = 0;
  std::string relation;

  /// "nmod:of" -> "nmod"
  std::string_view base_relation() const;
  /// "nmod:of" -> "of", "nsubj" -> ""
  std::string_view subtype() const;

  friend bool operator==(const DependencyArc&, const DependencyArc&) = default;
};

/// Criteria for find_arcs. Unset endpoints match anything. With
/// `include_subtypes`, relation "nmod" also matches "nmod:of", "nmod:at", ...
struct ArcQuery {
  std::string relation;
  std::optional<int> head;
  std::optional<int> dependent;
  bool include_subtypes = false;
};

class ParsedSentence {
 public:
  ParsedSentence() = default;
  /// Validates the invariants (unique 1-based indices, one root, arcs pointing
  /// at existing tokens). Throws ParseError naming the offending token.
  ParsedSentence(std::string req_id, std::string text, std::vector<Token> tokens,
                 std::vector<DependencyArc> arcs,
                 std::vector<std::pair<std::string, std::string>> comments = {});

  const std::string& req_id() const { return req_id_; }
  const std::string& text() const { return text_; }
  const std::vector<Token>& tokens() const { return tokens_; }
  /// Sorted by dependent index; exactly one per token.
  const std::vector<DependencyArc>& arcs() const { return arcs_; }
  /// Comment metadata in file order (req_id and text included).
  const std::vector<std::pair<std::string, std::string>>& comments() const { return comments_; }
  /// Relation labels outside the recognized inventory.
  const std::vector<std::string>& unknown_relations() const { return unknown_relations_; }
  bool has_warnings() const { return !unknown_relations_.empty(); }

  std::size_t size() const { return tokens_.size(); }
  bool contains(int index) const { return index >= 1 && index <= static_cast<int>(tokens_.size()); }
  const Token& token(int index) const;
  int head_of(int index) const;
  const std::string& relation_of(int index) const;
  int root() const;

  /// Lowercased lemma, or lowercased surface when the lemma is "_".
  std::string norm(int index) const;
  bool xpos_is(int index, std::string_view prefix) const;
  bool is_verbal(int index) const;
  bool is_nominal(int index) const;
  bool is_punct(int index) const;

  /// Dependents of `index` in token order.
  std::vector<int> children(int index) const;
  /// Dependents of `index` whose relation matches (subtype-aware when
  /// `include_subtypes`).
  std::vector<int> children(int index, std::string_view relation, bool include_subtypes = false) const;
  /// `index` and all its descendants, sorted.
  std::vector<int> subtree(int index) const;
  bool dominates(int ancestor, int index) const;

  /// Surface text of the given (sorted) tokens, honouring SpaceAfter=No.
  std::string render(const std::vector<int>& indices) const;
  /// Surface text rebuilt from tokens; equals text() for well-formed input.
  std::string reconstruct_text() const;

  /// A standalone sentence made of the given tokens, re-indexed from 1.
  /// `new_root` becomes the root; arcs leaving the selection are dropped.
  /// The returned mapping gives, for each new index - 1, the original index.
  std::pair<ParsedSentence, std::vector<int>> extract_subsentence(const std::vector<int>& indices,
                                                                   int new_root,
                                                                   std::string req_id) const;

  friend bool operator==(const ParsedSentence&, const ParsedSentence&) = default;

 private:
  std::string req_id_;
  std::string text_;
  std::vector<Token> tokens_;
  std::vector<DependencyArc> arcs_;
  std::vector<std::pair<std::string, std::string>> comments_;
  std::vector<std::string> unknown_relations_;
};

std::vector<DependencyArc> find_arcs(const ParsedSentence& sentence, const ArcQuery& query);

/// True when `relation` (base part) is in the recognized label inventory.
bool is_known_relation(std::string_view relation);

/// Translates parser-dialect relation labels onto the vocabulary used by the
/// extraction rules. Mapping is applied on the full label first, then on its
/// base part (the subtype is carried over), so "obl:tmod" -> "nmod:tmod".
class RelationMap {
 public:
  /// Identity mapping.
  RelationMap() = default;
  /// UD v2 -> Stanford-style basic labels (obj->dobj, obl->nmod, ...).
  static RelationMap universal_v2();
  /// One `from<TAB or spaces>to` pair per line; `#` starts a comment.
  static RelationMap parse(std::istream& in);
  static RelationMap load(const std::filesystem::path& path);

  void add(std::string from, std::string to);
  std::string apply(std::string_view relation) const;
  bool empty() const { return table_.empty(); }

 private:
  std::map<std::string, std::string, std::less<>> table_;
};

struct LoadOptions {
  RelationMap relations = RelationMap::universal_v2();
  /// Give bare nmod/obl arcs the subtype of their case marker
  /// ("nmod" + case "from" -> "nmod:from").
  bool add_case_subtypes = true;
};

std::vector<ParsedSentence> parse_conllu(std::istream& in, const LoadOptions& options = {});
std::vector<ParsedSentence> load_conllu(const std::filesystem::path& path, const LoadOptions& options = {});

void write_conllu(std::ostream& out, const ParsedSentence& sentence);
std::string to_conllu(const std::vector<ParsedSentence>& sentences);

/// A requirement sentence together with the standalone parses of its
/// conditional clauses, when the file supplies them as `<id>#event<k>` blocks.
struct SentenceBundle {
  ParsedSentence main;
  std::vector<ParsedSentence> event_clauses;
};

/// Groups `<id>#event<k>` blocks under their parent block. Throws ParseError
/// for an event block whose parent is missing.
std::vector<SentenceBundle> bundle_sentences(std::vector<ParsedSentence> sentences);

}  // namespace reqconflict
