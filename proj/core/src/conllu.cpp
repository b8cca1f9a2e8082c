#include "reqconflict/conllu.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "reqconflict/text.hpp"

namespace reqconflict {
namespace {

// Base labels of UD v1/v2 plus the Stanford basic/enhanced dialect.
const std::set<std::string, std::less<>>& known_relations() {
  static const std::set<std::string, std::less<>> labels = {
      "abbrev", "acl",       "acomp",    "advcl",    "advmod",    "agent",     "amod",     "appos",
      "attr",   "aux",       "auxpass",  "case",     "cc",        "ccomp",     "clf",      "complm",
      "compound", "conj",    "cop",      "csubj",    "csubjpass", "dep",       "det",      "discourse",
      "dislocated", "dobj",  "expl",     "fixed",    "flat",      "goeswith",  "iobj",     "infmod",
      "list",   "mark",      "mwe",      "neg",      "nmod",      "nn",        "npadvmod", "nsubj",
      "nsubjpass", "num",    "number",   "nummod",   "obj",       "obl",       "orphan",   "parataxis",
      "partmod", "pcomp",    "pobj",     "poss",     "possessive", "preconj",  "predet",   "prep",
      "prt",    "punct",     "purpcl",   "quantmod", "rcmod",     "ref",       "rel",      "reparandum",
      "root",   "tmod",      "vocative", "xcomp",    "xsubj",
  };
  return labels;
}

std::string_view base_of(std::string_view relation) {
  const auto colon = relation.find(':');
  return colon == std::string_view::npos ? relation : relation.substr(0, colon);
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool relation_matches(std::string_view relation, std::string_view wanted, bool include_subtypes) {
  if (relation == wanted) return true;
  return include_subtypes && base_of(relation) == wanted && relation.size() > wanted.size();
}

}  // namespace

bool Token::space_after() const {
  for (const auto& item : text::split(misc, '|')) {
    if (item == "SpaceAfter=No") return false;
  }
  return true;
}

std::string_view DependencyArc::base_relation() const { return base_of(relation); }

std::string_view DependencyArc::subtype() const {
  const std::string_view rel = relation;
  const auto colon = rel.find(':');
  return colon == std::string_view::npos ? std::string_view{} : rel.substr(colon + 1);
}

bool is_known_relation(std::string_view relation) {
  return known_relations().contains(base_of(relation));
}

ParsedSentence::ParsedSentence(std::string req_id, std::string text, std::vector<Token> tokens,
                               std::vector<DependencyArc> arcs,
                               std::vector<std::pair<std::string, std::string>> comments)
    : req_id_(std::move(req_id)),
      text_(std::move(text)),
      tokens_(std::move(tokens)),
      arcs_(std::move(arcs)),
      comments_(std::move(comments)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].index != static_cast<int>(i) + 1) {
      throw ParseError("sentence '" + req_id_ + "': token indices must run 1..n, found " +
                           std::to_string(tokens_[i].index) + " at position " + std::to_string(i + 1),
                       0);
    }
    if (tokens_[i].surface.empty()) {
      throw ParseError("sentence '" + req_id_ + "': token " + std::to_string(i + 1) + " has an empty form", 0);
    }
  }
  std::sort(arcs_.begin(), arcs_.end(),
            [](const DependencyArc& a, const DependencyArc& b) { return a.dependent < b.dependent; });
  const int n = static_cast<int>(tokens_.size());
  if (static_cast<int>(arcs_.size()) != n) {
    throw ParseError("sentence '" + req_id_ + "': expected one arc per token", 0);
  }
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const auto& arc = arcs_[i];
    if (arc.dependent != i + 1) {
      throw ParseError("sentence '" + req_id_ + "': token " + std::to_string(i + 1) + " has no unique head", 0);
    }
    if (arc.head < 0 || arc.head > n) {
      throw ParseError("sentence '" + req_id_ + "': token " + std::to_string(arc.dependent) + " has head " +
                           std::to_string(arc.head) + " which is not a token of the sentence",
                       0);
    }
    if (arc.relation == "root") {
      ++roots;
      if (arc.head != 0) {
        throw ParseError("sentence '" + req_id_ + "': root arc of token " + std::to_string(arc.dependent) +
                             " must hang from 0",
                         0);
      }
    } else if (arc.head == 0) {
      throw ParseError("sentence '" + req_id_ + "': token " + std::to_string(arc.dependent) +
                           " hangs from 0 with relation '" + arc.relation + "'",
                       0);
    }
    if (!is_known_relation(arc.relation) &&
        std::find(unknown_relations_.begin(), unknown_relations_.end(), arc.relation) == unknown_relations_.end()) {
      unknown_relations_.push_back(arc.relation);
    }
  }
  if (n > 0 && roots != 1) {
    throw ParseError("sentence '" + req_id_ + "': expected exactly one root, found " + std::to_string(roots), 0);
  }
  // Every token must reach the root without revisiting a node.
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    for (int steps = 0; cur != 0; ++steps) {
      if (steps > n) {
        throw ParseError("sentence '" + req_id_ + "': dependency cycle through token " + std::to_string(i), 0);
      }
      cur = arcs_[cur - 1].head;
    }
  }
}

const Token& ParsedSentence::token(int index) const {
  if (!contains(index)) throw std::out_of_range("token index " + std::to_string(index));
  return tokens_[index - 1];
}

int ParsedSentence::head_of(int index) const {
  if (!contains(index)) throw std::out_of_range("token index " + std::to_string(index));
  return arcs_[index - 1].head;
}

const std::string& ParsedSentence::relation_of(int index) const {
  if (!contains(index)) throw std::out_of_range("token index " + std::to_string(index));
  return arcs_[index - 1].relation;
}

int ParsedSentence::root() const {
  for (const auto& arc : arcs_) {
    if (arc.relation == "root") return arc.dependent;
  }
  return 0;
}

std::string ParsedSentence::norm(int index) const {
  const auto& t = token(index);
  if (t.lemma.empty() || t.lemma == "_") return text::to_lower(t.surface);
  return text::to_lower(t.lemma);
}

bool ParsedSentence::xpos_is(int index, std::string_view prefix) const {
  return token(index).xpos.starts_with(prefix);
}

bool ParsedSentence::is_verbal(int index) const {
  const auto& t = token(index);
  return t.xpos.starts_with("VB") || t.upos == "VERB" || t.upos == "AUX";
}

bool ParsedSentence::is_nominal(int index) const {
  const auto& t = token(index);
  return t.xpos.starts_with("NN") || t.xpos.starts_with("PRP") || t.xpos == "CD" || t.upos == "NOUN" ||
         t.upos == "PROPN" || t.upos == "PRON" || t.upos == "NUM";
}

bool ParsedSentence::is_punct(int index) const {
  const auto& t = token(index);
  if (t.upos == "PUNCT") return true;
  static const std::set<std::string, std::less<>> tags = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "HYPH"};
  return tags.contains(t.xpos);
}

std::vector<int> ParsedSentence::children(int index) const {
  std::vector<int> out;
  for (const auto& arc : arcs_) {
    if (arc.head == index) out.push_back(arc.dependent);
  }
  return out;
}

std::vector<int> ParsedSentence::children(int index, std::string_view relation, bool include_subtypes) const {
  std::vector<int> out;
  for (const auto& arc : arcs_) {
    if (arc.head == index && relation_matches(arc.relation, relation, include_subtypes)) {
      out.push_back(arc.dependent);
    }
  }
  return out;
}

std::vector<int> ParsedSentence::subtree(int index) const {
  std::vector<int> out;
  for (int i = 1; i <= static_cast<int>(tokens_.size()); ++i) {
    if (dominates(index, i)) out.push_back(i);
  }
  return out;
}

bool ParsedSentence::dominates(int ancestor, int index) const {
  for (int cur = index; cur != 0; cur = arcs_[cur - 1].head) {
    if (cur == ancestor) return true;
  }
  return false;
}

std::string ParsedSentence::render(const std::vector<int>& indices) const {
  std::string out;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto& t = token(indices[i]);
    out += t.surface;
    if (i + 1 < indices.size() && t.space_after()) out += ' ';
  }
  return out;
}

std::string ParsedSentence::reconstruct_text() const {
  std::vector<int> all(tokens_.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i) + 1;
  return render(all);
}

std::pair<ParsedSentence, std::vector<int>> ParsedSentence::extract_subsentence(const std::vector<int>& indices,
                                                                                int new_root,
                                                                                std::string req_id) const {
  std::vector<int> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<int, int> renumber;
  for (std::size_t i = 0; i < sorted.size(); ++i) renumber[sorted[i]] = static_cast<int>(i) + 1;

  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;
  for (int old : sorted) {
    Token t = token(old);
    t.index = renumber.at(old);
    tokens.push_back(std::move(t));
    DependencyArc arc;
    arc.dependent = renumber.at(old);
    if (old == new_root) {
      arc.head = 0;
      arc.relation = "root";
    } else {
      const int h = head_of(old);
      const auto it = renumber.find(h);
      arc.head = it != renumber.end() ? it->second : renumber.at(new_root);
      arc.relation = relation_of(old);
    }
    arcs.push_back(std::move(arc));
  }
  std::string sub_text = render(sorted);
  std::vector<std::pair<std::string, std::string>> comments = {{"req_id", req_id}, {"text", sub_text}};
  return {ParsedSentence(std::move(req_id), std::move(sub_text), std::move(tokens), std::move(arcs),
                         std::move(comments)),
          sorted};
}

std::vector<DependencyArc> find_arcs(const ParsedSentence& sentence, const ArcQuery& query) {
  std::vector<DependencyArc> out;
  for (const auto& arc : sentence.arcs()) {
    if (!relation_matches(arc.relation, query.relation, query.include_subtypes)) continue;
    if (query.head && arc.head != *query.head) continue;
    if (query.dependent && arc.dependent != *query.dependent) continue;
    out.push_back(arc);
  }
  return out;
}

RelationMap RelationMap::universal_v2() {
  RelationMap map;
  map.add("obj", "dobj");
  map.add("obl", "nmod");
  map.add("nsubj:pass", "nsubjpass");
  map.add("csubj:pass", "csubjpass");
  map.add("aux:pass", "auxpass");
  map.add("obl:tmod", "nmod:tmod");
  map.add("obl:npmod", "npadvmod");
  map.add("nmod:npmod", "npadvmod");
  map.add("flat:name", "compound");
  map.add("compound:prt", "prt");
  return map;
}

RelationMap RelationMap::parse(std::istream& in) {
  RelationMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto words = text::split_words(line);
    if (words.empty()) continue;
    if (words.size() != 2) {
      throw ParseError("relation map line " + std::to_string(line_no) + ": expected 'from to'", line_no);
    }
    map.add(words[0], words[1]);
  }
  return map;
}

RelationMap RelationMap::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open relation map " + path.string(), 0);
  return parse(in);
}

void RelationMap::add(std::string from, std::string to) { table_[std::move(from)] = std::move(to); }

std::string RelationMap::apply(std::string_view relation) const {
  if (const auto it = table_.find(relation); it != table_.end()) return it->second;
  const auto colon = relation.find(':');
  if (colon != std::string_view::npos) {
    if (const auto it = table_.find(relation.substr(0, colon)); it != table_.end()) {
      return it->second + std::string(relation.substr(colon));
    }
  }
  return std::string(relation);
}

namespace {

struct PendingBlock {
  std::size_t first_line = 0;
  std::vector<std::pair<std::string, std::string>> comments;
  std::vector<Token> tokens;
  std::vector<DependencyArc> arcs;
  std::vector<std::size_t> token_lines;
};

ParsedSentence finish_block(PendingBlock& block, const LoadOptions& options) {
  std::string req_id;
  std::optional<std::string> text_comment;
  for (const auto& [key, value] : block.comments) {
    if (key == "req_id") req_id = value;
    if (key == "text") text_comment = value;
  }
  if (req_id.empty()) {
    throw ParseError("sentence block starting at line " + std::to_string(block.first_line) +
                         " has no '# req_id = ...' comment",
                     block.first_line);
  }
  const int n = static_cast<int>(block.tokens.size());
  for (std::size_t i = 0; i < block.arcs.size(); ++i) {
    const auto& arc = block.arcs[i];
    if (arc.head < 0 || arc.head > n) {
      throw ParseError("sentence '" + req_id + "', line " + std::to_string(block.token_lines[i]) + ": token " +
                           std::to_string(arc.dependent) + " has head " + std::to_string(arc.head) +
                           " which is not a token of the sentence",
                       block.token_lines[i]);
    }
  }
  if (options.add_case_subtypes) {
    for (auto& arc : block.arcs) {
      if (arc.relation != "nmod") continue;
      for (const auto& other : block.arcs) {
        if (other.head != arc.dependent || other.relation != "case") continue;
        const auto& marker = block.tokens[other.dependent - 1];
        auto lemma = text::to_lower(marker.lemma == "_" ? marker.surface : marker.lemma);
        if (lemma == "'s" || lemma == "'") {
          arc.relation = "nmod:poss";
        } else {
          arc.relation = "nmod:" + lemma;
        }
        break;
      }
    }
  }
  PendingBlock taken = std::move(block);
  std::string sentence_text;
  if (text_comment) {
    sentence_text = *text_comment;
  }
  ParsedSentence sentence(req_id, sentence_text, std::move(taken.tokens), std::move(taken.arcs),
                          std::move(taken.comments));
  if (!text_comment) {
    // No '# text' line: rebuild it so text() is always populated.
    auto comments = sentence.comments();
    return ParsedSentence(req_id, sentence.reconstruct_text(), sentence.tokens(), sentence.arcs(),
                          std::move(comments));
  }
  return sentence;
}

}  // namespace

std::vector<ParsedSentence> parse_conllu(std::istream& in, const LoadOptions& options) {
  std::vector<ParsedSentence> sentences;
  PendingBlock block;
  bool in_block = false;
  std::string line;
  std::size_t line_no = 0;

  const auto flush = [&] {
    if (in_block && !block.tokens.empty()) sentences.push_back(finish_block(block, options));
    block = PendingBlock{};
    in_block = false;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block.first_line = line_no;
    }
    if (line.front() == '#') {
      std::string_view body = text::trim(std::string_view(line).substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        block.comments.emplace_back(std::string(body), "");
      } else {
        block.comments.emplace_back(std::string(text::trim(body.substr(0, eq))),
                                    std::string(text::trim(body.substr(eq + 1))));
      }
      continue;
    }
    auto cols = text::split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 tab-separated columns, found " +
                           std::to_string(cols.size()),
                       line_no);
    }
    // Multiword token ranges and empty nodes are not part of the basic tree.
    if (cols[0].find_first_of("-.") != std::string::npos) continue;
    const auto id = parse_int(cols[0]);
    if (!id || *id != static_cast<int>(block.tokens.size()) + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": token id '" + cols[0] + "' is out of sequence",
                       line_no);
    }
    const auto head = parse_int(cols[6]);
    if (!head) {
      throw ParseError("line " + std::to_string(line_no) + ": token " + cols[0] + " has non-numeric head '" +
                           cols[6] + "'",
                       line_no);
    }
    if (cols[1].empty() || cols[1] == "_") {
      // "_" is a legal form only for an actual underscore token; an empty form is not.
      if (cols[1].empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": token " + cols[0] + " has an empty form", line_no);
      }
    }
    Token token;
    token.index = *id;
    token.surface = cols[1];
    token.lemma = cols[2];
    token.upos = cols[3];
    token.xpos = cols[4];
    token.feats = cols[5];
    token.deps = cols[8];
    token.misc = cols[9];
    block.tokens.push_back(std::move(token));
    block.arcs.push_back(DependencyArc{*head, *id, options.relations.apply(cols[7])});
    block.token_lines.push_back(line_no);
  }
  flush();
  return sentences;
}

std::vector<ParsedSentence> load_conllu(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return parse_conllu(in, options);
}

void write_conllu(std::ostream& out, const ParsedSentence& sentence) {
  bool has_id = false;
  for (const auto& [key, value] : sentence.comments()) has_id = has_id || key == "req_id";
  if (!has_id) {
    out << "# req_id = " << sentence.req_id() << '\n';
    out << "# text = " << sentence.text() << '\n';
  }
  for (const auto& [key, value] : sentence.comments()) {
    out << "# " << key;
    if (!value.empty()) out << " = " << value;
    out << '\n';
  }
  for (const auto& t : sentence.tokens()) {
    const auto& arc = sentence.arcs()[t.index - 1];
    out << t.index << '\t' << t.surface << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos << '\t' << t.feats
        << '\t' << arc.head << '\t' << arc.relation << '\t' << t.deps << '\t' << t.misc << '\n';
  }
  out << '\n';
}

std::string to_conllu(const std::vector<ParsedSentence>& sentences) {
  std::ostringstream out;
  for (const auto& s : sentences) write_conllu(out, s);
  return out.str();
}

std::vector<SentenceBundle> bundle_sentences(std::vector<ParsedSentence> sentences) {
  std::vector<SentenceBundle> bundles;
  std::map<std::string, std::size_t> position;
  std::vector<std::tuple<std::string, int, ParsedSentence>> events;
  for (auto& s : sentences) {
    const auto& id = s.req_id();
    const auto marker = id.rfind("#event");
    if (marker != std::string::npos) {
      const auto k = parse_int(std::string_view(id).substr(marker + 6));
      if (!k) throw ParseError("malformed event block id '" + id + "'", 0);
      events.emplace_back(id.substr(0, marker), *k, std::move(s));
      continue;
    }
    position[id] = bundles.size();
    bundles.push_back(SentenceBundle{std::move(s), {}});
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const auto& a, const auto& b) { return std::get<1>(a) < std::get<1>(b); });
  for (auto& [parent, k, sentence] : events) {
    const auto it = position.find(parent);
    if (it == position.end()) {
      throw ParseError("event block '" + sentence.req_id() + "' has no parent sentence '" + parent + "'", 0);
    }
    bundles[it->second].event_clauses.push_back(std::move(sentence));
  }
  return bundles;
}

}  // namespace reqconflict
