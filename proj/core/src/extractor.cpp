#include "reqconflict/extractor.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "reqconflict/record.hpp"
#include "reqconflict/text.hpp"

namespace reqconflict {
namespace {

const std::set<std::string, std::less<>> kModals = {"shall", "must", "can", "may", "will", "should"};
const std::set<std::string, std::less<>> kAbleModals = {"can", "may"};
const std::set<std::string, std::less<>> kMarkers = {"when", "if"};
const std::set<std::string, std::less<>> kPronouns = {"it",  "its", "they", "them", "their", "he", "him",
                                                      "his", "she", "her",  "we",   "us",    "our", "i",
                                                      "me",  "my",  "you",  "your", "itself"};
const std::set<std::string, std::less<>> kArticles = {"a", "an", "the"};
const std::set<std::string, std::less<>> kNegations = {"not", "never", "n't"};
const std::set<std::string, std::less<>> kNonRestrictionAdverbs = {"when", "then", "where", "if",  "how",
                                                                   "why",  "not",  "never", "n't", "also"};
const std::set<std::string, std::less<>> kIoExcluded = {"poss", "of", "by", "agent", "at", "tmod", "per"};

bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool is_negation(const ParsedSentence& s, int t) {
  const auto& rel = s.relation_of(t);
  return rel == "neg" || (DependencyArc{0, 0, rel}.base_relation() == "advmod" && kNegations.contains(s.norm(t)));
}

int negation_of(const ParsedSentence& s, int head) {
  for (int c : s.children(head)) {
    if (is_negation(s, c)) return c;
  }
  return 0;
}

bool has_copula(const ParsedSentence& s, int head) { return !s.children(head, "cop").empty(); }

bool is_passive(const ParsedSentence& s, int head) {
  return !s.children(head, "auxpass", true).empty() || !s.children(head, "nsubjpass", true).empty() ||
         !s.children(head, "csubjpass").empty();
}

bool is_predicate_token(const ParsedSentence& s, int t) { return s.is_verbal(t) || has_copula(s, t); }

std::vector<int> subjects_of(const ParsedSentence& s, int head) {
  std::vector<int> out;
  for (int c : s.children(head)) {
    const auto rel = DependencyArc{0, 0, s.relation_of(c)}.base_relation();
    if (rel == "nsubj" || rel == "nsubjpass" || rel == "csubj" || rel == "csubjpass") out.push_back(c);
  }
  return out;
}

// The modal of the main clause: prefer one attached to the root or to a
// conjunct of the root.
int main_modal(const ParsedSentence& s) {
  std::vector<int> modals;
  for (const auto& t : s.tokens()) {
    if (kModals.contains(s.norm(t.index)) && (t.xpos == "MD" || s.relation_of(t.index).starts_with("aux"))) {
      modals.push_back(t.index);
    }
  }
  if (modals.empty()) return 0;
  const int root = s.root();
  for (int m : modals) {
    if (s.head_of(m) == root) return m;
  }
  for (int m : modals) {
    int cur = s.head_of(m);
    while (cur != 0 && s.relation_of(cur) == "conj") cur = s.head_of(cur);
    if (cur == root) return m;
  }
  return modals.front();
}

std::string lemma_or_surface(const Token& t) { return t.lemma.empty() || t.lemma == "_" ? t.surface : t.lemma; }

// Compound parts to the left of the head, in order, followed by the head.
std::vector<int> base_tokens(const ParsedSentence& s, int head) {
  std::vector<int> out{head};
  std::vector<int> stack{head};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    for (int c : s.children(cur)) {
      const auto rel = DependencyArc{0, 0, s.relation_of(c)}.base_relation();
      // A coordinated compound ("import and export directions") is a
      // modifier, not part of the name.
      if ((rel == "compound" || rel == "nn" || rel == "flat") && c < head && s.children(c, "conj").empty()) {
        out.push_back(c);
        stack.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string base_text(const ParsedSentence& s, int head) {
  std::vector<std::string> parts;
  for (int t : base_tokens(s, head)) parts.push_back(lemma_or_surface(s.token(t)));
  return text::join(parts, " ");
}

std::string lower_render(const ParsedSentence& s, const std::vector<int>& indices) {
  return text::normalize(s.render(indices));
}

std::vector<int> span(int from, int to) {
  std::vector<int> out;
  for (int i = from; i <= to; ++i) out.push_back(i);
  return out;
}

// Nominal conjuncts of an object head: "the map and the route".
std::vector<int> with_conjuncts(const ParsedSentence& s, int head) {
  std::vector<int> out{head};
  for (int c : s.children(head, "conj")) {
    if (s.is_nominal(c)) {
      for (int d : with_conjuncts(s, c)) out.push_back(d);
    }
  }
  return out;
}

struct Classified {
  OperationSpec operation;
  std::vector<int> action_tokens;
  std::vector<int> tokens;
  bool passive = false;
  bool directive = false;
  std::string rule;
};

int directive_complement(const ParsedSentence& s, int head) {
  for (int c : s.children(head)) {
    const auto rel = DependencyArc{0, 0, s.relation_of(c)}.base_relation();
    if ((rel == "xcomp" || rel == "advcl") && s.is_verbal(c)) return c;
  }
  return 0;
}

// Predicate text of a verb with its infinitive complement ("allow to delete").
std::pair<std::string, std::vector<int>> verb_predicate(const ParsedSentence& s, int verb) {
  std::string predicate = s.norm(verb);
  std::vector<int> action{verb};
  for (int x : s.children(verb, "xcomp")) {
    if (!s.is_verbal(x)) continue;
    bool to_marked = false;
    for (int m : s.children(x, "mark")) to_marked = to_marked || s.norm(m) == "to";
    if (to_marked) {
      predicate += " to " + s.norm(x);
      action.push_back(x);
      break;
    }
  }
  return {predicate, action};
}

std::optional<Classified> classify(const ParsedSentence& s, int head, const ExtractorOptions& options) {
  Classified c;
  const bool copula = has_copula(s, head);
  const auto lemma = s.norm(head);
  int complement = 0;
  if (s.is_verbal(head) && !copula && options.directives.matches_verb(lemma)) {
    complement = directive_complement(s, head);
  } else if (copula && options.directives.matches_adjective(lemma)) {
    complement = directive_complement(s, head);
  }
  if (complement) {
    c.directive = true;
    c.passive = is_passive(s, complement);
    if (has_copula(s, complement)) {
      c.operation.predicate = "be " + s.norm(complement);
      c.action_tokens = {complement};
    } else {
      auto [pred, action] = verb_predicate(s, complement);
      c.operation.predicate = pred;
      c.action_tokens = action;
    }
    c.tokens = {head, complement};
    c.rule = "directive";
  } else if (copula) {
    c.operation.predicate = "be " + lemma;
    c.action_tokens = {head};
    c.tokens = {head};
    for (int cop : s.children(head, "cop")) c.tokens.push_back(cop);
    c.rule = "copula";
  } else if (!s.is_verbal(head)) {
    return std::nullopt;
  } else if (is_passive(s, head)) {
    c.passive = true;
    c.operation.predicate = lemma;
    c.action_tokens = {head};
    c.tokens = {head};
    for (int a : s.children(head, "auxpass", true)) c.tokens.push_back(a);
    c.rule = "passive";
  } else {
    auto [pred, action] = verb_predicate(s, head);
    c.operation.predicate = pred;
    c.action_tokens = action;
    c.tokens = action;
    c.rule = action.size() > 1 ? "infinitive-complement" : "verb";
  }
  if (const int neg = negation_of(s, head); neg) {
    c.operation.mode = OperationMode::NOT;
    c.tokens.push_back(neg);
  } else if (c.directive) {
    c.operation.mode = OperationMode::ABLE;
  }
  sort_unique(c.tokens);
  return c;
}

Predicate make_predicate(const ParsedSentence& s, int head, int modal, const std::string& how,
                         const ExtractorOptions& options) {
  const auto c = classify(s, head, options);
  if (!c) {
    throw ExtractionError(ExtractionErrorCode::NO_PREDICATE, s.req_id(),
                          "token " + std::to_string(head) + " '" + s.token(head).surface + "' is not a predicate");
  }
  Predicate p;
  p.operation = c->operation;
  p.head = head;
  p.action_tokens = c->action_tokens;
  p.modal = modal;
  p.passive = c->passive;
  p.rule = how + "/" + c->rule;
  p.tokens = c->tokens;
  if (modal) {
    p.tokens.push_back(modal);
    if (p.operation.mode == OperationMode::DEFAULT && kAbleModals.contains(s.norm(modal))) {
      p.operation.mode = OperationMode::ABLE;
    }
  }
  sort_unique(p.tokens);
  return p;
}

// Conditional clauses before the main subject.
struct EventClauses {
  std::vector<int> markers;
  std::vector<int> heads;
  std::vector<std::string> connectives;  // cc lemmas in token order
  bool nested = false;
  bool empty_clause = false;
};

int clause_boundary(const ParsedSentence& s, int main_head, int modal) {
  int boundary = main_head;
  if (modal) boundary = std::min(boundary, modal);
  for (int subj : subjects_of(s, main_head)) {
    const auto sub = s.subtree(subj);
    boundary = std::min(boundary, sub.front());
  }
  return boundary;
}

EventClauses find_event_clauses(const ParsedSentence& s, int main_head, int boundary) {
  EventClauses ev;
  for (int i = 1; i < boundary; ++i) {
    const auto rel = DependencyArc{0, 0, s.relation_of(i)}.base_relation();
    if (kMarkers.contains(s.norm(i)) && (rel == "advmod" || rel == "mark")) ev.markers.push_back(i);
  }
  for (int m : ev.markers) {
    const int g = s.head_of(m);
    if (g == main_head || g == 0) {
      ev.empty_clause = true;
      continue;
    }
    if (!has(ev.heads, g)) ev.heads.push_back(g);
  }
  for (std::size_t i = 0; i < ev.heads.size(); ++i) {
    for (std::size_t j = 0; j < ev.heads.size(); ++j) {
      const int a = ev.heads[i];
      const int b = ev.heads[j];
      if (a != b && s.dominates(a, b)) {
        int cur = b;
        while (cur != a && s.relation_of(cur) == "conj") cur = s.head_of(cur);
        if (cur != a) ev.nested = true;
      }
    }
  }
  for (std::size_t i = 0; i < ev.heads.size(); ++i) {
    for (int c : s.children(ev.heads[i], "conj")) {
      if (is_predicate_token(s, c) && c < boundary && !has(ev.heads, c)) ev.heads.push_back(c);
    }
  }
  std::sort(ev.heads.begin(), ev.heads.end());
  std::vector<int> ccs;
  for (int h : ev.heads) {
    for (int c : s.children(h, "cc")) ccs.push_back(c);
  }
  sort_unique(ccs);
  for (int c : ccs) {
    const auto w = s.norm(c);
    if (w == "and" || w == "or") ev.connectives.push_back(w);
  }
  return ev;
}

// Tokens of one conditional clause: its subtree minus other conditions,
// coordinators, markers and punctuation.
std::vector<int> clause_tokens(const ParsedSentence& s, int head, const EventClauses& ev) {
  std::vector<int> out;
  for (int t : s.subtree(head)) {
    bool inner = false;
    for (int other : ev.heads) inner = inner || (other != head && s.dominates(head, other) && s.dominates(other, t));
    if (inner || has(ev.markers, t) || s.is_punct(t)) continue;
    if (s.relation_of(t) == "cc" && has(ev.heads, s.head_of(t))) continue;
    out.push_back(t);
  }
  return out;
}

// Own subtree minus conjoined verbal clauses.
std::vector<int> own_clause_scope(const ParsedSentence& s, int head) {
  std::vector<int> excluded;
  for (int c : s.children(head, "conj")) {
    if (is_predicate_token(s, c)) {
      for (int t : s.subtree(c)) excluded.push_back(t);
    }
  }
  std::vector<int> out;
  for (int t : s.subtree(head)) {
    if (!has(excluded, t)) out.push_back(t);
  }
  return out;
}

bool in_scope(const Predicate& p, int t) { return p.scope.empty() || has(p.scope, t); }

std::vector<int> candidate_dependents(const ParsedSentence& s, const Predicate& p) {
  std::vector<int> heads = p.action_tokens;
  if (!has(heads, p.head)) heads.push_back(p.head);
  std::vector<int> out;
  for (int h : heads) {
    for (int c : s.children(h)) {
      if (!has(heads, c) && in_scope(p, c)) out.push_back(c);
    }
  }
  for (int c : p.shared_dependents) {
    if (in_scope(p, c)) out.push_back(c);
  }
  sort_unique(out);
  return out;
}

void note(ExtractionTrace* trace, std::string element, int tuple, std::vector<int> tokens, std::string rule) {
  if (!trace) return;
  sort_unique(tokens);
  trace->provenance.push_back(Provenance{std::move(element), tuple, std::move(tokens), std::move(rule)});
}

void warn(ExtractionTrace* trace, std::string message) {
  if (trace) trace->warnings.push_back(std::move(message));
}

// Split conjoined predicates sharing the main modal.
std::vector<Predicate> conjoined_predicates(const ParsedSentence& s, const Predicate& main,
                                            const ExtractorOptions& options, ExtractionTrace* trace) {
  std::vector<Predicate> out{main};
  if (!main.modal) return out;
  std::vector<int> conjuncts;
  std::vector<int> stack{main.head};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    for (int c : s.children(cur, "conj")) {
      if (!is_predicate_token(s, c)) continue;
      if (!subjects_of(s, c).empty()) {
        warn(trace, "coordinated clause at token " + std::to_string(c) + " has its own subject; ignored");
        continue;
      }
      conjuncts.push_back(c);
      stack.push_back(c);
    }
  }
  if (conjuncts.empty()) return out;
  std::sort(conjuncts.begin(), conjuncts.end());
  const int last = conjuncts.back();
  std::vector<int> shared;
  for (int c : s.children(main.head)) {
    const auto& rel = s.relation_of(c);
    if (c > last && rel != "conj" && rel != "cc" && rel != "punct") shared.push_back(c);
  }
  for (int c : conjuncts) {
    int modal = main.modal;
    for (int aux : s.children(c, "aux")) {
      if (kModals.contains(s.norm(aux))) modal = aux;
    }
    auto p = make_predicate(s, c, modal, "conjoined", options);
    p.shared_dependents = shared;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

const char* to_string(PrecheckFlag flag) {
  switch (flag) {
    case PrecheckFlag::MISSING_MODAL: return "MISSING_MODAL";
    case PrecheckFlag::MISSING_CONDITIONAL_KEYWORD: return "MISSING_CONDITIONAL_KEYWORD";
    case PrecheckFlag::CONTAINS_PRONOUN: return "CONTAINS_PRONOUN";
    case PrecheckFlag::MIXED_CONNECTIVES: return "MIXED_CONNECTIVES";
    case PrecheckFlag::NESTED_CONDITIONAL: return "NESTED_CONDITIONAL";
  }
  return "?";
}

const char* to_string(ExtractionErrorCode code) {
  switch (code) {
    case ExtractionErrorCode::NO_PREDICATE: return "NO_PREDICATE";
    case ExtractionErrorCode::NO_AGENT: return "NO_AGENT";
    case ExtractionErrorCode::MALFORMED_EVENT: return "MALFORMED_EVENT";
    case ExtractionErrorCode::NOT_NOMINAL: return "NOT_NOMINAL";
  }
  return "?";
}

ExtractionError::ExtractionError(ExtractionErrorCode code, const std::string& req_id, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + " in '" + req_id + "': " + detail),
      code_(code),
      req_id_(req_id) {}

DirectiveLexicon::DirectiveLexicon() {
  add("enable");
  add("be able to");
  add("be capable of");
}

void DirectiveLexicon::add(std::string phrase) {
  phrase = text::normalize(phrase);
  if (phrase.empty()) return;
  const auto words = text::split_words(phrase);
  if (words.size() >= 2 && words[0] == "be") {
    adjectives_.push_back(words[1]);
  } else {
    verbs_.push_back(words[0]);
  }
  phrases_.push_back(std::move(phrase));
}

DirectiveLexicon DirectiveLexicon::parse(std::istream& in) {
  DirectiveLexicon lex;
  lex.phrases_.clear();
  lex.verbs_.clear();
  lex.adjectives_.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    lex.add(line);
  }
  return lex;
}

DirectiveLexicon DirectiveLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open directive list " + path.string());
  return parse(in);
}

bool DirectiveLexicon::matches_verb(std::string_view lemma) const {
  return std::find(verbs_.begin(), verbs_.end(), lemma) != verbs_.end();
}

bool DirectiveLexicon::matches_adjective(std::string_view lemma) const {
  return std::find(adjectives_.begin(), adjectives_.end(), lemma) != adjectives_.end();
}

Predicate identify_operation(const ParsedSentence& s, const ExtractorOptions& options, int clause_head) {
  if (clause_head) {
    int modal = 0;
    for (int aux : s.children(clause_head, "aux")) {
      if (kModals.contains(s.norm(aux))) modal = aux;
    }
    return make_predicate(s, clause_head, modal, "clause-head", options);
  }
  if (const int modal = main_modal(s); modal) {
    const int governor = s.head_of(modal);
    if (governor != 0 && classify(s, governor, options)) {
      return make_predicate(s, governor, modal, "modal-governor", options);
    }
    for (int i = modal + 1; i <= static_cast<int>(s.size()); ++i) {
      if (s.is_verbal(i) && !s.relation_of(i).starts_with("aux") && s.relation_of(i) != "cop") {
        return make_predicate(s, i, modal, "after-modal", options);
      }
    }
  }
  for (int i = 1; i <= static_cast<int>(s.size()); ++i) {
    if (s.is_punct(i)) continue;
    if (s.xpos_is(i, "VBN") || s.xpos_is(i, "VBG")) return make_predicate(s, i, 0, "initial-participle", options);
    break;
  }
  const int root = s.root();
  if (root && classify(s, root, options)) return make_predicate(s, root, 0, "root-verb", options);
  throw ExtractionError(ExtractionErrorCode::NO_PREDICATE, s.req_id(), "no predicate verb in '" + s.text() + "'");
}

Entity parse_entity(const ParsedSentence& s, int head) {
  if (!s.is_nominal(head)) {
    throw ExtractionError(ExtractionErrorCode::NOT_NOMINAL, s.req_id(),
                          "token " + std::to_string(head) + " '" + s.token(head).surface + "' is not nominal");
  }
  const auto base = base_tokens(s, head);
  std::set<std::string> mods;
  const auto add_with_satellites = [&](int m) {
    mods.insert(text::to_lower(s.token(m).surface));
    for (int sat : s.children(m)) {
      const auto rel = DependencyArc{0, 0, s.relation_of(sat)}.base_relation();
      if (rel == "cc" || rel == "conj" || rel == "advmod" || rel == "preconj" || rel == "quantmod") {
        mods.insert(lower_render(s, s.subtree(sat)));
      }
    }
  };
  for (int c : s.children(head)) {
    if (has(base, c)) continue;
    const DependencyArc arc{0, 0, s.relation_of(c)};
    const auto rel = arc.base_relation();
    const auto sub = arc.subtype();
    if (rel == "amod" || rel == "nummod" || rel == "num" || rel == "quantmod" || rel == "advmod" ||
        rel == "compound" || rel == "nn") {
      add_with_satellites(c);
    } else if ((rel == "det" && sub != "poss") || rel == "predet") {
      if (!kArticles.contains(s.norm(c))) add_with_satellites(c);
    } else if (rel == "poss" || (rel == "nmod" && sub == "poss") || (rel == "det" && sub == "poss")) {
      const bool pronoun = s.xpos_is(c, "PRP") || s.token(c).upos == "PRON";
      mods.insert(pronoun ? text::to_lower(s.token(c).surface) : base_text(s, c) + "'s");
    } else if (rel == "nmod") {
      std::string marker(sub);
      if (marker.empty()) {
        for (int cs : s.children(c, "case")) marker = s.norm(cs);
      }
      mods.insert(marker.empty() ? base_text(s, c) : marker + " " + base_text(s, c));
    } else if (rel == "acl") {
      mods.insert(lower_render(s, s.subtree(c)));
    }
  }
  std::vector<std::string> parts;
  for (int t : base) parts.push_back(lemma_or_surface(s.token(t)));
  return Entity(text::join(parts, " "), std::move(mods));
}

std::optional<Entity> identify_agent(const ParsedSentence& s, const Predicate& p, bool required,
                                     std::vector<int>* tokens) {
  if (p.passive) {
    const int passive_head = p.action_tokens.empty() ? p.head : p.action_tokens.front();
    for (int h : {passive_head, p.head}) {
      for (int c : s.children(h)) {
        const auto& rel = s.relation_of(c);
        if (rel == "nmod:agent" || rel == "nmod:by" || rel == "agent") {
          if (tokens) *tokens = base_tokens(s, c);
          return parse_entity(s, c);
        }
      }
    }
    return std::nullopt;
  }
  int cur = p.head;
  while (cur != 0) {
    for (int c : s.children(cur, "nsubj")) {
      if (tokens) *tokens = base_tokens(s, c);
      return parse_entity(s, c);
    }
    if (s.relation_of(cur) != "conj") break;
    cur = s.head_of(cur);
  }
  if (required) {
    throw ExtractionError(ExtractionErrorCode::NO_AGENT, s.req_id(),
                          "active predicate '" + s.token(p.head).surface + "' has no subject");
  }
  return std::nullopt;
}

std::pair<EntitySet, EntitySet> identify_input_output(const ParsedSentence& s, const Predicate& p,
                                                      ExtractionTrace* trace, int tuple) {
  EntitySet in;
  EntitySet out;
  const auto add = [&](int head, bool both, const std::string& rule) {
    for (int h : with_conjuncts(s, head)) {
      try {
        auto e = parse_entity(s, h);
        in.insert(e);
        note(trace, "input", tuple, base_tokens(s, h), rule);
        if (both) {
          out.insert(std::move(e));
          note(trace, "output", tuple, base_tokens(s, h), rule);
        }
      } catch (const ExtractionError& err) {
        warn(trace, err.what());
      }
    }
  };
  for (int d : candidate_dependents(s, p)) {
    const DependencyArc arc{0, 0, s.relation_of(d)};
    const auto rel = arc.base_relation();
    if (rel == "dobj" || rel == "obj") {
      add(d, true, "direct-object");
    } else if (rel == "iobj") {
      add(d, false, "indirect-object");
    } else if (rel == "nmod" && !kIoExcluded.contains(arc.subtype())) {
      add(d, false, "nmod");
    }
  }
  if (p.passive) {
    for (int d : s.children(p.head, "nsubjpass", true)) {
      if (in_scope(p, d)) add(d, true, "passive-subject");
    }
  }
  return {in, out};
}

Restriction identify_restriction(const ParsedSentence& s, const Predicate& p, ExtractionTrace* trace, int tuple) {
  Restriction r;
  const auto add = [&](const std::vector<int>& tokens, const std::string& rule) {
    const auto text = lower_render(s, tokens);
    if (text.empty() || r.contains(text)) return;
    add_constraint(r, text);
    note(trace, "restriction", tuple, tokens, rule);
  };
  const auto first_number_after = [&](int from) {
    for (int i = from + 1; i <= static_cast<int>(s.size()); ++i) {
      if (in_scope(p, i) && s.xpos_is(i, "CD")) return i;
    }
    return 0;
  };
  for (int d : candidate_dependents(s, p)) {
    const DependencyArc arc{0, 0, s.relation_of(d)};
    const auto rel = arc.base_relation();
    if (rel == "advmod") {
      const auto w = s.norm(d);
      if (kNonRestrictionAdverbs.contains(w)) continue;
      if (w == "only") {
        if (const int cd = first_number_after(d); cd) {
          add({d, cd}, "only-number");
        } else {
          add({d}, "adverb");
        }
        continue;
      }
      add(s.subtree(d), "adverb");
    } else if (rel == "nmod" && (arc.subtype() == "at" || arc.subtype() == "tmod" || arc.subtype() == "per")) {
      add(s.subtree(d), "nmod:" + std::string(arc.subtype()));
    } else if (rel == "tmod" || rel == "npadvmod") {
      add(s.subtree(d), "temporal-modifier");
    }
  }
  for (int t = 1; t <= static_cast<int>(s.size()); ++t) {
    if (!in_scope(p, t)) continue;
    const auto w = s.norm(t);
    if (w == "only" && s.relation_of(t) == "advmod" && s.xpos_is(s.head_of(t), "CD") && in_scope(p, s.head_of(t))) {
      add({t, s.head_of(t)}, "only-number");
    } else if (w == "time") {
      for (int c : s.children(t, "case")) add(span(c, t), "case-time");
    } else if (w == "every" && s.relation_of(t).starts_with("det")) {
      const int n = s.head_of(t);
      const auto nrel = DependencyArc{0, 0, s.relation_of(n)}.base_relation();
      if (nrel != "nsubj" && nrel != "nsubjpass" && nrel != "dobj" && nrel != "iobj" && n > t) {
        add(span(t, n), "every-period");
      }
    } else if (s.relation_of(t) == "nmod:per") {
      const int g = s.head_of(t);
      const auto gw = s.norm(g);
      if (gw == "time" || gw == "times") {
        add(s.subtree(g), "per-phrase");
      } else if (!has(p.action_tokens, g) && g != p.head) {
        add(s.subtree(t), "per-phrase");
      }
    }
  }
  return r;
}

Condition extract_clause(const ParsedSentence& s, int clause_head, const ExtractorOptions& options,
                         ExtractionTrace* trace, const std::string& label) {
  auto p = identify_operation(s, options, clause_head);
  p.scope = own_clause_scope(s, clause_head);
  Condition c;
  c.operation = p.operation;
  note(trace, "event", 0, p.tokens, label + " operation: " + p.rule);
  std::vector<int> agent_tokens;
  c.agent = identify_agent(s, p, false, &agent_tokens);
  if (c.agent) note(trace, "event", 0, agent_tokens, label + " agent");
  ExtractionTrace local;
  auto [in, out] = identify_input_output(s, p, &local);
  c.input = std::move(in);
  c.output = std::move(out);
  c.restriction = identify_restriction(s, p, &local);
  if (trace) {
    for (auto& pv : local.provenance) {
      pv.rule = label + " " + pv.element + ": " + pv.rule;
      pv.element = "event";
      trace->provenance.push_back(std::move(pv));
    }
    for (auto& w : local.warnings) trace->warnings.push_back(std::move(w));
  }
  return c;
}

namespace {

// Maps tokens of a standalone clause parse back onto the main sentence by
// matching surfaces in order.
std::optional<std::vector<int>> align(const ParsedSentence& clause, const ParsedSentence& s,
                                      const std::vector<int>& candidates) {
  std::vector<int> mapping;
  std::size_t pos = 0;
  for (const auto& t : clause.tokens()) {
    if (clause.is_punct(t.index)) {
      mapping.push_back(0);
      continue;
    }
    while (pos < candidates.size() && s.token(candidates[pos]).surface != t.surface) ++pos;
    if (pos == candidates.size()) return std::nullopt;
    mapping.push_back(candidates[pos++]);
  }
  return mapping;
}

}  // namespace

EventSpec identify_event(const ParsedSentence& s, const Predicate& main, const ExtractorOptions& options,
                         const std::vector<ParsedSentence>& clause_parses, ExtractionTrace* trace) {
  const int boundary = clause_boundary(s, main.head, main.modal);
  const auto ev = find_event_clauses(s, main.head, boundary);
  if (ev.empty_clause) {
    throw ExtractionError(ExtractionErrorCode::MALFORMED_EVENT, s.req_id(), "conditional keyword without a clause");
  }
  if (ev.heads.empty()) return EventSpec::all();
  if (ev.nested) warn(trace, "nested conditional clauses flattened into one event");
  const bool has_and = std::count(ev.connectives.begin(), ev.connectives.end(), "and") > 0;
  const bool has_or = std::count(ev.connectives.begin(), ev.connectives.end(), "or") > 0;
  if (has_and && has_or) warn(trace, "event mixes 'and' and 'or'; using '" + ev.connectives.front() + "'");
  const bool use_parses = !clause_parses.empty() && clause_parses.size() == ev.heads.size();
  if (!clause_parses.empty() && !use_parses) {
    warn(trace, std::to_string(clause_parses.size()) + " event clause parse(s) for " +
                    std::to_string(ev.heads.size()) + " condition(s); using the sentence parse");
  }
  std::vector<Condition> conditions;
  for (std::size_t k = 0; k < ev.heads.size(); ++k) {
    const int head = ev.heads[k];
    const auto tokens = clause_tokens(s, head, ev);
    const bool only_markers = std::all_of(tokens.begin(), tokens.end(), [&](int t) { return s.is_punct(t); });
    if (tokens.empty() || only_markers) {
      throw ExtractionError(ExtractionErrorCode::MALFORMED_EVENT, s.req_id(),
                            "empty conditional clause at token " + std::to_string(head));
    }
    const std::string label = "condition " + std::to_string(k + 1);
    if (use_parses) {
      const auto& clause = clause_parses[k];
      ExtractionTrace local;
      conditions.push_back(extract_clause(clause, clause.root(), options, &local, label));
      const auto mapping = align(clause, s, tokens);
      if (!mapping) warn(trace, label + ": clause parse does not align with the sentence; provenance is rule-only");
      if (trace) {
        for (auto& pv : local.provenance) {
          std::vector<int> mapped;
          if (mapping) {
            for (int t : pv.tokens) {
              if (t >= 1 && t <= static_cast<int>(mapping->size()) && (*mapping)[t - 1]) {
                mapped.push_back((*mapping)[t - 1]);
              }
            }
          }
          pv.tokens = mapped;
          pv.rule += " (clause parse)";
          trace->provenance.push_back(std::move(pv));
        }
        for (auto& w : local.warnings) trace->warnings.push_back(std::move(w));
      }
    } else {
      conditions.push_back(extract_clause(s, head, options, trace, label));
    }
  }
  if (conditions.size() == 1) return EventSpec::single(std::move(conditions.front()));
  const auto connective = !ev.connectives.empty() && ev.connectives.front() == "or" ? Connective::OR : Connective::AND;
  return EventSpec::joined(std::move(conditions), connective);
}

std::vector<PrecheckFlag> precheck(const ParsedSentence& s) {
  std::vector<PrecheckFlag> flags;
  bool modal = false;
  bool pronoun = false;
  for (const auto& t : s.tokens()) {
    const auto w = s.norm(t.index);
    modal = modal || kModals.contains(w);
    pronoun = pronoun || (kPronouns.contains(w) && (t.xpos.starts_with("PRP") || t.upos == "PRON"));
  }
  int head = s.root();
  int modal_token = 0;
  try {
    const auto p = identify_operation(s);
    head = p.head;
    modal_token = p.modal;
  } catch (const ExtractionError&) {
  }
  bool missing_keyword = false;
  EventClauses ev;
  if (head) {
    const int boundary = clause_boundary(s, head, modal_token);
    ev = find_event_clauses(s, head, boundary);
    for (int c : s.children(head)) {
      if (DependencyArc{0, 0, s.relation_of(c)}.base_relation() != "advcl" || c >= boundary) continue;
      bool introduced = false;
      for (int m : s.children(c)) {
        const auto w = s.norm(m);
        const auto& rel = s.relation_of(m);
        if ((rel == "mark" || rel == "advmod") && (kMarkers.contains(w) || w == "to" || w == "in")) introduced = true;
      }
      if (!introduced) missing_keyword = true;
    }
  }
  const bool has_and = std::count(ev.connectives.begin(), ev.connectives.end(), "and") > 0;
  const bool has_or = std::count(ev.connectives.begin(), ev.connectives.end(), "or") > 0;
  if (!modal) flags.push_back(PrecheckFlag::MISSING_MODAL);
  if (missing_keyword) flags.push_back(PrecheckFlag::MISSING_CONDITIONAL_KEYWORD);
  if (pronoun) flags.push_back(PrecheckFlag::CONTAINS_PRONOUN);
  if (has_and && has_or) flags.push_back(PrecheckFlag::MIXED_CONNECTIVES);
  if (ev.nested) flags.push_back(PrecheckFlag::NESTED_CONDITIONAL);
  return flags;
}

ExtractionResult extract(const ParsedSentence& s, const std::string& id, int group_id,
                         const ExtractorOptions& options, const std::vector<ParsedSentence>& clause_parses) {
  ExtractionResult result;
  auto& trace = result.trace;
  trace.req_id = id;
  for (const auto& rel : s.unknown_relations()) trace.warnings.push_back("unknown relation '" + rel + "'");

  const auto main = identify_operation(s, options);
  const auto event = identify_event(s, main, options, clause_parses, &trace);

  // Main-clause scope: everything outside the conditional clauses.
  const int boundary = clause_boundary(s, main.head, main.modal);
  const auto ev = find_event_clauses(s, main.head, boundary);
  std::vector<int> event_tokens;
  for (int h : ev.heads) {
    for (int t : s.subtree(h)) event_tokens.push_back(t);
  }
  for (int m : ev.markers) event_tokens.push_back(m);
  std::vector<int> scope;
  for (int t = 1; t <= static_cast<int>(s.size()); ++t) {
    if (!has(event_tokens, t)) scope.push_back(t);
  }

  std::vector<int> agent_tokens;
  const auto agent = identify_agent(s, main, true, &agent_tokens);
  auto predicates = conjoined_predicates(s, main, options, &trace);
  const std::size_t event_notes = trace.provenance.size();

  for (std::size_t k = 0; k < predicates.size(); ++k) {
    auto& p = predicates[k];
    p.scope = scope;
    const int tuple = static_cast<int>(k);
    Requirement r;
    r.id = predicates.size() == 1 ? id : id + "." + std::to_string(k + 1);
    r.group_id = group_id;
    r.event = event;
    r.agent = agent;
    r.operation = p.operation;
    auto [in, out] = identify_input_output(s, p, &trace, tuple);
    r.input = std::move(in);
    r.output = std::move(out);
    r.restriction = identify_restriction(s, p, &trace, tuple);
    note(&trace, "operation", tuple, p.tokens, p.rule);
    if (agent) note(&trace, "agent", tuple, agent_tokens, main.passive ? "by-phrase" : "subject");
    for (std::size_t i = 0; k > 0 && i < event_notes; ++i) {
      if (trace.provenance[i].element != "event") continue;
      auto copy = trace.provenance[i];
      copy.tuple = tuple;
      trace.provenance.push_back(std::move(copy));
    }
    result.requirements.push_back(std::move(r));
  }
  return result;
}

int find_object_clause(const ParsedSentence& s, const ExtractorOptions& options) {
  try {
    const auto p = identify_operation(s, options);
    std::vector<int> heads = p.action_tokens;
    heads.push_back(p.head);
    for (int h : heads) {
      for (int c : s.children(h, "ccomp")) {
        if (is_predicate_token(s, c)) return c;
      }
    }
  } catch (const ExtractionError&) {
  }
  return 0;
}

std::string format_trace(const ExtractionTrace& trace) {
  std::ostringstream out;
  out << "trace " << trace.req_id << '\n';
  for (const auto& p : trace.provenance) {
    out << "  [" << p.tuple << "] " << p.element << " <- " << p.rule << " @";
    if (p.tokens.empty()) out << " -";
    for (int t : p.tokens) out << ' ' << t;
    out << '\n';
  }
  for (const auto& w : trace.warnings) out << "  warning: " << w << '\n';
  return out.str();
}

}  // namespace reqconflict
