#include "properties.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "generators.hpp"
#include "oracle.hpp"
#include "reqconflict/detector.hpp"
#include "reqconflict/interlock.hpp"
#include "reqconflict/record.hpp"
#include "reqconflict/text.hpp"

namespace reqconflict::testing {
namespace {

// Literal restatements of the operator definitions.

std::string canon(const std::string& s, const SynonymLexicon& lex) { return lex.canonical(text::normalize(s)); }

std::set<std::string> canon_all(const std::set<std::string>& xs, const SynonymLexicon& lex) {
  std::set<std::string> out;
  for (const auto& x : xs) out.insert(canon(x, lex));
  return out;
}

std::optional<std::string> owner_of(const std::string& m) {
  if (m.starts_with("of ")) return m.substr(3);
  if (m.size() > 2 && m.ends_with("'s")) return m.substr(0, m.size() - 2);
  return std::nullopt;
}

bool ref_entity_includes(const Entity& a, const Entity& b, const SynonymLexicon& lex) {
  if (canon(a.base(), lex) == canon(b.base(), lex)) {
    const auto ma = canon_all(a.modifiers(), lex);
    const auto mb = canon_all(b.modifiers(), lex);
    bool subset = true;
    for (const auto& m : ma) subset = subset && mb.contains(m);
    if (subset) return true;
  }
  for (const auto& m : a.modifiers()) {
    if (owner_of(m)) return false;
  }
  for (const auto& m : b.modifiers()) {
    const auto o = owner_of(m);
    if (o && canon(*o, lex) == canon(a.base(), lex)) return true;
  }
  return false;
}

bool ref_entity_eq(const Entity& a, const Entity& b, const SynonymLexicon& lex) {
  return canon(a.base(), lex) == canon(b.base(), lex) && canon_all(a.modifiers(), lex) == canon_all(b.modifiers(), lex);
}

bool ref_set_includes(const EntitySet& a, const EntitySet& b, const SynonymLexicon& lex) {
  for (const auto& y : b) {
    if (std::none_of(a.begin(), a.end(), [&](const Entity& x) { return ref_entity_includes(x, y, lex); })) return false;
  }
  return true;
}

// Mode lattice: ABLE is the weakest obligation; DEFAULT and NOT each
// include it and contradict each other.
bool ref_op_includes(const OperationSpec& a, const OperationSpec& b, const SynonymLexicon& lex) {
  if (canon(a.predicate, lex) != canon(b.predicate, lex)) return false;
  return a.mode == b.mode || b.mode == OperationMode::ABLE;
}

bool ref_op_contradicts(const OperationSpec& a, const OperationSpec& b, const SynonymLexicon& lex) {
  if (canon(a.predicate, lex) != canon(b.predicate, lex)) return false;
  const std::set<OperationMode> modes{a.mode, b.mode};
  return modes == std::set<OperationMode>{OperationMode::DEFAULT, OperationMode::NOT};
}

bool ref_restriction_includes(const Restriction& a, const Restriction& b, const SynonymLexicon& lex) {
  const auto ca = canon_all(a, lex);
  for (const auto& c : canon_all(b, lex)) {
    if (!ca.contains(c)) return false;
  }
  return true;
}

struct Check {
  PropertyResult result;
  void record(bool antecedent, bool holds, const std::string& what) {
    ++result.checked;
    if (!antecedent) return;
    ++result.triggered;
    if (!holds) {
      if (result.violations == 0) result.first_failure = what;
      ++result.violations;
    }
  }
  // Checked regardless; `nontrivial` only feeds the triggered count.
  void always(bool nontrivial, bool holds, const std::string& what) {
    ++result.checked;
    if (nontrivial) ++result.triggered;
    if (!holds) {
      if (result.violations == 0) result.first_failure = what;
      ++result.violations;
    }
  }
};

std::string show(const Entity& e) { return format_entity(e); }
std::string show(const EntitySet& s) { return format_entity_set(s); }
std::string show(const OperationSpec& o) { return format_operation(o); }
std::string show(const Restriction& r) { return format_restriction(r); }
std::string show(const EventSpec& e) {
  Requirement r;
  r.id = "E";
  r.event = e;
  r.operation.predicate = "x";
  return serialize_requirement(r);
}

// Runs the four algebraic laws for one (includes, eq) pair on random triples.
template <typename T>
void laws(std::vector<PropertyResult>& out, const std::string& name, int pairs, const std::function<T()>& gen,
          const std::function<bool(const T&, const T&)>& inc, const std::function<bool(const T&, const T&)>& eq) {
  Check refl{{name + " reflexivity"}}, sym{{name + " eq symmetry"}}, trans{{name + " transitivity"}},
      mutual{{name + " eq <=> mutual includes"}};
  for (int i = 0; i < pairs; ++i) {
    const T a = gen();
    const T b = gen();
    const T c = gen();
    refl.record(true, inc(a, a) && eq(a, a), show(a));
    sym.record(eq(a, b), eq(b, a), show(a) + " / " + show(b));
    trans.record(inc(a, b) && inc(b, c), inc(a, c), show(a) + " / " + show(b) + " / " + show(c));
    trans.record(inc(a, b) && inc(b, a) && inc(a, c), inc(b, c), show(a) + " / " + show(b) + " / " + show(c));
    mutual.record(true, eq(a, b) == (inc(a, b) && inc(b, a)), show(a) + " / " + show(b));
  }
  for (auto* c : {&refl, &sym, &trans, &mutual}) out.push_back(c->result);
}

template <typename T>
void agrees(std::vector<PropertyResult>& out, const std::string& name, int pairs, const std::function<T()>& gen,
            const std::function<bool(const T&, const T&)>& impl, const std::function<bool(const T&, const T&)>& ref) {
  Check check{{name + " matches definition"}};
  for (int i = 0; i < pairs; ++i) {
    const T a = gen();
    const T b = gen();
    const bool x = impl(a, b);
    check.always(x, x == ref(a, b), show(a) + " / " + show(b));
  }
  out.push_back(check.result);
}

}  // namespace

std::vector<PropertyResult> check_relation_algebra(std::uint64_t seed, int pairs) {
  const auto& lex = test_lexicon();
  Generator g(seed);
  std::vector<PropertyResult> out;

  const std::function<Entity()> ent = [&] { return g.entity(); };
  const std::function<EntitySet()> ents = [&] { return g.entity_set(2); };
  const std::function<OperationSpec()> ops = [&] { return g.operation(); };
  const std::function<Restriction()> res = [&] { return g.restriction(2); };
  const std::function<EventSpec()> evs = [&] { return g.event(); };

  laws<Entity>(out, "entity", pairs, ent, [&](auto& a, auto& b) { return entity_includes(a, b, lex); },
               [&](auto& a, auto& b) { return entity_eq(a, b, lex); });
  laws<EntitySet>(out, "entity set", pairs, ents, [&](auto& a, auto& b) { return entityset_includes(a, b, lex); },
                  [&](auto& a, auto& b) { return entityset_eq(a, b, lex); });
  laws<OperationSpec>(out, "operation", pairs, ops, [&](auto& a, auto& b) { return op_includes(a, b, lex); },
                      [&](auto& a, auto& b) { return op_eq(a, b, lex); });
  laws<Restriction>(out, "restriction", pairs, res,
                    [&](auto& a, auto& b) { return restriction_includes(a, b, lex); },
                    [&](auto& a, auto& b) { return restriction_eq(a, b, lex); });
  laws<EventSpec>(out, "event", pairs, evs, [&](auto& a, auto& b) { return event_includes(a, b, lex); },
                  [&](auto& a, auto& b) { return event_eq(a, b, lex); });

  agrees<Entity>(out, "entity includes", pairs, ent, [&](auto& a, auto& b) { return entity_includes(a, b, lex); },
                 [&](auto& a, auto& b) { return ref_entity_includes(a, b, lex); });
  agrees<Entity>(out, "entity eq", pairs, ent, [&](auto& a, auto& b) { return entity_eq(a, b, lex); },
                 [&](auto& a, auto& b) { return ref_entity_eq(a, b, lex); });
  agrees<EntitySet>(out, "entity set includes", pairs, ents,
                    [&](auto& a, auto& b) { return entityset_includes(a, b, lex); },
                    [&](auto& a, auto& b) { return ref_set_includes(a, b, lex); });
  agrees<OperationSpec>(out, "operation includes", pairs, ops,
                        [&](auto& a, auto& b) { return op_includes(a, b, lex); },
                        [&](auto& a, auto& b) { return ref_op_includes(a, b, lex); });
  agrees<OperationSpec>(out, "operation contradicts", pairs, ops,
                        [&](auto& a, auto& b) { return op_contradicts(a, b, lex); },
                        [&](auto& a, auto& b) { return ref_op_contradicts(a, b, lex); });
  agrees<Restriction>(out, "restriction includes", pairs, res,
                      [&](auto& a, auto& b) { return restriction_includes(a, b, lex); },
                      [&](auto& a, auto& b) { return ref_restriction_includes(a, b, lex); });

  Check contra{{"contradiction symmetry"}};
  Check contra_irrefl{{"contradiction irreflexivity"}};
  Check agent_sym{{"agent eq symmetry"}};
  for (int i = 0; i < pairs; ++i) {
    const auto o1 = g.operation(), o2 = g.operation();
    contra.record(op_contradicts(o1, o2, lex), op_contradicts(o2, o1, lex), show(o1) + " / " + show(o2));
    const auto r1 = g.restriction(), r2 = g.restriction();
    contra.record(restriction_contradicts(r1, r2, lex), restriction_contradicts(r2, r1, lex),
                  show(r1) + " / " + show(r2));
    contra_irrefl.record(true, !op_contradicts(o1, o1, lex) && !restriction_contradicts(r1, r1, lex),
                         show(o1) + " / " + show(r1));
    const auto a1 = g.agent(), a2 = g.agent();
    agent_sym.record(agent_eq(a1, a2, lex), agent_eq(a2, a1, lex), "agents");
    agent_sym.record(agent_matches(a1, a2, lex), agent_matches(a2, a1, lex), "agents");
  }
  for (auto* c : {&contra, &contra_irrefl, &agent_sym}) out.push_back(c->result);
  return out;
}

PropertyResult check_mutual_exclusion(std::uint64_t seed, int sets, int max_size) {
  const auto& lex = test_lexicon();
  Generator g(seed);
  Check check{{"mutual exclusion"}};
  const std::set<ConflictKind> inconsistency = {ConflictKind::OPERATION_INCONSISTENCY,
                                                ConflictKind::RESTRICTION_INCONSISTENCY,
                                                ConflictKind::EVENT_INCONSISTENCY};
  const std::set<ConflictKind> inclusion = {ConflictKind::OPERATION_INCLUSION, ConflictKind::EVENT_INCLUSION};
  for (int s = 0; s < sets; ++s) {
    const auto reqs = g.requirement_set(max_size);
    const auto result = detect(reqs, {}, lex);
    std::map<std::set<std::string>, std::pair<std::set<ConflictKind>, std::set<ConflictKind>>> per_pair;
    for (const auto& c : result.conflicts) {
      if (c.members.size() != 2 || is_interlock(c.kind)) continue;
      const std::set<std::string> key(c.members.begin(), c.members.end());
      if (inconsistency.contains(c.kind)) per_pair[key].first.insert(c.kind);
      if (inclusion.contains(c.kind)) per_pair[key].second.insert(c.kind);
    }
    for (const auto& [pair, kinds] : per_pair) {
      check.record(true, kinds.first.size() <= 1 && kinds.second.size() <= 1,
                   "set " + std::to_string(s) + " pair " + *pair.begin() + "," + *pair.rbegin());
    }
  }
  return check.result;
}

PropertyResult check_grouped_vs_naive(std::uint64_t seed, int sets, int max_size) {
  const auto& lex = test_lexicon();
  Generator g(seed);
  Check check{{"grouped vs naive"}};
  for (int s = 0; s < sets; ++s) {
    const auto reqs = g.requirement_set(max_size);
    std::set<ConflictKey> grouped;
    for (const auto& c : detect(reqs, {}, lex).conflicts) grouped.insert(key_of(c));
    const auto naive = naive_detect(reqs, lex);
    std::ostringstream why;
    if (grouped != naive) {
      why << "set " << s << ": grouped " << grouped.size() << " vs naive " << naive.size();
      for (const auto& k : naive) {
        if (!grouped.contains(k)) why << "; missing " << to_string(std::get<0>(k));
      }
      for (const auto& k : grouped) {
        if (!naive.contains(k)) why << "; extra " << to_string(std::get<0>(k));
      }
    }
    check.always(!naive.empty(), grouped == naive, why.str());
  }
  return check.result;
}

PropertyResult check_cycles(std::uint64_t seed, int graphs, int max_vertices) {
  Generator g(seed);
  Check check{{"circuits vs exhaustive"}};
  for (int i = 0; i < graphs; ++i) {
    const int n = g.uniform(0, max_vertices);
    const double density = 0.05 + 0.45 * g.uniform(0, 100) / 100.0;
    const auto adj = g.digraph(n, density);
    const auto johnson = elementary_cycles(n, adj);
    const std::set<std::vector<int>> got(johnson.begin(), johnson.end());
    const auto expected = brute_force_cycles(adj);
    const bool same = got == expected && got.size() == johnson.size();
    check.always(!expected.empty(), same,
                 "graph " + std::to_string(i) + ": " + std::to_string(johnson.size()) + " vs " +
                     std::to_string(expected.size()));
  }
  return check.result;
}

}  // namespace reqconflict::testing
