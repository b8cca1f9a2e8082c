#include "reqconflict/detector.hpp"

#include <algorithm>
#include <set>

#include "reqconflict/record.hpp"

namespace reqconflict {

const char* to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::OPERATION_INCONSISTENCY: return "OPERATION_INCONSISTENCY";
    case ConflictKind::RESTRICTION_INCONSISTENCY: return "RESTRICTION_INCONSISTENCY";
    case ConflictKind::EVENT_INCONSISTENCY: return "EVENT_INCONSISTENCY";
    case ConflictKind::OPERATION_INCLUSION: return "OPERATION_INCLUSION";
    case ConflictKind::EVENT_INCLUSION: return "EVENT_INCLUSION";
    case ConflictKind::OPERATION_EVENT_INTERLOCK: return "OPERATION_EVENT_INTERLOCK";
    case ConflictKind::INPUT_OUTPUT_INTERLOCK: return "INPUT_OUTPUT_INTERLOCK";
    case ConflictKind::SELF_CONTRADICTORY_EVENT: return "SELF_CONTRADICTORY_EVENT";
  }
  return "?";
}

std::optional<ConflictKind> parse_conflict_kind(std::string_view s) {
  for (auto k : kAllConflictKinds) {
    if (s == to_string(k)) return k;
  }
  return std::nullopt;
}

bool is_interlock(ConflictKind kind) {
  return kind == ConflictKind::OPERATION_EVENT_INTERLOCK || kind == ConflictKind::INPUT_OUTPUT_INTERLOCK;
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::NONE: return "none";
    case Direction::FORWARD: return "forward";
    case Direction::BOTH: return "both";
  }
  return "none";
}

bool conflict_less(const Conflict& a, const Conflict& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  return a.members < b.members;
}

namespace {

bool io_includes(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return entityset_includes(r1.input, r2.input, lex) && entityset_includes(r1.output, r2.output, lex);
}

bool io_includes(const Condition& c, const Requirement& r, const SynonymLexicon& lex) {
  return entityset_includes(c.input, r.input, lex) && entityset_includes(c.output, r.output, lex);
}

bool io_included(const Condition& c, const Requirement& r, const SynonymLexicon& lex) {
  return entityset_includes(r.input, c.input, lex) && entityset_includes(r.output, c.output, lex);
}

// Index of the first condition of r1's event broken by r2's operation.
std::optional<std::size_t> broken_condition(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  for (std::size_t k = 0; k < r1.event.conditions.size(); ++k) {
    const auto& c = r1.event.conditions[k];
    if (agent_matches(c.agent, r2.agent, lex) && op_contradicts(c.operation, r2.operation, lex) &&
        (io_includes(c, r2, lex) || io_included(c, r2, lex))) {
      return k;
    }
  }
  return std::nullopt;
}

std::string op_text(const OperationSpec& op) { return format_operation(op); }

std::vector<std::string> sorted_pair(const std::string& a, const std::string& b) {
  return a < b ? std::vector<std::string>{a, b} : std::vector<std::string>{b, a};
}

// One conflict for an unordered pair from a directional predicate.
std::optional<Conflict> directional(ConflictKind kind, bool forward, bool backward, const Requirement& r1,
                                    const Requirement& r2) {
  if (!forward && !backward) return std::nullopt;
  Conflict c{kind, {}, Direction::FORWARD, {}};
  if (forward && backward) {
    c.direction = Direction::BOTH;
    c.members = sorted_pair(r1.id, r2.id);
  } else if (forward) {
    c.members = {r1.id, r2.id};
  } else {
    c.members = {r2.id, r1.id};
  }
  return c;
}

}  // namespace

bool operation_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return event_eq(r1.event, r2.event, lex) && agent_eq(r1.agent, r2.agent, lex) &&
         op_contradicts(r1.operation, r2.operation, lex) && (io_includes(r1, r2, lex) || io_includes(r2, r1, lex));
}

bool restriction_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return event_eq(r1.event, r2.event, lex) && agent_eq(r1.agent, r2.agent, lex) &&
         op_eq(r1.operation, r2.operation, lex) && restriction_contradicts(r1.restriction, r2.restriction, lex) &&
         (io_includes(r1, r2, lex) || io_includes(r2, r1, lex));
}

bool event_inconsistency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return broken_condition(r1, r2, lex).has_value();
}

bool operation_inclusion(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return event_eq(r1.event, r2.event, lex) && agent_eq(r1.agent, r2.agent, lex) &&
         op_includes(r1.operation, r2.operation, lex) && io_includes(r1, r2, lex) &&
         restriction_includes(r1.restriction, r2.restriction, lex);
}

bool event_inclusion(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return event_includes(r1.event, r2.event, lex) && agent_eq(r1.agent, r2.agent, lex) &&
         op_eq(r1.operation, r2.operation, lex) && entityset_eq(r1.input, r2.input, lex) &&
         entityset_eq(r1.output, r2.output, lex) && restriction_eq(r1.restriction, r2.restriction, lex);
}

bool operation_event_dependency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  if (r2.event.is_all()) return false;
  return std::all_of(r2.event.conditions.begin(), r2.event.conditions.end(), [&](const Condition& c) {
    return agent_matches(r1.agent, c.agent, lex) && op_includes(r1.operation, c.operation, lex) &&
           restriction_eq(c.restriction, r1.restriction, lex) && entityset_includes(r1.input, c.input, lex) &&
           entityset_includes(r1.output, c.output, lex);
  });
}

bool input_output_dependency(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return check_pair_io(r1, r2, lex).has_value();
}

bool same_group(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  return event_eq(r1.event, r2.event, lex) && agent_eq(r1.agent, r2.agent, lex);
}

std::vector<std::vector<std::size_t>> group_requirements(const std::vector<Requirement>& reqs,
                                                         const SynonymLexicon& lex) {
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    bool placed = false;
    for (auto& g : groups) {
      if (same_group(reqs[g.front()], reqs[i], lex)) {
        g.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) groups.push_back({i});
  }
  return groups;
}

PreprocessResult preprocess(std::vector<Requirement> reqs, const ParseIndex& parses, const SynonymLexicon& lex,
                            const ExtractorOptions& options) {
  PreprocessResult result;
  int next_group = 0;
  for (const auto& r : reqs) next_group = std::max(next_group, r.group_id + 1);

  for (auto& r : reqs) {
    if (!parses.empty()) {
      const auto it = parses.find(r.id);
      if (it == parses.end()) {
        result.warnings.push_back("no parse for '" + r.id + "'; object clause check skipped");
      } else if (const int clause = find_object_clause(it->second, options); clause) {
        try {
          const auto c = extract_clause(it->second, clause, options, nullptr, "object clause");
          r.agent = c.agent;
          r.operation = c.operation;
          r.input = c.input;
          r.output = c.output;
          r.restriction = c.restriction;
        } catch (const ExtractionError& e) {
          result.warnings.push_back("object clause of '" + r.id + "' not extracted: " + e.what());
        }
      }
    }
    const bool or_event = r.event.connective == Connective::OR && r.event.conditions.size() >= 2;
    if (!or_event && r.event.conditions.size() >= 2 && event_self_contradicts(r.event, lex)) {
      result.conflicts.push_back(Conflict{ConflictKind::SELF_CONTRADICTORY_EVENT,
                                          {r.id},
                                          Direction::NONE,
                                          {"two conditions of the event contradict each other"}});
      continue;
    }
    if (or_event) {
      for (std::size_t k = 0; k < r.event.conditions.size(); ++k) {
        Requirement part = r;
        part.id = r.id + "-or" + std::to_string(k + 1);
        part.group_id = next_group++;
        part.event = EventSpec::single(r.event.conditions[k]);
        result.requirements.push_back(std::move(part));
      }
      continue;
    }
    result.requirements.push_back(std::move(r));
  }
  result.groups = group_requirements(result.requirements, lex);
  return result;
}

std::vector<Conflict> check_pair_same_group(const Requirement& r1, const Requirement& r2,
                                            const SynonymLexicon& lex) {
  std::vector<Conflict> out;
  if (operation_inconsistency(r1, r2, lex)) {
    auto c = *directional(ConflictKind::OPERATION_INCONSISTENCY, io_includes(r1, r2, lex), io_includes(r2, r1, lex),
                          r1, r2);
    c.evidence.push_back("operation " + op_text(r1.operation) + " contradicts " + op_text(r2.operation));
    out.push_back(std::move(c));
  }
  if (restriction_inconsistency(r1, r2, lex)) {
    const auto cat = contradicting_category(r1.restriction, r2.restriction, lex);
    out.push_back(Conflict{ConflictKind::RESTRICTION_INCONSISTENCY,
                           sorted_pair(r1.id, r2.id),
                           Direction::NONE,
                           {"restriction " + format_restriction(r1.restriction) + " contradicts " +
                                format_restriction(r2.restriction) + " on " + to_string(*cat) + " constraints",
                            "restriction contradiction is a category-mismatch rule, not a formal definition"}});
  }
  if (auto c = directional(ConflictKind::OPERATION_INCLUSION, operation_inclusion(r1, r2, lex),
                           operation_inclusion(r2, r1, lex), r1, r2)) {
    c->evidence.push_back(c->direction == Direction::BOTH ? "tuples include each other (duplicate)"
                                                           : c->members[0] + " includes " + c->members[1]);
    out.push_back(std::move(*c));
  }
  return out;
}

CrossGroupResult check_pair_cross_group(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  CrossGroupResult out;
  if (auto c = directional(ConflictKind::EVENT_INCLUSION, event_inclusion(r1, r2, lex), event_inclusion(r2, r1, lex),
                           r1, r2)) {
    c->evidence.push_back("event of " + c->members[0] + " includes event of " + c->members[1]);
    out.conflicts.push_back(std::move(*c));
  }
  const auto b12 = broken_condition(r1, r2, lex);
  const auto b21 = broken_condition(r2, r1, lex);
  if (auto c = directional(ConflictKind::EVENT_INCONSISTENCY, b12.has_value(), b21.has_value(), r1, r2)) {
    if (b12) {
      c->evidence.push_back("operation of " + r2.id + " " + op_text(r2.operation) + " contradicts condition " +
                            std::to_string(*b12 + 1) + " of " + r1.id);
    }
    if (b21) {
      c->evidence.push_back("operation of " + r1.id + " " + op_text(r1.operation) + " contradicts condition " +
                            std::to_string(*b21 + 1) + " of " + r2.id);
    }
    out.conflicts.push_back(std::move(*c));
  }
  const auto edge = [&](const Requirement& a, const Requirement& b) {
    if (!operation_event_dependency(a, b, lex)) return;
    out.operation_event_edges.push_back(DependencyEdge{
        a.id, b.id, {"operation " + op_text(a.operation) + " triggers the event of " + b.id}});
  };
  edge(r1, r2);
  edge(r2, r1);
  return out;
}

std::optional<DependencyEdge> check_pair_io(const Requirement& r1, const Requirement& r2, const SynonymLexicon& lex) {
  DependencyEdge e{r1.id, r2.id, {}};
  for (const auto& o : r1.output) {
    for (const auto& i : r2.input) {
      if (entity_includes(o, i, lex)) e.evidence.push_back("output " + format_entity(o) + " feeds input " + format_entity(i));
    }
  }
  if (e.evidence.empty()) return std::nullopt;
  if (event_inconsistency(r1, r2, lex) || event_inconsistency(r2, r1, lex)) return std::nullopt;
  return e;
}

std::vector<Conflict> find_interlocks(const InterlockGraph& graph) {
  const auto kind = graph.kind() == DependencyKind::OPERATION_EVENT ? ConflictKind::OPERATION_EVENT_INTERLOCK
                                                                     : ConflictKind::INPUT_OUTPUT_INTERLOCK;
  std::vector<Conflict> out;
  for (auto& cycle : elementary_cycles(graph)) {
    Conflict c{kind, std::move(cycle), Direction::NONE, {}};
    std::string path;
    for (const auto& id : c.members) path += id + " -> ";
    c.evidence.push_back(std::string(to_string(graph.kind())) + " circuit " + path + c.members.front());
    out.push_back(std::move(c));
  }
  return out;
}

DetectionResult detect(const std::vector<Requirement>& reqs, const ParseIndex& parses, const SynonymLexicon& lex,
                       const ExtractorOptions& options) {
  DetectionResult result;
  auto pre = preprocess(reqs, parses, lex, options);
  result.conflicts = std::move(pre.conflicts);
  result.warnings = std::move(pre.warnings);
  result.analyzed = std::move(pre.requirements);
  result.groups = std::move(pre.groups);
  const auto& rs = result.analyzed;

  std::vector<std::size_t> group_of(rs.size());
  for (std::size_t g = 0; g < result.groups.size(); ++g) {
    for (auto i : result.groups[g]) group_of[i] = g;
  }
  for (const auto& r : rs) {
    result.operation_event.add_vertex(r.id);
    result.input_output.add_vertex(r.id);
  }
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = i + 1; j < rs.size(); ++j) {
      if (group_of[i] == group_of[j]) {
        for (auto& c : check_pair_same_group(rs[i], rs[j], lex)) result.conflicts.push_back(std::move(c));
      } else {
        auto cross = check_pair_cross_group(rs[i], rs[j], lex);
        for (auto& c : cross.conflicts) result.conflicts.push_back(std::move(c));
        for (auto& e : cross.operation_event_edges) result.operation_event.add_edge(e.from, e.to, std::move(e.evidence));
      }
    }
  }
  for (std::size_t i = 0; i < rs.size(); ++i) {
    for (std::size_t j = 0; j < rs.size(); ++j) {
      if (i == j) continue;
      if (auto e = check_pair_io(rs[i], rs[j], lex)) result.input_output.add_edge(e->from, e->to, std::move(e->evidence));
    }
  }
  for (auto& c : find_interlocks(result.operation_event)) result.conflicts.push_back(std::move(c));
  for (auto& c : find_interlocks(result.input_output)) result.conflicts.push_back(std::move(c));
  std::stable_sort(result.conflicts.begin(), result.conflicts.end(), conflict_less);
  return result;
}

}  // namespace reqconflict
