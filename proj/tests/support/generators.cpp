#include "generators.hpp"

#include <sstream>

namespace reqconflict::testing {

int Generator::uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool Generator::chance(double p) { return std::bernoulli_distribution(p)(rng_); }

std::string Generator::word() {
  static const std::vector<std::string> words = {"UAV", "uav", "drone", "map", "Map", "send", "transmit", "land"};
  return pick(words);
}

Entity Generator::entity() {
  static const std::vector<std::string> bases = {"UAV", "drone", "map", "waypoint", "wing", "flight plan"};
  static const std::vector<std::string> mods = {"armed", "next", "of UAV", "of drone", "UAV's", "of map", "in flight"};
  std::set<std::string> chosen;
  const int n = uniform(0, 2);
  for (int i = 0; i < n; ++i) chosen.insert(pick(mods));
  return Entity(pick(bases), chosen);
}

EntitySet Generator::entity_set(int max_size) {
  EntitySet s;
  const int n = uniform(0, max_size);
  for (int i = 0; i < n; ++i) s.insert(entity());
  return s;
}

OperationSpec Generator::operation() {
  static const std::vector<std::string> predicates = {"land", "send", "transmit", "display"};
  static const std::vector<OperationMode> modes = {OperationMode::DEFAULT, OperationMode::ABLE, OperationMode::NOT};
  return OperationSpec{pick(modes), pick(predicates)};
}

Restriction Generator::restriction(int max_size) {
  static const std::vector<std::string> pool = {"only one",  "only two",  "every hour", "every day",
                                                "immediately", "at a time", "within 5 seconds"};
  Restriction r;
  const int n = uniform(0, max_size);
  for (int i = 0; i < n; ++i) add_constraint(r, pick(pool));
  return r;
}

std::optional<Entity> Generator::agent() {
  static const std::vector<Entity> agents = {Entity("UAV"), Entity("drone"), Entity("operator"),
                                             Entity("UAV", {"armed"})};
  if (chance(0.25)) return std::nullopt;
  return pick(agents);
}

Condition Generator::condition() {
  Condition c;
  c.agent = agent();
  c.operation = operation();
  c.input = entity_set(1);
  c.output = chance(0.5) ? c.input : entity_set(1);
  c.restriction = chance(0.8) ? Restriction{} : restriction(1);
  return c;
}

EventSpec Generator::event() {
  const int roll = uniform(0, 99);
  if (roll < 45) return EventSpec::all();
  if (roll < 80) return EventSpec::single(condition());
  std::vector<Condition> cs{condition(), condition()};
  if (chance(0.3)) {
    // A contradicting pair so that self-contradiction occurs.
    cs[1] = cs[0];
    cs[1].operation.mode = cs[0].operation.mode == OperationMode::NOT ? OperationMode::DEFAULT : OperationMode::NOT;
  }
  return EventSpec::joined(std::move(cs), chance(0.5) ? Connective::AND : Connective::OR);
}

Requirement Generator::requirement(const std::string& id) {
  Requirement r;
  r.id = id;
  r.group_id = 0;
  r.event = event();
  r.agent = agent();
  r.operation = operation();
  r.input = entity_set();
  r.output = chance(0.5) ? r.input : entity_set();
  r.restriction = restriction();
  return r;
}

Requirement Generator::mutate(Requirement r, const std::string& id) {
  r.id = id;
  switch (uniform(0, 8)) {
    case 0: r.operation.mode = pick(std::vector<OperationMode>{OperationMode::DEFAULT, OperationMode::ABLE,
                                                                OperationMode::NOT});
      break;
    case 1: r.restriction = restriction(); break;
    case 2: r.input = entity_set(); break;
    case 3: r.output = entity_set(); break;
    case 4: r.event = event(); break;
    case 5: r.agent = agent(); break;
    case 6: {
      // The other requirement's operation becomes this one's trigger.
      Condition c{r.agent, r.operation, r.input, r.output, r.restriction};
      if (chance(0.5)) c.operation.mode = OperationMode::NOT;
      r.event = EventSpec::single(c);
      r.agent = agent();
      r.operation = operation();
      break;
    }
    case 7: r.input = r.output; break;
    default: break;  // duplicate
  }
  return r;
}

std::vector<Requirement> Generator::requirement_set(int max_size) {
  std::vector<Requirement> out;
  const int n = uniform(0, max_size);
  for (int i = 0; i < n; ++i) {
    const std::string id = "R" + std::to_string(i + 1);
    if (!out.empty() && chance(0.5)) {
      out.push_back(mutate(pick(out), id));
    } else {
      out.push_back(requirement(id));
    }
    out.back().group_id = i + 1;
  }
  // Outputs on only a minority of tuples: clones of one parent would
  // otherwise form input-output cliques whose circuit count explodes.
  for (auto& r : out) {
    if (chance(0.6)) r.output.clear();
  }
  return out;
}

std::vector<std::vector<int>> Generator::digraph(int n, double density) {
  std::vector<std::vector<int>> adj(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (chance(density)) adj[u].push_back(v);
    }
  }
  return adj;
}

const SynonymLexicon& test_lexicon() {
  static const SynonymLexicon lex = [] {
    SynonymLexicon l;
    l.add_group({"send", "transmit"});
    l.add_group({"uav", "drone"});
    return l;
  }();
  return lex;
}

std::vector<Requirement> sparse_requirement_set(int n, std::uint64_t seed) {
  Generator g(seed);
  std::vector<Requirement> out;
  for (int i = 0; i < n; ++i) {
    Requirement r;
    r.id = "S" + std::to_string(i + 1);
    r.group_id = i + 1;
    const std::string tag = std::to_string(i);
    r.agent = Entity("component" + std::to_string(g.uniform(0, n / 4 + 1)));
    r.operation = OperationSpec{OperationMode::DEFAULT, "process"};
    r.input = {Entity("item" + tag)};
    r.output = {Entity("item" + std::to_string(i + 1))};
    if (i % 10 == 9) r.event = EventSpec::single(Condition{std::nullopt, {OperationMode::DEFAULT, "start"}, {}, {}, {}});
    if (i % 25 == 24) r.output.insert(Entity("item" + std::to_string(i - 3)));  // closes a short loop
    if (i % 50 == 49 && !out.empty()) {
      r = out.back();
      r.id = "S" + std::to_string(i + 1);
      r.group_id = i + 1;
      r.operation.mode = OperationMode::NOT;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace reqconflict::testing
