#include "reqconflict/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "reqconflict/text.hpp"

namespace reqconflict {

std::vector<GoldLabel> parse_gold(std::istream& in) {
  std::vector<GoldLabel> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = text::trim(line);
    if (body.empty()) continue;
    const auto colon = body.find(':');
    const auto where = "gold line " + std::to_string(line_no);
    if (colon == std::string_view::npos) throw ValidationError(where + ": expected 'KIND: id,id,...'");
    const auto kind = parse_conflict_kind(text::trim(body.substr(0, colon)));
    if (!kind) throw ValidationError(where + ": unknown conflict kind '" + std::string(body.substr(0, colon)) + "'");
    GoldLabel label{*kind, {}};
    for (const auto& id : text::split(body.substr(colon + 1), ',')) {
      const auto t = text::trim(id);
      if (!t.empty()) label.members.insert(std::string(t));
    }
    if (label.members.empty()) throw ValidationError(where + ": no requirement ids");
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<GoldLabel> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open gold file " + path.string());
  return parse_gold(in);
}

void check_gold_ids(const std::vector<GoldLabel>& gold, const std::set<std::string>& known_ids) {
  for (const auto& g : gold) {
    for (const auto& id : g.members) {
      if (!known_ids.contains(id)) {
        throw ValidationError("gold label " + std::string(to_string(g.kind)) + " names unknown requirement '" + id +
                              "'");
      }
    }
  }
}

EvaluationResult evaluation_from_counts(std::size_t detected, std::size_t correct, std::size_t known) {
  EvaluationResult r{detected, correct, known, 1.0, 1.0};
  if (detected) r.precision = static_cast<double>(correct) / static_cast<double>(detected);
  if (known) r.recall = static_cast<double>(correct) / static_cast<double>(known);
  return r;
}

EvaluationResult evaluate(const std::vector<Conflict>& detected, const std::vector<GoldLabel>& gold) {
  // Count-based matching per (kind, member set) key is one-to-one and
  // independent of order.
  std::map<std::pair<ConflictKind, std::set<std::string>>, std::size_t> available;
  for (const auto& g : gold) ++available[{g.kind, g.members}];
  std::size_t correct = 0;
  for (const auto& c : detected) {
    const auto it = available.find({c.kind, std::set<std::string>(c.members.begin(), c.members.end())});
    if (it != available.end() && it->second > 0) {
      --it->second;
      ++correct;
    }
  }
  return evaluation_from_counts(detected.size(), correct, gold.size());
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::round(fraction * 10000.0) / 100.0);
  return buf;
}

double TupleScores::accuracy(std::size_t element) const {
  return total ? static_cast<double>(correct[element]) / static_cast<double>(total) : 1.0;
}

double TupleScores::overall() const {
  return total ? static_cast<double>(all_correct) / static_cast<double>(total) : 1.0;
}

double TupleScores::average() const {
  double sum = 0;
  for (std::size_t e = 0; e < 6; ++e) sum += accuracy(e);
  return sum / 6.0;
}

TupleScores score_tuples(const std::vector<Requirement>& extracted, const std::vector<Requirement>& gold) {
  std::map<std::string, const Requirement*> by_id;
  for (const auto& r : extracted) by_id[r.id] = &r;
  if (by_id.size() != gold.size()) {
    throw ValidationError("extracted and gold tuple sets differ in size (" + std::to_string(by_id.size()) + " vs " +
                          std::to_string(gold.size()) + ")");
  }
  TupleScores s;
  for (const auto& g : gold) {
    const auto it = by_id.find(g.id);
    if (it == by_id.end()) throw ValidationError("no extracted tuple for gold id '" + g.id + "'");
    const auto& x = *it->second;
    const bool ok[6] = {x.event == g.event,   x.agent == g.agent,   x.operation == g.operation,
                        x.input == g.input,   x.output == g.output, x.restriction == g.restriction};
    bool all = true;
    for (std::size_t e = 0; e < 6; ++e) {
      if (ok[e]) ++s.correct[e];
      all = all && ok[e];
    }
    if (all) ++s.all_correct;
    ++s.total;
  }
  return s;
}

AggregateScores aggregate(const std::vector<TupleScores>& datasets) {
  AggregateScores a;
  if (datasets.empty()) return a;
  double macro_avg = 0, macro_all = 0;
  std::size_t total = 0, all_correct = 0, element_correct = 0;
  for (const auto& d : datasets) {
    macro_avg += d.average();
    macro_all += d.overall();
    total += d.total;
    all_correct += d.all_correct;
    for (std::size_t e = 0; e < 6; ++e) element_correct += d.correct[e];
  }
  a.macro_average = macro_avg / static_cast<double>(datasets.size());
  a.macro_overall = macro_all / static_cast<double>(datasets.size());
  if (total) {
    a.micro_average = static_cast<double>(element_correct) / static_cast<double>(6 * total);
    a.micro_overall = static_cast<double>(all_correct) / static_cast<double>(total);
  }
  return a;
}

std::string format_tuple_table(const std::vector<std::pair<std::string, TupleScores>>& datasets) {
  std::ostringstream out;
  char buf[64];
  out << "Accuracy of each tuple (%)\n";
  std::snprintf(buf, sizeof buf, "%-12s", "tuple");
  out << buf;
  for (const auto& [name, _] : datasets) {
    std::snprintf(buf, sizeof buf, " %12s", name.c_str());
    out << buf;
  }
  out << '\n';
  const auto row = [&](const char* label, auto value) {
    std::snprintf(buf, sizeof buf, "%-12s", label);
    out << buf;
    for (const auto& [_, s] : datasets) {
      std::snprintf(buf, sizeof buf, " %12s", format_percent(value(s)).c_str());
      out << buf;
    }
    out << '\n';
  };
  for (std::size_t e = 0; e < 6; ++e) row(kTupleElements[e], [e](const TupleScores& s) { return s.accuracy(e); });
  row("overall", [](const TupleScores& s) { return s.overall(); });
  row("average", [](const TupleScores& s) { return s.average(); });
  if (datasets.size() > 1) {
    std::vector<TupleScores> all;
    for (const auto& [_, s] : datasets) all.push_back(s);
    const auto a = aggregate(all);
    out << "macro average " << format_percent(a.macro_average) << ", micro average "
        << format_percent(a.micro_average) << '\n';
    out << "macro overall " << format_percent(a.macro_overall) << ", micro overall "
        << format_percent(a.micro_overall) << '\n';
  }
  return out.str();
}

std::string format_evaluation(const EvaluationResult& r) {
  std::ostringstream out;
  out << "detected " << r.detected << "\ncorrect " << r.correct << "\nknown " << r.known << "\nprecision "
      << format_percent(r.precision) << "%\nrecall " << format_percent(r.recall) << "%\n";
  return out.str();
}

nlohmann::ordered_json to_json(const Conflict& c) {
  nlohmann::ordered_json j;
  j["kind"] = to_string(c.kind);
  j["members"] = c.members;
  j["direction"] = to_string(c.direction);
  j["evidence"] = c.evidence;
  return j;
}

std::string conflicts_jsonl(const std::vector<Conflict>& conflicts) {
  std::string out;
  for (const auto& c : conflicts) out += to_json(c).dump() + '\n';
  return out;
}

std::string conflicts_text(const std::vector<Conflict>& conflicts) {
  std::ostringstream out;
  out << conflicts.size() << " conflict(s)\n";
  for (const auto& c : conflicts) {
    out << '\n' << to_string(c.kind) << ": ";
    const char* sep = c.direction == Direction::FORWARD ? " -> " : is_interlock(c.kind) ? " -> " : ", ";
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (i) out << sep;
      out << c.members[i];
    }
    if (is_interlock(c.kind)) out << " -> " << c.members.front();
    if (c.direction == Direction::BOTH) out << " (both directions)";
    out << '\n';
    for (const auto& e : c.evidence) out << "  " << e << '\n';
  }
  return out.str();
}

}  // namespace reqconflict
