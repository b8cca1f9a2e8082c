#include "reqconflict/pipeline.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "reqconflict/conllu.hpp"
#include "reqconflict/detector.hpp"
#include "reqconflict/extractor.hpp"
#include "reqconflict/record.hpp"
#include "reqconflict/report.hpp"
#include "reqconflict/semantics.hpp"

namespace reqconflict {
namespace {

struct Loaded {
  std::vector<Requirement> requirements;
  ParseIndex parses;
  std::vector<ExtractionTrace> traces;
  std::vector<std::pair<std::string, std::vector<PrecheckFlag>>> flags;
  std::size_t failures = 0;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

bool is_conllu(const PipelineOptions& o) {
  if (o.format != InputFormat::AUTO) return o.format == InputFormat::CONLLU;
  const auto ext = o.input.extension().string();
  return ext == ".conllu" || ext == ".conll";
}

Loaded load_sentences(const PipelineOptions& o, std::ostream& err) {
  LoadOptions load;
  if (o.relation_map) load.relations = RelationMap::load(*o.relation_map);
  ExtractorOptions ex;
  if (o.directives) ex.directives = DirectiveLexicon::load(*o.directives);

  Loaded l;
  const auto bundles = bundle_sentences(load_conllu(o.input, load));
  int group = 0;
  for (const auto& b : bundles) {
    const auto& s = b.main;
    auto flags = precheck(s);
    l.flags.emplace_back(s.req_id(), flags);
    if (o.command == Command::PRECHECK) continue;
    if (!flags.empty() && !o.force) {
      std::string names;
      for (auto f : flags) names += std::string(names.empty() ? "" : ", ") + to_string(f);
      err << s.req_id() << ": skipped, precheck flags " << names << " (use --force to extract anyway)\n";
      ++l.failures;
      continue;
    }
    try {
      auto result = extract(s, s.req_id(), ++group, ex, b.event_clauses);
      for (auto f : flags) result.trace.warnings.push_back(std::string("precheck: ") + to_string(f));
      for (const auto& r : result.requirements) {
        l.parses.emplace(r.id, s);
        l.requirements.push_back(r);
      }
      l.traces.push_back(std::move(result.trace));
    } catch (const ExtractionError& e) {
      err << s.req_id() << ": " << e.what() << '\n';
      ++l.failures;
    }
  }
  return l;
}

Loaded load_tuples(const PipelineOptions& o) {
  std::ifstream in(o.input);
  if (!in) throw std::runtime_error("cannot open " + o.input.string());
  Loaded l;
  l.requirements = parse_requirements(in);
  return l;
}

std::string precheck_report(const Loaded& l) {
  std::ostringstream out;
  for (const auto& [id, flags] : l.flags) {
    out << id << ':';
    if (flags.empty()) out << " ok";
    for (auto f : flags) out << ' ' << to_string(f);
    out << '\n';
  }
  return out.str();
}

std::string requirements_jsonl(const std::vector<Requirement>& reqs) {
  std::string out;
  for (const auto& r : reqs) out += to_json(r).dump() + '\n';
  return out;
}

int run(const PipelineOptions& o, std::ostream& out, std::ostream& err) {
  const SynonymLexicon lex = o.lexicon ? SynonymLexicon::load(*o.lexicon) : SynonymLexicon::builtin();
  ExtractorOptions ex;
  if (o.directives) ex.directives = DirectiveLexicon::load(*o.directives);
  const bool conllu = is_conllu(o);
  if (o.command == Command::PRECHECK && !conllu) {
    err << "precheck needs a CoNLL-U input\n";
    return kExitInputError;
  }
  auto loaded = conllu ? load_sentences(o, err) : load_tuples(o);
  std::filesystem::create_directories(o.out_dir);

  if (o.command == Command::PRECHECK) {
    const auto report = precheck_report(loaded);
    write_file(o.out_dir / "precheck.txt", report);
    out << report;
    for (const auto& [id, flags] : loaded.flags) {
      if (!flags.empty()) return kExitFindings;
    }
    return kExitClean;
  }

  const auto violations = validate_requirement_set(loaded.requirements);
  for (const auto& v : violations) err << v << '\n';
  if (!violations.empty()) return kExitInputError;

  write_file(o.out_dir / "requirements.txt", serialize_requirements(loaded.requirements));
  write_file(o.out_dir / "requirements.jsonl", requirements_jsonl(loaded.requirements));
  if (conllu) {
    std::string traces;
    for (const auto& t : loaded.traces) traces += format_trace(t);
    write_file(o.out_dir / "trace.txt", traces);
    write_file(o.out_dir / "precheck.txt", precheck_report(loaded));
  }
  out << loaded.requirements.size() << " requirement tuple(s)";
  if (loaded.failures) out << ", " << loaded.failures << " sentence(s) not extracted";
  out << '\n';
  const int input_status = loaded.failures ? kExitInputError : kExitClean;
  if (o.command == Command::EXTRACT) return input_status;

  const auto result = detect(loaded.requirements, loaded.parses, lex, ex);
  for (const auto& w : result.warnings) err << "warning: " << w << '\n';
  write_file(o.out_dir / "conflicts.jsonl", conflicts_jsonl(result.conflicts));
  write_file(o.out_dir / "conflicts.txt", conflicts_text(result.conflicts));
  if (o.dot) {
    write_file(o.out_dir / "interlock-operation-event.dot", to_dot(result.operation_event));
    write_file(o.out_dir / "interlock-input-output.dot", to_dot(result.input_output));
  }
  out << result.conflicts.size() << " conflict(s)\n";

  if (o.command == Command::EVALUATE) {
    if (!o.gold) {
      err << "evaluate needs --gold\n";
      return kExitInputError;
    }
    const auto gold = load_gold(*o.gold);
    std::set<std::string> ids;
    for (const auto& r : loaded.requirements) ids.insert(r.id);
    for (const auto& r : result.analyzed) ids.insert(r.id);
    check_gold_ids(gold, ids);
    std::string report = format_evaluation(evaluate(result.conflicts, gold));
    if (o.gold_tuples) {
      std::ifstream in(*o.gold_tuples);
      if (!in) throw std::runtime_error("cannot open " + o.gold_tuples->string());
      const auto scores = score_tuples(loaded.requirements, parse_requirements(in));
      report += '\n' + format_tuple_table({{o.input.stem().string(), scores}});
    }
    write_file(o.out_dir / "evaluation.txt", report);
    out << report;
  }
  if (input_status != kExitClean) return input_status;
  return result.conflicts.empty() ? kExitClean : kExitFindings;
}

}  // namespace

int run_pipeline(const PipelineOptions& options, std::ostream& out, std::ostream& err) {
  try {
    return run(options, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

}  // namespace reqconflict
