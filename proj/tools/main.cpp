#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "reqconflict/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, reqconflict::PipelineOptions& o, std::string& format) {
  cmd->add_option("-i,--input", o.input, "CoNLL-U parses or tuple records")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", format, "Input format: auto, conllu or tuples")
      ->check(CLI::IsMember({"auto", "conllu", "tuples"}));
  cmd->add_option("-o,--out", o.out_dir, "Output directory");
  cmd->add_option("--relation-map", o.relation_map, "Relation label map applied while loading")
      ->check(CLI::ExistingFile);
  cmd->add_option("--directives", o.directives, "Directive phrase list (one per line)")->check(CLI::ExistingFile);
  cmd->add_flag("--force", o.force, "Extract sentences that fail the precheck");
}

}  // namespace

int main(int argc, char** argv) {
  using reqconflict::Command;
  CLI::App app{"Detects conflicts among shall-style requirements from their dependency parses"};
  app.require_subcommand(1);

  reqconflict::PipelineOptions o;
  std::string format = "auto";

  auto* extract = app.add_subcommand("extract", "Extract requirement tuples");
  auto* detect = app.add_subcommand("detect", "Extract tuples and detect conflicts");
  auto* evaluate = app.add_subcommand("evaluate", "Detect conflicts and score them against gold labels");
  auto* precheck = app.add_subcommand("precheck", "Flag sentences outside the supported grammar");
  for (auto* cmd : {extract, detect, evaluate, precheck}) add_common(cmd, o, format);
  for (auto* cmd : {detect, evaluate}) {
    cmd->add_option("--lexicon", o.lexicon, "Synonym lexicon")->check(CLI::ExistingFile);
    cmd->add_flag("--dot", o.dot, "Write interlock graphs as Graphviz files");
  }
  evaluate->add_option("--gold", o.gold, "Gold conflict labels")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--gold-tuples", o.gold_tuples, "Gold tuple records for extraction accuracy")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : reqconflict::kExitInputError;
  }

  if (extract->parsed()) o.command = Command::EXTRACT;
  if (detect->parsed()) o.command = Command::DETECT;
  if (evaluate->parsed()) o.command = Command::EVALUATE;
  if (precheck->parsed()) o.command = Command::PRECHECK;
  static const std::map<std::string, reqconflict::InputFormat> formats = {
      {"auto", reqconflict::InputFormat::AUTO},
      {"conllu", reqconflict::InputFormat::CONLLU},
      {"tuples", reqconflict::InputFormat::TUPLES}};
  o.format = formats.at(format);
  return reqconflict::run_pipeline(o, std::cout, std::cerr);
}
