// End-to-end runs: load, precheck, extract, detect, report, score.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace reqconflict {

enum class Command { EXTRACT, DETECT, EVALUATE, PRECHECK };

enum class InputFormat { AUTO, CONLLU, TUPLES };

struct PipelineOptions {
  Command command = Command::DETECT;
  std::filesystem::path input;
  InputFormat format = InputFormat::AUTO;  // AUTO: .conllu/.conll are parses, anything else tuple records
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> gold_tuples;
  std::optional<std::filesystem::path> relation_map;
  std::optional<std::filesystem::path> directives;
  std::filesystem::path out_dir = "reqconflict-out";
  bool dot = false;
  bool force = false;  // extract sentences that fail the precheck
};

inline constexpr int kExitClean = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitInputError = 2;

/// Writes artifacts under options.out_dir; progress goes to `out`,
/// diagnostics to `err`. Returns 0 clean, 1 conflicts or precheck flags
/// found, 2 input errors.
int run_pipeline(const PipelineOptions& options, std::ostream& out, std::ostream& err);

}  // namespace reqconflict
