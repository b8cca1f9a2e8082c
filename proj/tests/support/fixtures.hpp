#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "reqconflict/conllu.hpp"
#include "reqconflict/record.hpp"

namespace reqconflict::testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(REQCONFLICT_FIXTURES) / name; }

inline ParsedSentence fixture_sentence(const std::string& file, const std::string& id) {
  for (auto& s : load_conllu(fixture(file))) {
    if (s.req_id() == id) return s;
  }
  throw std::runtime_error("no sentence " + id + " in " + file);
}

inline std::vector<Requirement> fixture_records(const std::string& file) {
  std::ifstream in(fixture(file));
  if (!in) throw std::runtime_error("cannot open " + file);
  return parse_requirements(in);
}

}  // namespace reqconflict::testing
