// Canonical text record for requirement tuples, plus a JSON export.
//
//   requirement "RE-5"
//     group: 1
//     event: SINGLE
//       condition:
//         agent: none
//         operation: DEFAULT "execute"
//         input: {"flight plan" []}
//         output: {"flight plan" []}
//         restriction: {}
//     agent: "VehicleCore" []
//     operation: DEFAULT "send"
//     input: {"UAV" [], "waypoint" ["next"]}
//     output: {"waypoint" ["next"]}
//     restriction: {}
//   end
//
// `event:` is one of ALL, SINGLE, AND, OR; the latter three are followed by
// their `condition:` blocks. Layout is free; only the token order matters.

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "reqconflict/requirement.hpp"

namespace reqconflict {

class RecordError : public std::runtime_error {
 public:
  RecordError(std::string message, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::string serialize_requirement(const Requirement& req);
std::string serialize_requirements(const std::vector<Requirement>& reqs);

/// Parses every record in the text. Throws RecordError.
std::vector<Requirement> parse_requirements(std::string_view text);
std::vector<Requirement> parse_requirements(std::istream& in);
/// Exactly one record expected.
Requirement parse_requirement(std::string_view text);

std::string format_entity(const Entity& e);
std::string format_entity_set(const EntitySet& s);
std::string format_operation(const OperationSpec& op);
std::string format_restriction(const Restriction& r);

nlohmann::ordered_json to_json(const Entity& e);
nlohmann::ordered_json to_json(const Requirement& req);

}  // namespace reqconflict
