// Small string helpers shared by the modules.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reqconflict::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
/// Lowercase, trim, and collapse internal whitespace runs to one space.
std::string normalize(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_words(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
bool starts_with_word(std::string_view s, std::string_view word);

}  // namespace reqconflict::text
