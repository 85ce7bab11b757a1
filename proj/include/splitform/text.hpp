#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace splitform {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
// Full-string parse; throws ModelError on trailing junk or empty input.
double parse_double(std::string_view text);
int parse_int(std::string_view text);
std::vector<std::string> split_fields(std::string_view line, char sep);
std::string_view trim(std::string_view s);

}  // namespace splitform
