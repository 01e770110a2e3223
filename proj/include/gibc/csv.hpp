#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace gibc::csv
{

// Shortest representation that parses back to the identical double.
std::string format(double value);
double parse_double(std::string_view text);
std::vector<std::string_view> split(std::string_view line, char sep = ',');
std::string_view trim(std::string_view s);

}  // namespace gibc::csv
