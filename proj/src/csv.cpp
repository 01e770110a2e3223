#include "gibc/csv.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "gibc/errors.hpp"

namespace gibc::csv
{

std::string format(double value)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text)
{
  text = trim(text);
  if (!text.empty() && text.front() == '+')
  {
    text.remove_prefix(1);
  }
  double value = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
  {
    if (text == "nan" || text == "-nan")
    {
      return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true)
  {
    auto pos = line.find(sep, start);
    if (pos == std::string_view::npos)
    {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
  {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
  {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace gibc::csv
