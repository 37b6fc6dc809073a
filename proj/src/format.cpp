#include "maxtree/format.hpp"

#include <charconv>
#include <cstdio>

#include "maxtree/error.hpp"

namespace maxtree {

std::string format_double(double x) {
  char buf[40];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string_view trim(std::string_view s) {
  const auto blank = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view text, std::string_view field) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.empty() || ec != std::errc{} || ptr != last) {
    throw ParseError("cannot parse " + std::string(field) + ": '" +
                     std::string(t) + "' is not a decimal number");
  }
  return value;
}

long long parse_integer(std::string_view text, std::string_view field) {
  const std::string_view t = trim(text);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size()) {
    throw ParseError("cannot parse " + std::string(field) + ": '" +
                     std::string(t) + "' is not an integer");
  }
  return value;
}

}  // namespace maxtree
