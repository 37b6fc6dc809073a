#pragma once

#include <string>
#include <string_view>

namespace maxtree {

/// Round-trippable decimal with 17 significant digits ("%.17g").
std::string format_double(double x);

/// Strict decimal parse of the whole field (surrounding blanks allowed).
/// Throws ParseError naming `field` on failure.
double parse_double(std::string_view text, std::string_view field);
long long parse_integer(std::string_view text, std::string_view field);

std::string_view trim(std::string_view s);

}  // namespace maxtree
