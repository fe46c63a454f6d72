#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace posdec {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses "3", "-2", "0.51", ".5", "51/100" into an exact rational.
/// Returns nullopt on anything else (including NaN/inf spellings).
std::optional<Rat> try_parse_rational(std::string_view text);

/// Like try_parse_rational but throws ParseError on failure.
Rat parse_rational(std::string_view text);

/// Shortest exact representation: a plain decimal when the denominator
/// divides a power of ten, otherwise "p/q".  Never rounds.
std::string format_rational(const Rat& value);

}  // namespace posdec
