#include "posdec/rational.hpp"

#include "posdec/errors.hpp"

#include <cctype>
#include <cstddef>

namespace posdec {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Int digits_to_int(std::string_view s) {
  Int out = 0;
  for (char c : s) {
    out *= 10;
    out += c - '0';
  }
  return out;
}

}  // namespace

std::optional<Rat> try_parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
    if (text.empty()) return std::nullopt;
  }

  Rat magnitude;
  std::size_t slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    Int d = digits_to_int(den);
    if (d == 0) return std::nullopt;
    magnitude = Rat(digits_to_int(num), d);
  } else {
    std::size_t dot = text.find('.');
    if (dot == std::string_view::npos) {
      if (!all_digits(text)) return std::nullopt;
      magnitude = Rat(digits_to_int(text));
    } else {
      std::string_view whole = text.substr(0, dot);
      std::string_view frac = text.substr(dot + 1);
      if (whole.empty() && frac.empty()) return std::nullopt;
      if (!whole.empty() && !all_digits(whole)) return std::nullopt;
      if (!frac.empty() && !all_digits(frac)) return std::nullopt;
      Int scale = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
      Int units = whole.empty() ? Int(0) : digits_to_int(whole);
      Int rest = frac.empty() ? Int(0) : digits_to_int(frac);
      magnitude = Rat(units * scale + rest, scale);
    }
  }
  if (negative) magnitude = -magnitude;
  return magnitude;
}

Rat parse_rational(std::string_view text) {
  auto parsed = try_parse_rational(text);
  if (!parsed) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  return *parsed;
}

std::string format_rational(const Rat& value) {
  Int num = boost::multiprecision::numerator(value);
  Int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();

  // A denominator of the form 2^a * 5^b admits an exact decimal with
  // max(a, b) fractional digits.
  Int d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) return num.str() + "/" + den.str();

  int digits = twos > fives ? twos : fives;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Int scaled = num * scale / den;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string body = scaled.str();
  if (body.size() <= static_cast<std::size_t>(digits)) {
    body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
  }
  body.insert(body.size() - static_cast<std::size_t>(digits), ".");
  return (negative ? "-" : "") + body;
}

}  // namespace posdec
