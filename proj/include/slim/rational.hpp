#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace slim {

/// Exact rational number used for every optimality-critical quantity
/// (class weights, penalties, objective values, rates).
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

/// Parses "3", "-1.95", "19/10" or "2.5e-3" exactly (no binary floating
/// point round trip). Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

/// "num/den" or "num" when the denominator is 1.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Least common multiple of two positive big integers.
BigInt lcm(const BigInt& a, const BigInt& b);

}  // namespace slim
