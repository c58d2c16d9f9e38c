#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace selinf {

using Rational = boost::multiprecision::cpp_rational;

// Accepts plain decimals ("0.140", "-3", "2.5e-2") and fractions ("1/3").
// Returns nullopt on anything else.
std::optional<Rational> parse_rational(const std::string& text);

// Shortest round-tripping decimal form of x, re-read as an exact fraction.
// Throws std::invalid_argument for non-finite x.
Rational rational_from_double(double x);

double to_double(const Rational& r);

// Exact decimal digits when the denominator divides a power of 10, else "p/q".
std::string rational_to_string(const Rational& r);

}  // namespace selinf
