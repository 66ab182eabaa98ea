#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace nslab {

// Exact rational scalar.  Always normalized: lowest terms, denominator > 0.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Parses "p", "-p", "p/q" (arbitrary precision).  Throws ParseError on
// malformed input or zero denominator.
Rational parse_rational(const std::string& text);

// Canonical form: "p" for integers, "p/q" otherwise, q > 0.
std::string rational_to_string(const Rational& value);

// Exact binomial coefficient, n >= 0, 0 <= k <= n.
Integer binomial(long n, long k);

}  // namespace nslab
