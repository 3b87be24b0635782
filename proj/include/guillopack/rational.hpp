#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "guillopack/core.hpp"

namespace guillopack {

/// Exact arbitrary-precision rational; all threshold arithmetic uses it.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Accepts "3", "1/3", "0.05" and "-2.5". Throws InputError otherwise.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact comparison of an integer length against fraction * N.
inline bool greater_than_fraction(Coord length, const Rational& fraction, Coord n) {
  return Rational(length) > fraction * n;
}

BigInt floor_of(const Rational& r);
BigInt ceil_of(const Rational& r);

}  // namespace guillopack
