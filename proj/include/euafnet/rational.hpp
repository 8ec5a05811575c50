#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <span>
#include <string>
#include <vector>

namespace euafnet {

using Rational = boost::multiprecision::cpp_rational;

// Exact conversion; every finite double is a dyadic rational.
Rational rational_from_double(double x);

double rational_to_double(const Rational& r);

// "p/q" in lowest terms, or just "p" for integers.
std::string to_fraction_string(const Rational& r);

struct RationalMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> entries;  // row-major

  RationalMatrix() = default;
  RationalMatrix(int r, int c)
      : rows(r), cols(c), entries(static_cast<std::size_t>(r) * c) {}

  Rational& at(int r, int c) {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }
  const Rational& at(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }

  static RationalMatrix from_doubles(int rows, int cols,
                                     std::span<const double> values);

  bool operator==(const RationalMatrix&) const = default;
};

}  // namespace euafnet
