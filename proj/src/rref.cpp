#include "euafnet/rref.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace euafnet {

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("rational_from_double: non-finite input");
  }
  if (x == 0.0) {
    return Rational(0);
  }
  int exp = 0;
  const double m = std::frexp(x, &exp);       // x = m * 2^exp, |m| in [0.5, 1)
  const auto mant =
      static_cast<long long>(std::ldexp(m, 53));  // exact for finite doubles
  const int e2 = exp - 53;
  Rational r(mant);
  boost::multiprecision::cpp_int p = 1;
  p <<= (e2 >= 0 ? e2 : -e2);
  if (e2 >= 0) {
    r *= Rational(p);
  } else {
    r /= Rational(p);
  }
  return r;
}

double rational_to_double(const Rational& r) {
  return r.convert_to<double>();
}

std::string to_fraction_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

RationalMatrix RationalMatrix::from_doubles(int rows, int cols,
                                            std::span<const double> values) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("RationalMatrix: empty shape");
  }
  if (values.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("RationalMatrix: value count mismatch");
  }
  RationalMatrix m(rows, cols);
  for (std::size_t i = 0; i < values.size(); ++i) {
    m.entries[i] = rational_from_double(values[i]);
  }
  return m;
}

RrefResult rref(const RationalMatrix& m) {
  if (m.rows < 1 || m.cols < 1) {
    throw std::invalid_argument("rref: empty matrix");
  }
  RrefResult out;
  out.matrix = m;
  RationalMatrix& a = out.matrix;
  int row = 0;
  for (int col = 0; col < a.cols && row < a.rows; ++col) {
    int pivot = -1;
    for (int r = row; r < a.rows; ++r) {
      if (a.at(r, col) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row) {
      for (int c = 0; c < a.cols; ++c) {
        std::swap(a.at(pivot, c), a.at(row, c));
      }
    }
    const Rational scale = a.at(row, col);
    for (int c = col; c < a.cols; ++c) {
      a.at(row, c) /= scale;
    }
    for (int r = 0; r < a.rows; ++r) {
      if (r == row) continue;
      const Rational factor = a.at(r, col);
      if (factor == 0) continue;
      for (int c = col; c < a.cols; ++c) {
        a.at(r, c) -= factor * a.at(row, c);
      }
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  return out;
}

IndexClassification classify_indices(const RrefResult& reduced) {
  const RationalMatrix& a = reduced.matrix;
  IndexClassification out;

  std::vector<bool> is_pivot(a.cols, false);
  for (int col : reduced.pivot_columns) is_pivot[col] = true;
  for (int c = 0; c < a.cols; ++c) {
    if (!is_pivot[c]) out.free_columns.push_back(c);
  }

  for (std::size_t p = 0; p < reduced.pivot_columns.size(); ++p) {
    const int pivot_col = reduced.pivot_columns[p];
    const int pivot_row = static_cast<int>(p);
    bool touches_free = false;
    for (int free_col : out.free_columns) {
      const Rational& entry = a.at(pivot_row, free_col);
      if (entry != 0) {
        touches_free = true;
        out.coefficients.push_back(
            CoefficientEntry{pivot_col, pivot_row, free_col, -entry});
      }
    }
    if (touches_free) {
      out.dependent.push_back(pivot_col);
    } else {
      out.forced_zero.push_back(pivot_col);
    }
  }
  std::sort(out.coefficients.begin(), out.coefficients.end(),
            [](const CoefficientEntry& x, const CoefficientEntry& y) {
              if (x.free_col != y.free_col) return x.free_col < y.free_col;
              return x.pivot_row < y.pivot_row;
            });
  return out;
}

}  // namespace euafnet
