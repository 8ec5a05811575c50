#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "euafnet/rref.hpp"
#include "euafnet/rng.hpp"
#include "support/oracles.hpp"

using namespace euafnet;

namespace {

RationalMatrix from_ints(int rows, int cols, const std::vector<long>& v) {
  RationalMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = v[r * cols + c];
  return m;
}

bool is_reduced_form(const RrefResult& res) {
  const RationalMatrix& m = res.matrix;
  int prev_pivot = -1;
  int row = 0;
  for (int pc : res.pivot_columns) {
    if (pc <= prev_pivot) return false;
    prev_pivot = pc;
    if (m.at(row, pc) != 1) return false;
    for (int r = 0; r < m.rows; ++r) {
      if (r != row && m.at(r, pc) != 0) return false;
    }
    // Entries left of the pivot in its own row must vanish.
    for (int c = 0; c < pc; ++c) {
      if (m.at(row, c) != 0) return false;
    }
    ++row;
  }
  // Rows past the rank are identically zero.
  for (int r = res.rank(); r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) {
      if (m.at(r, c) != 0) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("already reduced matrices are fixed points") {
  const RationalMatrix m = from_ints(2, 3, {1, 0, -2, 0, 1, 3});
  const RrefResult res = rref(m);
  CHECK(res.matrix == m);
  CHECK(res.pivot_columns == std::vector<int>{0, 1});
  CHECK(res.rank() == 2);
}

TEST_CASE("a single row is scaled to a leading one") {
  const RrefResult res = rref(from_ints(1, 2, {2, 4}));
  CHECK(res.matrix == from_ints(1, 2, {1, 2}));
  CHECK(res.pivot_columns == std::vector<int>{0});
}

TEST_CASE("duplicate rows collapse to one pivot row") {
  const RrefResult res = rref(from_ints(2, 3, {1, 1, 1, 2, 2, 2}));
  CHECK(res.matrix == from_ints(2, 3, {1, 1, 1, 0, 0, 0}));
  CHECK(res.pivot_columns == std::vector<int>{0});
  CHECK(res.rank() == 1);
}

TEST_CASE("the zero matrix reduces to itself with no pivots") {
  const RrefResult res = rref(RationalMatrix(3, 4));
  CHECK(res.matrix == RationalMatrix(3, 4));
  CHECK(res.pivot_columns.empty());
  CHECK(res.rank() == 0);
}

TEST_CASE("reduction is idempotent") {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    const RationalMatrix m = test::random_rational_matrix(3, 5, rng);
    const RrefResult once = rref(m);
    const RrefResult twice = rref(once.matrix);
    CHECK(twice.matrix == once.matrix);
    CHECK(twice.pivot_columns == once.pivot_columns);
  }
}

TEST_CASE("reduction is invariant under nonzero row scaling") {
  Rng rng(102);
  for (int trial = 0; trial < 30; ++trial) {
    RationalMatrix m = test::random_rational_matrix(3, 4, rng);
    const RrefResult base = rref(m);
    for (int r = 0; r < m.rows; ++r) {
      const Rational scale(1 + rng.uniform_int(1, 7),
                           1 + rng.uniform_int(0, 4));
      for (int c = 0; c < m.cols; ++c) m.at(r, c) *= scale;
    }
    const RrefResult scaled = rref(m);
    CHECK(scaled.matrix == base.matrix);
    CHECK(scaled.pivot_columns == base.pivot_columns);
  }
}

TEST_CASE("canonical form agrees with the textbook elimination oracle") {
  Rng rng(103);
  for (int trial = 0; trial < 50; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 5));
    const int cols = static_cast<int>(rng.uniform_int(1, 6));
    const RationalMatrix m = test::random_rational_matrix(rows, cols, rng);
    const RrefResult lib = rref(m);
    const RationalMatrix naive = test::naive_rref(m);
    CHECK(lib.matrix == naive);
    // The pivot list must match the leading ones of the (unique) reduced form.
    std::vector<int> leads;
    for (int r = 0; r < naive.rows; ++r) {
      for (int c = 0; c < naive.cols; ++c) {
        if (naive.at(r, c) != 0) {
          leads.push_back(c);
          break;
        }
      }
    }
    CHECK(lib.pivot_columns == leads);
    CHECK(is_reduced_form(lib));
    CHECK(lib.rank() <= std::min(rows, cols));
  }
}

TEST_CASE("reduction rejects empty shapes") {
  CHECK_THROWS_AS(rref(RationalMatrix(0, 3)), std::invalid_argument);
  CHECK_THROWS_AS(rref(RationalMatrix(2, 0)), std::invalid_argument);
}

// --- column classification --------------------------------------------------

TEST_CASE("classification splits pivots by their free-column support") {
  // Reduced matrix [[1, 0, -2], [0, 1, 3]]: both pivots depend on the free
  // third column, with kernel coefficients 2 and -3.
  const RrefResult res = rref(from_ints(2, 3, {1, 0, -2, 0, 1, 3}));
  const IndexClassification cls = classify_indices(res);
  CHECK(cls.forced_zero.empty());
  CHECK(cls.dependent == std::vector<int>{0, 1});
  CHECK(cls.free_columns == std::vector<int>{2});
  REQUIRE(cls.coefficients.size() == 2);
  CHECK(cls.coefficients[0].pivot_col == 0);
  CHECK(cls.coefficients[0].free_col == 2);
  CHECK(cls.coefficients[0].value == Rational(2));
  CHECK(cls.coefficients[1].pivot_col == 1);
  CHECK(cls.coefficients[1].free_col == 2);
  CHECK(cls.coefficients[1].value == Rational(-3));
}

TEST_CASE("an identity block has only forced-zero pivots") {
  const RrefResult res = rref(from_ints(2, 2, {1, 0, 0, 1}));
  const IndexClassification cls = classify_indices(res);
  CHECK(cls.forced_zero == std::vector<int>{0, 1});
  CHECK(cls.dependent.empty());
  CHECK(cls.free_columns.empty());
  CHECK(cls.coefficients.empty());
}

TEST_CASE("a rank-zero matrix leaves every column free") {
  const IndexClassification cls = classify_indices(rref(RationalMatrix(1, 2)));
  CHECK(cls.forced_zero.empty());
  CHECK(cls.dependent.empty());
  CHECK(cls.free_columns == std::vector<int>{0, 1});
  CHECK(cls.coefficients.empty());
}

TEST_CASE("mixed forced and dependent pivots are separated") {
  // [[1, 0, 0], [0, 1, -1]]: first pivot row touches no free column, the
  // second depends on column 2 with coefficient 1.
  const RrefResult res = rref(from_ints(2, 3, {1, 0, 0, 0, 1, -1}));
  const IndexClassification cls = classify_indices(res);
  CHECK(cls.forced_zero == std::vector<int>{0});
  CHECK(cls.dependent == std::vector<int>{1});
  CHECK(cls.free_columns == std::vector<int>{2});
  REQUIRE(cls.coefficients.size() == 1);
  CHECK(cls.coefficients[0].pivot_col == 1);
  CHECK(cls.coefficients[0].pivot_row == 1);
  CHECK(cls.coefficients[0].free_col == 2);
  CHECK(cls.coefficients[0].value == Rational(1));
}

TEST_CASE("coefficients are ordered by free column then pivot row") {
  // Two free columns (2 and 3); every pivot depends on both.
  const RrefResult res = rref(from_ints(2, 4, {1, 0, 2, 3, 0, 1, 4, 5}));
  const IndexClassification cls = classify_indices(res);
  CHECK(cls.free_columns == std::vector<int>{2, 3});
  REQUIRE(cls.coefficients.size() == 4);
  CHECK(cls.coefficients[0].free_col == 2);
  CHECK(cls.coefficients[0].pivot_row == 0);
  CHECK(cls.coefficients[0].value == Rational(-2));
  CHECK(cls.coefficients[1].free_col == 2);
  CHECK(cls.coefficients[1].pivot_row == 1);
  CHECK(cls.coefficients[1].value == Rational(-4));
  CHECK(cls.coefficients[2].free_col == 3);
  CHECK(cls.coefficients[2].pivot_row == 0);
  CHECK(cls.coefficients[2].value == Rational(-3));
  CHECK(cls.coefficients[3].free_col == 3);
  CHECK(cls.coefficients[3].pivot_row == 1);
  CHECK(cls.coefficients[3].value == Rational(-5));
}

TEST_CASE("kernel basis vectors built from the coefficients annihilate the matrix") {
  Rng rng(104);
  for (int trial = 0; trial < 25; ++trial) {
    const int rows = static_cast<int>(rng.uniform_int(1, 4));
    const int cols = static_cast<int>(rng.uniform_int(2, 6));
    const RationalMatrix m = test::random_rational_matrix(rows, cols, rng);
    const RrefResult res = rref(m);
    const IndexClassification cls = classify_indices(res);
    CHECK(static_cast<int>(cls.forced_zero.size() + cls.dependent.size()) ==
          res.rank());
    for (int free_col : cls.free_columns) {
      std::vector<Rational> v(cols);
      v[free_col] = 1;
      for (const CoefficientEntry& e : cls.coefficients) {
        if (e.free_col == free_col) v[e.pivot_col] = e.value;
      }
      for (int r = 0; r < rows; ++r) {
        Rational dot = 0;
        for (int c = 0; c < cols; ++c) dot += m.at(r, c) * v[c];
        CHECK(dot == 0);
      }
    }
  }
}
