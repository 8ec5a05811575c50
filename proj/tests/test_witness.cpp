#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "euafnet/rng.hpp"
#include "euafnet/witness.hpp"
#include "json.hpp"
#include "support/oracles.hpp"

using namespace euafnet;

namespace {

RationalMatrix from_rationals(int rows, int cols,
                              const std::vector<Rational>& v) {
  RationalMatrix m(rows, cols);
  m.entries = v;
  return m;
}

void check_invariants(const RationalMatrix& w0, const WitnessReport& rep) {
  REQUIRE(rep.x.size() == static_cast<std::size_t>(w0.cols));
  const Rational half(1, 2);
  // Exact kernel membership, recomputed here from the original matrix.
  for (int r = 0; r < w0.rows; ++r) {
    Rational acc(0);
    for (int c = 0; c < w0.cols; ++c) acc += w0.at(r, c) * rep.x[c];
    CHECK(acc == 0);
  }
  for (const Rational& v : rep.x) CHECK(abs(v) <= half);
  REQUIRE(rep.half_coordinate >= 0);
  REQUIRE(rep.half_coordinate < w0.cols);
  CHECK(rep.x[rep.half_coordinate] == half);
}

}  // namespace

TEST_CASE("large extreme coefficient puts the half on the dependent side") {
  const RationalMatrix w0 =
      from_rationals(2, 3, {1, 0, -2, 0, 1, 3});
  const WitnessReport rep = construct_witness(w0);
  check_invariants(w0, rep);
  REQUIRE(rep.mu.has_value());
  CHECK(*rep.mu == Rational(-3));
  CHECK(rep.mu_free_col == 2);
  CHECK(rep.mu_pivot_row == 1);
  CHECK_FALSE(rep.degenerate);
  REQUIRE(rep.x.size() == 3);
  CHECK(rep.x[0] == Rational(-1, 3));
  CHECK(rep.x[1] == Rational(1, 2));
  CHECK(rep.x[2] == Rational(-1, 6));
  CHECK(rep.half_coordinate == 1);
}

TEST_CASE("small extreme coefficient puts the half on the free coordinate") {
  const RationalMatrix w0 = from_rationals(
      2, 3,
      {1, 0, Rational(-1, 2), 0, 1, Rational(1, 4)});
  const WitnessReport rep = construct_witness(w0);
  check_invariants(w0, rep);
  REQUIRE(rep.mu.has_value());
  CHECK(*rep.mu == Rational(1, 2));
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.x[0] == Rational(1, 4));
  CHECK(rep.x[1] == Rational(-1, 8));
  CHECK(rep.x[2] == Rational(1, 2));
  CHECK(rep.half_coordinate == 2);
}

TEST_CASE("the zero matrix takes the degenerate branch") {
  const RationalMatrix w0(1, 2);
  const WitnessReport rep = construct_witness(w0);
  check_invariants(w0, rep);
  CHECK(rep.degenerate);
  CHECK_FALSE(rep.mu.has_value());
  CHECK(rep.x[0] == Rational(1, 2));
  CHECK(rep.x[1] == Rational(0));
  CHECK(rep.half_coordinate == 0);
}

TEST_CASE("shape mismatches are rejected") {
  CHECK_THROWS_AS(construct_witness(RationalMatrix(2, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(construct_witness(RationalMatrix(3, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(construct_witness(RationalMatrix(1, 3)),
                  std::invalid_argument);
}

TEST_CASE("random kernel matrices satisfy every invariant exactly") {
  for (int d : {2, 3, 5}) {
    Rng rng(900 + d);
    for (int trial = 0; trial < 200; ++trial) {
      const RationalMatrix w0 = test::random_rational_matrix(d - 1, d, rng);
      const WitnessReport rep = construct_witness(w0);
      check_invariants(w0, rep);
      if (rep.degenerate) {
        CHECK_FALSE(rep.mu.has_value());
      } else {
        REQUIRE(rep.mu.has_value());
        CHECK(*rep.mu != 0);
        // The extreme coefficient really is the largest in magnitude.
        for (const CoefficientEntry& e : rep.classes.coefficients) {
          CHECK(abs(e.value) <= abs(*rep.mu));
        }
      }
    }
  }
}

TEST_CASE("row scaling never changes the witness") {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const RationalMatrix w0 = test::random_rational_matrix(2, 3, rng);
    RationalMatrix scaled = w0;
    const Rational alpha(-7, 3);
    for (auto& e : scaled.entries) e *= alpha;
    const WitnessReport a = construct_witness(w0);
    const WitnessReport b = construct_witness(scaled);
    CHECK(a.x == b.x);
    CHECK(a.half_coordinate == b.half_coordinate);
    CHECK(a.degenerate == b.degenerate);
  }
}

TEST_CASE("the report exports one-based indices and fraction strings") {
  const RationalMatrix w0 =
      from_rationals(2, 3, {1, 0, -2, 0, 1, 3});
  const WitnessReport rep = construct_witness(w0);
  const nlohmann::json doc = nlohmann::json::parse(witness_report_json(rep));
  CHECK(doc.at("index_base") == 1);
  CHECK(doc.at("pivot_columns") == nlohmann::json({1, 2}));
  CHECK(doc.at("free") == nlohmann::json({3}));
  CHECK(doc.at("forced_zero").empty());
  CHECK(doc.at("dependent") == nlohmann::json({1, 2}));
  CHECK(doc.at("degenerate") == false);
  CHECK(doc.at("mu") == "-3");
  CHECK(doc.at("mu_free") == 3);
  CHECK(doc.at("half_coordinate") == 2);
  CHECK(doc.at("x") == nlohmann::json({"-1/3", "1/2", "-1/6"}));
  REQUIRE(doc.at("coefficients").size() == 2);
  CHECK(doc.at("coefficients")[0].at("value") == "2");
  CHECK(doc.at("coefficients")[1].at("value") == "-3");
  CHECK(doc.at("rref")[0] == nlohmann::json({"1", "0", "-2"}));

  const WitnessReport degen = construct_witness(RationalMatrix(1, 2));
  const nlohmann::json ddoc =
      nlohmann::json::parse(witness_report_json(degen));
  CHECK(ddoc.at("degenerate") == true);
  CHECK_FALSE(ddoc.contains("mu"));
  CHECK(ddoc.at("x") == nlohmann::json({"1/2", "0"}));
}

TEST_CASE("fraction strings render integers bare and reduce fully") {
  CHECK(to_fraction_string(Rational(6, 3)) == "2");
  CHECK(to_fraction_string(Rational(-4, 8)) == "-1/2");
  CHECK(to_fraction_string(Rational(0)) == "0");
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-0.75) == Rational(-3, 4));
  CHECK(rational_to_double(Rational(1, 4)) == 0.25);
  CHECK_THROWS_AS(rational_from_double(
                      std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}
