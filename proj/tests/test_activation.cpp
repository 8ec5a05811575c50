#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "euafnet/activation.hpp"

using namespace euafnet;

TEST_CASE("triangle branch landmark values") {
  CHECK(euaf(0.0) == 0.0);
  CHECK(euaf(0.5) == 0.5);
  CHECK(euaf(1.0) == 1.0);
  CHECK(euaf(1.5) == 0.5);
  CHECK(euaf(2.0) == 0.0);
  CHECK(euaf(3.0) == 1.0);
  CHECK(euaf(4.0) == 0.0);
  CHECK(euaf(7.25) == 0.75);
}

TEST_CASE("negative branch is x / (1 + |x|)") {
  CHECK(euaf(-1.0) == -0.5);
  CHECK(euaf(-0.5) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(euaf(-3.0) == -0.75);
  CHECK(euaf(-1e6) == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("identity on [0,1] and mirror on [1,2]") {
  for (int i = 0; i <= 1000; ++i) {
    const double x = i / 1000.0;
    CHECK(euaf(x) == doctest::Approx(x).epsilon(1e-12));
    CHECK(euaf(1.0 + x) == doctest::Approx(1.0 - x).epsilon(1e-12));
  }
}

TEST_CASE("periodicity with period 2 on the nonnegative axis") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = 40.0 * (i / 2000.0);
    CHECK(std::abs(euaf(x + 2.0) - euaf(x)) <= 1e-12);
  }
}

TEST_CASE("range bounds") {
  for (int i = 0; i <= 4000; ++i) {
    const double x = -20.0 + 40.0 * (i / 4000.0);
    const double v = euaf(x);
    if (x >= 0.0) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    } else {
      CHECK(v > -1.0);
      CHECK(v < 0.0);
    }
  }
}

TEST_CASE("continuity at the branch seam") {
  for (double h : {1e-3, 1e-6, 1e-9}) {
    CHECK(std::abs(euaf(h)) <= h * (1.0 + h));
    CHECK(std::abs(euaf(-h)) <= h * (1.0 + h));
  }
}

TEST_CASE("finite differences match the analytic slope away from kinks") {
  const double dh = 1e-5;
  // Positive side: stay clear of the integer kinks.
  for (int k = 0; k <= 6; ++k) {
    for (double frac : {0.2, 0.5, 0.8}) {
      const double x = k + frac;
      const double fd = (euaf(x + dh) - euaf(x - dh)) / (2.0 * dh);
      CHECK(std::abs(fd - euaf_slope(x)) < 1e-6);
    }
  }
  // Negative side: smooth everywhere.
  for (double x : {-0.1, -0.7, -1.5, -3.0, -5.25}) {
    const double fd = (euaf(x + dh) - euaf(x - dh)) / (2.0 * dh);
    CHECK(std::abs(fd - euaf_slope(x)) < 1e-6);
  }
}

TEST_CASE("non-finite inputs are rejected") {
  CHECK_THROWS_AS(euaf(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK_THROWS_AS(euaf(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(euaf_slope(-std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("seam snapping keeps even multiples exactly at zero") {
  // 0.1 * 60 carries rounding error yet lies within the snap window of 6.
  const double x = 0.1 * 60.0;
  CHECK(euaf(x) == 0.0);
  CHECK(euaf(2.0 + 1e-13) == 0.0);
  CHECK(euaf(2.0 - 1e-13) == 0.0);
}
