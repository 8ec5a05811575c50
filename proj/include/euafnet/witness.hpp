#pragma once

#include <optional>
#include <string>

#include "euafnet/rref.hpp"

namespace euafnet {

struct WitnessReport {
  RrefResult reduced;
  IndexClassification classes;
  bool degenerate = false;        // no pivot variable depends on a free one
  std::optional<Rational> mu;     // extreme coefficient, absent if degenerate
  int mu_free_col = -1;
  int mu_pivot_row = -1;
  std::vector<Rational> x;        // the witness, one entry per column
  int half_coordinate = -1;       // index of a coordinate equal to exactly 1/2
};

// For a (d-1) x d matrix W, constructs an exact kernel vector with
// W x = 0, |x_j| <= 1/2 for all j, and one coordinate equal to +1/2:
// the free coordinate carrying the largest-magnitude coefficient is set to
// 1/2 (or to sign(mu)/(2|mu|) when |mu| >= 1, which puts the 1/2 on the
// dependent side); ties resolve to the smallest free column, then the
// smallest pivot row.  All arithmetic is exact.
WitnessReport construct_witness(const RationalMatrix& w0);

// Structured export with 1-based indices and "p/q" fraction strings.
std::string witness_report_json(const WitnessReport& report);

}  // namespace euafnet
