#pragma once

#include <string>
#include <vector>

#include "euafnet/fit.hpp"
#include "euafnet/kst.hpp"
#include "euafnet/lower_bound.hpp"

namespace euafnet {

// A named scalar target with its default fitting interval.
struct TargetFunction {
  std::string id;
  std::string description;
  double a = 0.0;
  double b = 1.0;
  ScalarFn fn;
};

// Registry lookup; unknown ids raise std::invalid_argument listing the
// available names.
const TargetFunction& lookup_target(const std::string& id);
std::vector<std::string> target_ids();

// Built-in superposition triples: "d1" (identity pieces) and "d2"
// (quadratic outer with fractional-power inner functions).
SyntheticKstTriple builtin_triple(const std::string& id);
std::vector<std::string> triple_ids();

// The separable family with unit coefficients and h_j(t) = 2|t|; its
// separation constant is exactly 1.
ExampleFamily builtin_family(int dims);

}  // namespace euafnet
