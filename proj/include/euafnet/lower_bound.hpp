#pragma once

#include <span>
#include <vector>

#include "euafnet/fit.hpp"
#include "euafnet/network.hpp"
#include "euafnet/witness.hpp"

namespace euafnet {

// Separable target f(x) = sum_j c_j h_j(x_j) with positive coefficients,
// h_j(0) = 0, h_j nonnegative near the origin, and h_j(1/2) bounded away
// from 0.  Its separation constant is
//   c_star = (min_j c_j) * (min_j h_j(1/2)).
struct ExampleFamily {
  int dims = 0;
  std::vector<double> c;
  std::vector<ScalarFn> h;
  double c_star = 0.0;

  double operator()(std::span<const double> x) const;
};

// Validates the family (rejects h_j(0) != 0, h_j(1/2) == 0, nonpositive
// coefficients, or negative h values on [-1/2, 1/2]) and fills in c_star.
ExampleFamily make_example_family(int dims, std::vector<double> c,
                                  std::vector<ScalarFn> h);

struct GapCertificate {
  double value_at_origin = 0.0;   // network output at 0
  double value_at_witness = 0.0;  // network output at the witness point
  double target_at_origin = 0.0;
  double target_at_witness = 0.0;
  double gap = 0.0;               // worst pointwise error over the two points
  double certified_floor = 0.0;   // c_star / 2
  bool holds = false;             // gap >= certified_floor - 1e-9
  std::vector<double> witness_point;
  WitnessReport witness;
};

// Certifies that a network whose first hidden layer has d-1 units cannot
// track the family at both the origin and an exactly-constructed kernel
// point of its first-layer weight matrix.  The network's hidden width must
// be exactly d-1 (raises std::invalid_argument otherwise).  A custom
// activation may be supplied; the certificate is activation-independent.
GapCertificate two_point_gap(const ExampleFamily& family,
                             const FeedforwardNetwork& net,
                             ActivationFn activation = &euaf);

}  // namespace euafnet
