#include "euafnet/lower_bound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "euafnet/tables.hpp"

namespace euafnet {

double ExampleFamily::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dims) {
    throw std::invalid_argument("ExampleFamily: input has size " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(dims));
  }
  double total = 0.0;
  for (int j = 0; j < dims; ++j) {
    total += c[j] * h[j](x[j]);
  }
  return total;
}

ExampleFamily make_example_family(int dims, std::vector<double> c,
                                  std::vector<ScalarFn> h) {
  if (dims < 2) {
    throw std::invalid_argument("make_example_family: dims must be >= 2");
  }
  if (c.size() != static_cast<std::size_t>(dims) ||
      h.size() != static_cast<std::size_t>(dims)) {
    throw std::invalid_argument(
        "make_example_family: need one coefficient and one component per "
        "dimension");
  }
  double min_c = c[0];
  for (double v : c) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(
          "make_example_family: coefficients must be positive");
    }
    min_c = std::min(min_c, v);
  }
  double min_half = 0.0;
  for (int j = 0; j < dims; ++j) {
    if (!h[j]) {
      throw std::invalid_argument("make_example_family: component " +
                                  std::to_string(j) + " is empty");
    }
    const double at0 = h[j](0.0);
    if (!(std::abs(at0) <= 1e-12)) {
      throw std::invalid_argument("make_example_family: component " +
                                  std::to_string(j) +
                                  " must vanish at 0, got " +
                                  format_double(at0));
    }
    const double at_half = h[j](0.5);
    if (!(std::abs(at_half) > 1e-12)) {
      throw std::invalid_argument("make_example_family: component " +
                                  std::to_string(j) +
                                  " must be nonzero at 1/2");
    }
    for (int k = 0; k <= 100; ++k) {
      const double x = -0.5 + k / 100.0;
      const double v = h[j](x);
      if (!std::isfinite(v) || v < -1e-12) {
        throw std::invalid_argument(
            "make_example_family: component " + std::to_string(j) +
            " must be nonnegative on [-1/2, 1/2], got " + format_double(v) +
            " at x = " + format_double(x));
      }
    }
    min_half = (j == 0) ? at_half : std::min(min_half, at_half);
  }
  ExampleFamily fam;
  fam.dims = dims;
  fam.c = std::move(c);
  fam.h = std::move(h);
  fam.c_star = min_c * min_half;
  return fam;
}

GapCertificate two_point_gap(const ExampleFamily& family,
                             const FeedforwardNetwork& net,
                             ActivationFn activation) {
  const int d = family.dims;
  if (net.input_dim() != d) {
    throw std::invalid_argument("two_point_gap: network expects " +
                                std::to_string(net.input_dim()) +
                                " inputs, family has " + std::to_string(d));
  }
  if (net.output_dim() != 1) {
    throw std::invalid_argument("two_point_gap: network output must be scalar");
  }
  const int first_out = net.layers().front().out;
  if (net.width() != d - 1 || first_out != d - 1) {
    throw std::invalid_argument(
        "two_point_gap: network width " + std::to_string(net.width()) +
        " (first layer " + std::to_string(first_out) +
        ") is not d-1 = " + std::to_string(d - 1) +
        "; the certificate only applies at width d-1");
  }

  const RationalMatrix w0 = RationalMatrix::from_doubles(
      d - 1, d, net.layers().front().weights);

  GapCertificate cert;
  cert.witness = construct_witness(w0);
  cert.witness_point.resize(d);
  for (int j = 0; j < d; ++j) {
    cert.witness_point[j] = rational_to_double(cert.witness.x[j]);
  }

  const std::vector<double> origin(d, 0.0);
  cert.value_at_origin = evaluate_network(net, origin, activation)[0];
  cert.value_at_witness =
      evaluate_network(net, cert.witness_point, activation)[0];
  cert.target_at_origin = family(origin);
  cert.target_at_witness = family(cert.witness_point);

  cert.gap = std::max(std::abs(cert.target_at_origin - cert.value_at_origin),
                      std::abs(cert.target_at_witness - cert.value_at_witness));
  cert.certified_floor = family.c_star / 2.0;
  cert.holds = cert.gap >= cert.certified_floor - 1e-9;
  return cert;
}

}  // namespace euafnet
