#include "euafnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace euafnet {

namespace {

void validate_layers(int input_dim, const std::vector<AffineLayer>& layers) {
  if (input_dim < 1) {
    throw std::invalid_argument("FeedforwardNetwork: input_dim must be >= 1");
  }
  if (layers.empty()) {
    throw std::invalid_argument("FeedforwardNetwork: at least one layer");
  }
  int expect_in = input_dim;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const AffineLayer& L = layers[i];
    const std::string where = "layer " + std::to_string(i);
    if (L.in != expect_in) {
      throw std::invalid_argument("FeedforwardNetwork: " + where +
                                  " input size " + std::to_string(L.in) +
                                  " does not match previous output " +
                                  std::to_string(expect_in));
    }
    if (L.out < 1) {
      throw std::invalid_argument("FeedforwardNetwork: " + where +
                                  " must have at least one output row");
    }
    if (L.weights.size() != static_cast<std::size_t>(L.in) * L.out) {
      throw std::invalid_argument("FeedforwardNetwork: " + where +
                                  " weight count mismatch");
    }
    if (L.bias.size() != static_cast<std::size_t>(L.out)) {
      throw std::invalid_argument("FeedforwardNetwork: " + where +
                                  " bias count mismatch");
    }
    for (double w : L.weights) {
      if (!std::isfinite(w)) {
        throw std::invalid_argument("FeedforwardNetwork: " + where +
                                    " has a non-finite weight");
      }
    }
    for (double b : L.bias) {
      if (!std::isfinite(b)) {
        throw std::invalid_argument("FeedforwardNetwork: " + where +
                                    " has a non-finite bias");
      }
    }
    expect_in = L.out;
  }
}

}  // namespace

FeedforwardNetwork::FeedforwardNetwork(
    int input_dim, std::vector<AffineLayer> layers,
    std::map<std::string, std::string> metadata)
    : input_dim_(input_dim),
      layers_(std::move(layers)),
      metadata_(std::move(metadata)) {
  validate_layers(input_dim_, layers_);
}

int FeedforwardNetwork::depth() const {
  int d = 0;
  for (const AffineLayer& L : layers_) {
    if (L.activated) ++d;
  }
  return d;
}

int FeedforwardNetwork::width() const {
  int w = 0;
  for (const AffineLayer& L : layers_) {
    if (L.activated) w = std::max(w, L.out);
  }
  return w;
}

std::vector<int> FeedforwardNetwork::widths() const {
  std::vector<int> sizes;
  sizes.reserve(layers_.size() + 1);
  sizes.push_back(input_dim_);
  for (const AffineLayer& L : layers_) {
    sizes.push_back(L.out);
  }
  return sizes;
}

int FeedforwardNetwork::activated_unit_count() const {
  int count = 0;
  for (const AffineLayer& L : layers_) {
    if (L.activated) count += L.out;
  }
  return count;
}

double FeedforwardNetwork::max_abs_parameter() const {
  double m = 0.0;
  for (const AffineLayer& L : layers_) {
    for (double w : L.weights) m = std::max(m, std::abs(w));
    for (double b : L.bias) m = std::max(m, std::abs(b));
  }
  return m;
}

FeedforwardNetwork FeedforwardNetwork::with_metadata(
    std::map<std::string, std::string> metadata) const {
  return FeedforwardNetwork(input_dim_, layers_, std::move(metadata));
}

std::vector<double> evaluate_network(const FeedforwardNetwork& net,
                                     std::span<const double> input,
                                     ActivationFn activation) {
  if (static_cast<int>(input.size()) != net.input_dim()) {
    throw std::invalid_argument(
        "evaluate_network: input has size " + std::to_string(input.size()) +
        ", expected " + std::to_string(net.input_dim()));
  }
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  const auto& layers = net.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const AffineLayer& L = layers[li];
    next.assign(L.out, 0.0);
    for (int r = 0; r < L.out; ++r) {
      double s = L.bias[r];
      const double* wrow = L.weights.data() + static_cast<std::size_t>(r) * L.in;
      for (int c = 0; c < L.in; ++c) {
        s += wrow[c] * cur[c];
      }
      if (!std::isfinite(s)) {
        throw std::runtime_error(
            "evaluate_network: non-finite value in layer " +
            std::to_string(li));
      }
      if (L.activated) {
        s = activation(s);
        if (!std::isfinite(s)) {
          throw std::runtime_error(
              "evaluate_network: non-finite activation output in layer " +
              std::to_string(li));
        }
      }
      next[r] = s;
    }
    cur.swap(next);
  }
  return cur;
}

double evaluate_scalar(const FeedforwardNetwork& net, double x,
                       ActivationFn activation) {
  if (net.input_dim() != 1 || net.output_dim() != 1) {
    throw std::invalid_argument("evaluate_scalar: network is not 1-in/1-out");
  }
  const double in[1] = {x};
  return evaluate_network(net, in, activation)[0];
}

FeedforwardNetwork clip01_fragment() {
  // Unit rows: euaf((t + 1) / 3) and euaf(t + 1); combiner 1.5 * p - 0.5 * q.
  AffineLayer units;
  units.in = 1;
  units.out = 2;
  units.activated = true;
  units.weights = {1.0 / 3.0, 1.0};
  units.bias = {1.0 / 3.0, 1.0};

  AffineLayer combine;
  combine.in = 2;
  combine.out = 1;
  combine.activated = false;
  combine.weights = {1.5, -0.5};
  combine.bias = {0.0};

  return FeedforwardNetwork(1, {std::move(units), std::move(combine)},
                            {{"role", "clip01"}});
}

FeedforwardNetwork append_clip01(const FeedforwardNetwork& net) {
  if (net.output_dim() != 1) {
    throw std::invalid_argument("append_clip01: network output must be scalar");
  }
  std::vector<AffineLayer> layers = net.layers();

  AffineLayer units;
  units.activated = true;
  units.out = 2;

  if (!layers.back().activated) {
    // Fold the trailing affine row a(x) into the two clip units:
    // row1 computes a(x) + 1, row0 computes (a(x) + 1) / 3 with each
    // parameter derived from row1 by the same division, so the one-third
    // relation holds bitwise.
    AffineLayer last = layers.back();
    layers.pop_back();
    units.in = last.in;
    std::vector<double> row1_w = last.weights;
    const double row1_b = last.bias[0] + 1.0;
    units.weights.resize(2 * units.in);
    units.bias.resize(2);
    for (int c = 0; c < units.in; ++c) {
      units.weights[c] = row1_w[c] / 3.0;
      units.weights[units.in + c] = row1_w[c];
    }
    units.bias[0] = row1_b / 3.0;
    units.bias[1] = row1_b;
  } else {
    // The network already ends in an activated scalar; feed it straight in.
    units.in = 1;
    units.weights = {1.0 / 3.0, 1.0};
    units.bias = {1.0 / 3.0, 1.0};
  }
  layers.push_back(std::move(units));

  AffineLayer combine;
  combine.in = 2;
  combine.out = 1;
  combine.activated = false;
  combine.weights = {1.5, -0.5};
  combine.bias = {0.0};
  layers.push_back(std::move(combine));

  std::map<std::string, std::string> md = net.metadata();
  md["clipped"] = "1";
  return FeedforwardNetwork(net.input_dim(), std::move(layers), std::move(md));
}

}  // namespace euafnet
