#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "euafnet/activation.hpp"

namespace euafnet {

// One affine stage: y = W x + b, optionally followed by the activation.
// Weights are stored row-major: weights[r * in + c] multiplies input c for
// output row r.
struct AffineLayer {
  int in = 0;
  int out = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  bool activated = true;
};

// An immutable feedforward network.  Depth counts activation applications;
// width is the largest activated layer.  Metadata is a free-form string map
// carried through serialization.
class FeedforwardNetwork {
 public:
  FeedforwardNetwork(int input_dim, std::vector<AffineLayer> layers,
                     std::map<std::string, std::string> metadata = {});

  int input_dim() const { return input_dim_; }
  int output_dim() const { return layers_.back().out; }
  const std::vector<AffineLayer>& layers() const { return layers_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

  // Number of activation applications on the path from input to output.
  int depth() const;
  // Largest activated layer size.
  int width() const;
  // Layer sizes from input to output, e.g. {1, 36, 36, 36, 36, 36, 1}.
  std::vector<int> widths() const;
  // Total number of activated units across all layers.
  int activated_unit_count() const;
  double max_abs_parameter() const;

  // Returns a copy with the metadata replaced.
  FeedforwardNetwork with_metadata(
      std::map<std::string, std::string> metadata) const;

 private:
  int input_dim_ = 0;
  std::vector<AffineLayer> layers_;
  std::map<std::string, std::string> metadata_;
};

using ActivationFn = double (*)(double);

// Evaluates the network on one input vector.  Dimension mismatches raise
// std::invalid_argument; a non-finite intermediate raises std::runtime_error
// naming the offending layer.  The activation is pluggable so the same
// machinery can drive networks built on other unit functions.
std::vector<double> evaluate_network(const FeedforwardNetwork& net,
                                     std::span<const double> input,
                                     ActivationFn activation = &euaf);

// Convenience for 1-in / 1-out networks.
double evaluate_scalar(const FeedforwardNetwork& net, double x,
                       ActivationFn activation = &euaf);

// A 1-in / 1-out fragment computing min{max{t, 0}, 1} exactly for t in
// [-1, 2], using two activated units and one combining output row:
//   clip(t) = 1.5 * euaf((t + 1) / 3) - 0.5 * euaf(t + 1).
FeedforwardNetwork clip01_fragment();

// Appends the clip fragment to a scalar network.  When the final stage is an
// unactivated affine row it is folded into the two clip units, so the result
// costs exactly two activated units plus one combiner.  The fold keeps the
// first clip row elementwise equal to one third of the second, which is the
// structural signature later validity checks look for.
FeedforwardNetwork append_clip01(const FeedforwardNetwork& net);

}  // namespace euafnet
