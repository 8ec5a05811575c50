#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "euafnet/network.hpp"
#include "euafnet/rng.hpp"
#include "euafnet/serialize.hpp"

using namespace euafnet;

namespace {

FeedforwardNetwork random_net(Rng& rng) {
  const int hidden = 1 + static_cast<int>(rng.uniform_int(0, 4));
  std::vector<AffineLayer> layers;
  int in = 1 + static_cast<int>(rng.uniform_int(0, 2));
  const int input_dim = in;
  for (int li = 0; li < hidden; ++li) {
    AffineLayer L;
    L.in = in;
    L.out = 1 + static_cast<int>(rng.uniform_int(0, 3));
    L.activated = true;
    L.weights.resize(static_cast<std::size_t>(L.in) * L.out);
    L.bias.resize(L.out);
    for (double& w : L.weights) w = rng.uniform(-3.0, 3.0);
    for (double& b : L.bias) b = rng.uniform(-3.0, 3.0);
    in = L.out;
    layers.push_back(std::move(L));
  }
  AffineLayer out;
  out.in = in;
  out.out = 1;
  out.activated = false;
  out.weights.resize(in);
  out.bias.resize(1);
  for (double& w : out.weights) w = rng.uniform(-3.0, 3.0);
  out.bias[0] = rng.uniform(-3.0, 3.0);
  layers.push_back(std::move(out));
  return FeedforwardNetwork(input_dim, std::move(layers),
                            {{"kind", "random"}});
}

}  // namespace

TEST_CASE("round trip is bitwise exact on random networks") {
  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const FeedforwardNetwork net = random_net(rng);
    const std::string text = serialize_network(net);
    const FeedforwardNetwork back = deserialize_network(text);

    REQUIRE(back.input_dim() == net.input_dim());
    REQUIRE(back.layers().size() == net.layers().size());
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
      const AffineLayer& a = net.layers()[i];
      const AffineLayer& b = back.layers()[i];
      CHECK(a.in == b.in);
      CHECK(a.out == b.out);
      CHECK(a.activated == b.activated);
      CHECK(a.weights == b.weights);  // element-wise bitwise equality
      CHECK(a.bias == b.bias);
    }
    CHECK(back.metadata() == net.metadata());

    // Equal networks serialize to byte-identical text.
    CHECK(serialize_network(back) == text);
  }
}

TEST_CASE("round trip preserves evaluation on random inputs") {
  Rng rng(7);
  const FeedforwardNetwork net = random_net(rng);
  const FeedforwardNetwork back = deserialize_network(serialize_network(net));
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x(net.input_dim());
    for (double& c : x) c = rng.uniform(-2.0, 2.0);
    CHECK(evaluate_network(net, x) == evaluate_network(back, x));
  }
}

TEST_CASE("clip fragment round trips") {
  const FeedforwardNetwork clip = clip01_fragment();
  const FeedforwardNetwork back = deserialize_network(serialize_network(clip));
  CHECK(back.widths() == clip.widths());
  for (double t : {-1.0, -0.3, 0.0, 0.4, 1.0, 1.7, 2.0}) {
    CHECK(evaluate_scalar(back, t) == evaluate_scalar(clip, t));
  }
}

TEST_CASE("stream wrappers match string serialization") {
  Rng rng(99);
  const FeedforwardNetwork net = random_net(rng);
  std::ostringstream os;
  save_network(net, os);
  std::istringstream is(os.str());
  const FeedforwardNetwork back = load_network(is);
  CHECK(serialize_network(back) == serialize_network(net));
}

TEST_CASE("missing fields are named in parse errors") {
  const FeedforwardNetwork clip = clip01_fragment();
  const std::string good = serialize_network(clip);

  // Remove the bias array of layer 0.
  std::string no_bias = good;
  const auto pos = no_bias.find("\"bias\"");
  REQUIRE(pos != std::string::npos);
  const auto end = no_bias.find(']', pos);
  no_bias.erase(pos, end - pos + 2);
  CHECK_THROWS_WITH_AS(deserialize_network(no_bias),
                       doctest::Contains("layers[0].bias"),
                       std::runtime_error);

  CHECK_THROWS_WITH_AS(deserialize_network("{}"),
                       doctest::Contains("format_version"),
                       std::runtime_error);

  std::string bad_version = good;
  const auto vpos = bad_version.find("\"format_version\": 1");
  REQUIRE(vpos != std::string::npos);
  bad_version.replace(vpos, 19, "\"format_version\": 9");
  CHECK_THROWS_WITH_AS(deserialize_network(bad_version),
                       doctest::Contains("format_version"),
                       std::runtime_error);
}

TEST_CASE("truncated streams raise parse errors") {
  const std::string good = serialize_network(clip01_fragment());
  const std::string truncated = good.substr(0, good.size() / 2);
  CHECK_THROWS_AS(deserialize_network(truncated), std::runtime_error);
  CHECK_THROWS_AS(deserialize_network(""), std::runtime_error);
  CHECK_THROWS_AS(deserialize_network("not json at all"), std::runtime_error);
}

TEST_CASE("structurally invalid documents are rejected with diagnostics") {
  // Valid JSON, wrong shape: weights length disagrees with in*out.
  const std::string text = R"({
    "format_version": 1,
    "input_dim": 1,
    "layers": [
      {"in": 1, "out": 2, "weights": [1.0], "bias": [0.0, 0.0], "activated": true},
      {"in": 2, "out": 1, "weights": [1.0, 1.0], "bias": [0.0], "activated": false}
    ],
    "metadata": {}
  })";
  CHECK_THROWS_AS(deserialize_network(text), std::runtime_error);
}
