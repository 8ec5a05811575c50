#include "euafnet/targets.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace euafnet {

namespace {

const std::vector<TargetFunction>& registry() {
  static const std::vector<TargetFunction> targets = {
      {"const", "constant 0.3", 0.0, 1.0, [](double) { return 0.3; }},
      {"linear", "identity", 0.0, 1.0, [](double x) { return x; }},
      {"abshalf", "|x - 1/2|", 0.0, 1.0,
       [](double x) { return std::abs(x - 0.5); }},
      {"sin2pi", "sin(2 pi x)", 0.0, 1.0,
       [](double x) { return std::sin(2.0 * std::numbers::pi * x); }},
  };
  return targets;
}

std::string joined_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  return out;
}

}  // namespace

const TargetFunction& lookup_target(const std::string& id) {
  for (const TargetFunction& t : registry()) {
    if (t.id == id) return t;
  }
  throw std::invalid_argument("unknown target '" + id +
                              "'; available: " + joined_ids(target_ids()));
}

std::vector<std::string> target_ids() {
  std::vector<std::string> ids;
  for (const TargetFunction& t : registry()) ids.push_back(t.id);
  return ids;
}

SyntheticKstTriple builtin_triple(const std::string& id) {
  if (id == "d1") {
    SyntheticKstTriple t;
    t.id = "d1";
    t.g = [](double z) { return z; };
    t.h = {[](double x) { return x; }, [](double x) { return x; },
           [](double x) { return x; }};
    t.lambda = {1.0};
    return t;
  }
  if (id == "d2") {
    SyntheticKstTriple t;
    t.id = "d2";
    t.g = [](double z) { return z * z; };
    for (int i = 1; i <= 5; ++i) {
      t.h.push_back(
          [e = 1.0 + i / 6.0](double x) { return std::pow(x, e); });
    }
    t.lambda = {0.5, 0.5};
    return t;
  }
  throw std::invalid_argument("unknown triple '" + id +
                              "'; available: " + joined_ids(triple_ids()));
}

std::vector<std::string> triple_ids() { return {"d1", "d2"}; }

ExampleFamily builtin_family(int dims) {
  std::vector<double> c(dims, 1.0);
  std::vector<ScalarFn> h(dims,
                          [](double x) { return 2.0 * std::abs(x); });
  return make_example_family(dims, std::move(c), std::move(h));
}

}  // namespace euafnet
