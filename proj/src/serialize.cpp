#include "euafnet/serialize.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace euafnet {

namespace {

using nlohmann::json;

const json& require_field(const json& obj, const char* key,
                          const std::string& path) {
  if (!obj.is_object()) {
    throw std::runtime_error("network parse error: expected object at " +
                             (path.empty() ? std::string("document root")
                                           : path));
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::runtime_error("network parse error: missing field '" + path +
                             key + "'");
  }
  return *it;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw std::runtime_error("network parse error: field '" + path +
                             "' is not a number");
  }
  return v.get<double>();
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) {
    throw std::runtime_error("network parse error: field '" + path +
                             "' is not an integer");
  }
  return v.get<int>();
}

std::vector<double> number_array_at(const json& v, const std::string& path) {
  if (!v.is_array()) {
    throw std::runtime_error("network parse error: field '" + path +
                             "' is not an array");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(number_at(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

std::string serialize_network(const FeedforwardNetwork& net) {
  json doc;
  doc["format_version"] = 1;
  doc["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const AffineLayer& L : net.layers()) {
    json jl;
    jl["in"] = L.in;
    jl["out"] = L.out;
    jl["weights"] = L.weights;
    jl["bias"] = L.bias;
    jl["activated"] = L.activated;
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);
  doc["metadata"] = net.metadata();
  return doc.dump(2);
}

FeedforwardNetwork deserialize_network(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("network parse error: ") + e.what());
  }

  const int version = int_at(require_field(doc, "format_version", ""),
                             "format_version");
  if (version != 1) {
    throw std::runtime_error("network parse error: unsupported format_version " +
                             std::to_string(version));
  }
  const int input_dim = int_at(require_field(doc, "input_dim", ""),
                               "input_dim");
  const json& jlayers = require_field(doc, "layers", "");
  if (!jlayers.is_array() || jlayers.empty()) {
    throw std::runtime_error(
        "network parse error: field 'layers' must be a non-empty array");
  }

  std::vector<AffineLayer> layers;
  layers.reserve(jlayers.size());
  for (std::size_t i = 0; i < jlayers.size(); ++i) {
    const std::string path = "layers[" + std::to_string(i) + "].";
    const json& jl = jlayers[i];
    AffineLayer L;
    L.in = int_at(require_field(jl, "in", path), path + "in");
    L.out = int_at(require_field(jl, "out", path), path + "out");
    L.weights = number_array_at(require_field(jl, "weights", path),
                                path + "weights");
    L.bias = number_array_at(require_field(jl, "bias", path), path + "bias");
    const json& act = require_field(jl, "activated", path);
    if (!act.is_boolean()) {
      throw std::runtime_error("network parse error: field '" + path +
                               "activated' is not a boolean");
    }
    L.activated = act.get<bool>();
    if (L.weights.size() != static_cast<std::size_t>(L.in) * L.out) {
      throw std::runtime_error("network parse error: field '" + path +
                               "weights' has wrong length");
    }
    if (L.bias.size() != static_cast<std::size_t>(L.out)) {
      throw std::runtime_error("network parse error: field '" + path +
                               "bias' has wrong length");
    }
    layers.push_back(std::move(L));
  }

  std::map<std::string, std::string> metadata;
  const json& jmeta = require_field(doc, "metadata", "");
  if (!jmeta.is_object()) {
    throw std::runtime_error(
        "network parse error: field 'metadata' is not an object");
  }
  for (auto it = jmeta.begin(); it != jmeta.end(); ++it) {
    if (!it.value().is_string()) {
      throw std::runtime_error("network parse error: field 'metadata." +
                               it.key() + "' is not a string");
    }
    metadata[it.key()] = it.value().get<std::string>();
  }

  try {
    return FeedforwardNetwork(input_dim, std::move(layers),
                              std::move(metadata));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("network parse error: ") + e.what());
  }
}

void save_network(const FeedforwardNetwork& net, std::ostream& os) {
  os << serialize_network(net) << '\n';
}

FeedforwardNetwork load_network(std::istream& is) {
  std::ostringstream buf;
  buf << is.rdbuf();
  return deserialize_network(buf.str());
}

}  // namespace euafnet
