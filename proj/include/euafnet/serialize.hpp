#pragma once

#include <iosfwd>
#include <string>

#include "euafnet/network.hpp"

namespace euafnet {

// JSON serialization for networks.  Doubles survive a round trip bitwise
// (shortest-representation printing, exact parsing).  Output key order is
// deterministic, so equal networks serialize to byte-identical text.
std::string serialize_network(const FeedforwardNetwork& net);

// Parses a network produced by serialize_network.  Malformed documents raise
// std::runtime_error whose message names the missing or ill-typed field,
// e.g. "layers[2].bias".
FeedforwardNetwork deserialize_network(const std::string& text);

void save_network(const FeedforwardNetwork& net, std::ostream& os);
FeedforwardNetwork load_network(std::istream& is);

}  // namespace euafnet
