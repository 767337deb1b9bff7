#pragma once

// Insertion-order-preserving JSON is used everywhere: run artifacts must be
// byte-deterministic and LocalMemory maps are ordered.
#include <json.hpp>

namespace dagmt {
using Json = nlohmann::ordered_json;
}
