#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "conics/conic.hpp"

namespace conics {

// Bundled example inputs, reachable from the CLI as --fixture <name>.
struct NamedPair {
    Conic c1, c2;
};

// Known names: "paper-4.1" (four distinct real intersection points) and
// "paper-4.2" (tangent at one point, plus a conjugate pair).
std::optional<NamedPair> fixture_pair(std::string_view name);

std::vector<std::string_view> fixture_names();

}  // namespace conics
