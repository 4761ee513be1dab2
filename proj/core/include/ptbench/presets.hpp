#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "ptbench/medium.hpp"

namespace ptbench {

// Reference constants of the four-wave-mixing realization of the medium
// (gain/loss 1.91, on-site phase 0.84 pi, coupling 36.5, coupling phase 0);
// deep in the unbroken phase with sin(alpha) ~ 0.0252.
PTMediumParams fig2_preset();

std::optional<PTMediumParams> preset_by_name(std::string_view name);
std::vector<std::string_view> preset_names();

} // namespace ptbench
