#include "ptbench/presets.hpp"

namespace ptbench {

PTMediumParams fig2_preset() { return PTMediumParams{1.91, 0.84 * pi, 36.5, 0.0}; }

std::optional<PTMediumParams> preset_by_name(std::string_view name) {
    if (name == "fig2") return fig2_preset();
    return std::nullopt;
}

std::vector<std::string_view> preset_names() { return {"fig2"}; }

} // namespace ptbench
