#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ptbench {

using ObjectiveFn = std::function<double(std::span<const double>)>;

struct RefineOptions {
    double initial_step = 0.1;
    double min_step = 1e-8;
    int max_sweeps = 400;
};

// Compass-style coordinate refinement of a maximum: sweep the coordinates,
// move to the better of x_i +/- step when it improves, and halve the step
// after a sweep with no improvement. Deterministic for a deterministic f.
// On return x holds the refined argmax; the refined maximum is returned.
double refine_maximize(const ObjectiveFn& f, std::vector<double>& x, const RefineOptions& opts);

} // namespace ptbench
