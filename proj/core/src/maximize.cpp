#include "ptbench/maximize.hpp"

#include <stdexcept>

namespace ptbench {

double refine_maximize(const ObjectiveFn& f, std::vector<double>& x, const RefineOptions& opts) {
    if (x.empty()) throw std::invalid_argument("refine_maximize: empty start point");
    if (!(opts.initial_step > 0.0) || !(opts.min_step > 0.0))
        throw std::invalid_argument("refine_maximize: steps must be positive");
    double best = f(x);
    double step = opts.initial_step;
    for (int sweep = 0; sweep < opts.max_sweeps && step >= opts.min_step; ++sweep) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            double cand_val = best;
            double cand_xi = xi;
            for (const double trial : {xi + step, xi - step}) {
                x[i] = trial;
                const double v = f(x);
                if (v > cand_val) {
                    cand_val = v;
                    cand_xi = trial;
                }
            }
            x[i] = cand_xi;
            if (cand_val > best) {
                best = cand_val;
                improved = true;
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

} // namespace ptbench
