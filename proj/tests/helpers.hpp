#pragma once

#include <cmath>
#include <random>

#include "ptbench/medium.hpp"

namespace testutil {

inline double max_abs_diff(const ptbench::Matrix2c& a, const ptbench::Matrix2c& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Medium strictly inside the unbroken phase, with |sin alpha| in [0.05, 0.9]
// so derived quantities stay well conditioned.
inline ptbench::PTMediumParams random_unbroken(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double eta1 = 0.1 + 2.9 * u01(rng);
    double phi1 = (0.05 + 0.9 * u01(rng)) * ptbench::pi; // |sin phi1| >= 0.156
    if (u01(rng) < 0.5) phi1 += ptbench::pi;             // negative-sin branch
    const double target = 0.05 + 0.85 * u01(rng);
    const double sin_phi1 = std::sin(phi1);
    const double signed_target = sin_phi1 > 0 ? target : -target;
    const double eta2 = eta1 * sin_phi1 / signed_target; // > 0 by construction
    const double phi2 = 2 * ptbench::pi * u01(rng);
    return ptbench::PTMediumParams(eta1, phi1, eta2, phi2);
}

// Medium strictly inside the broken phase (eta2 well below eta1 |sin phi1|).
inline ptbench::PTMediumParams random_broken(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double eta1 = 1.0 + 2.0 * u01(rng);
    const double phi1 = (0.15 + 0.7 * u01(rng)) * ptbench::pi;
    const double eta2 = eta1 * std::abs(std::sin(phi1)) * (0.2 + 0.6 * u01(rng));
    const double phi2 = 2 * ptbench::pi * u01(rng);
    return ptbench::PTMediumParams(eta1, phi1, eta2, phi2);
}

// Medium with sin(alpha) = s exactly: eta1 = s, phi1 = pi/2, eta2 = 1.
inline ptbench::PTMediumParams medium_with_sinalpha(double s, double phi2 = 0.0) {
    return ptbench::PTMediumParams(s, ptbench::pi / 2, 1.0, phi2);
}

} // namespace testutil
