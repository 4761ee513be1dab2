#pragma once

#include <utility>

#include "ptbench/state.hpp"

namespace ptbench {

// Coupled-channel gain/loss medium. The channel-space generator is
//   H = [[eta1 e^{i phi1}, eta2 e^{i phi2}],
//        [eta2 e^{-i phi2}, eta1 e^{-i phi1}]],
// PT symmetric by construction (parity = channel swap, T = conjugation).
// eta1 >= 0 scales the on-site gain/loss, eta2 > 0 the cross coupling; phases
// are wrapped into [0, 2pi).
struct PTMediumParams {
    double eta1 = 0.0;
    double phi1 = 0.0;
    double eta2 = 1.0;
    double phi2 = 0.0;

    PTMediumParams() = default;
    PTMediumParams(double eta1, double phi1, double eta2, double phi2);

    // Real-spectrum (unbroken) phase: eta2 > eta1 |sin phi1|.
    bool unbroken() const;
};

// Quantities fixed once the medium is in the unbroken phase.
struct DerivedMedium {
    double alpha = 0.0;        // asin(eta1 sin(phi1) / eta2), in (-pi/2, pi/2)
    double length = 0.0;       // pi / (2 eta2 cos alpha): full-conversion length
    double global_phase = 0.0; // -eta1 cos(phi1) * length

    double sin_alpha() const;
    double cos_alpha() const;
};

Matrix2c hamiltonian(const PTMediumParams& p);

// True when swapping channels and conjugating leaves m invariant.
bool is_pt_symmetric(const Matrix2c& m, double tol = 1e-12);

// Throws BrokenPhaseError outside the unbroken phase (including the boundary).
DerivedMedium derive(const PTMediumParams& p);

// Eigenvalues of the generator, largest-trace-half first. Real in the unbroken
// phase (eta1 cos phi1 ± eta2 cos alpha), a conjugate pair in the broken phase.
std::pair<Complex, Complex> spectrum(const PTMediumParams& p);

// Transfer matrix over one conversion length, in closed form:
//   (e^{i gp} / cos alpha) [[sin alpha, -i e^{i phi2}], [-i e^{-i phi2}, -sin alpha]].
// Throws BrokenPhaseError when the conversion length is undefined.
Matrix2c m_opt_analytic(const PTMediumParams& p);

// Transfer matrix over distance z >= 0 by direct exponentiation exp(-i H z).
// Valid in both phases; agrees with m_opt_analytic at z = length.
Matrix2c m_opt_numeric(const PTMediumParams& p, double z);

// Matrix exponential of a 2x2 complex matrix (scaling and squaring + Taylor).
Matrix2c expm(const Matrix2c& a);

} // namespace ptbench
