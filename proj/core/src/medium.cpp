#include "ptbench/medium.hpp"

#include <cmath>
#include <stdexcept>

#include "ptbench/errors.hpp"

namespace ptbench {

namespace {

const Complex I{0.0, 1.0};

double wrap_2pi(double x) {
    double w = x - 2 * pi * std::floor(x / (2 * pi));
    if (w >= 2 * pi) w = 0.0; // floor rounding at the seam
    return w;
}

} // namespace

PTMediumParams::PTMediumParams(double e1, double p1, double e2, double p2)
    : eta1(e1), phi1(wrap_2pi(p1)), eta2(e2), phi2(wrap_2pi(p2)) {
    if (!(std::isfinite(e1) && std::isfinite(p1) && std::isfinite(e2) && std::isfinite(p2)))
        throw std::invalid_argument("PTMediumParams: parameters must be finite");
    if (eta1 < 0.0)
        throw std::invalid_argument("PTMediumParams: eta1 must be >= 0");
    if (eta2 <= 0.0)
        throw std::invalid_argument("PTMediumParams: eta2 must be > 0");
}

bool PTMediumParams::unbroken() const {
    return eta2 > eta1 * std::abs(std::sin(phi1));
}

double DerivedMedium::sin_alpha() const { return std::sin(alpha); }
double DerivedMedium::cos_alpha() const { return std::cos(alpha); }

Matrix2c hamiltonian(const PTMediumParams& p) {
    Matrix2c h;
    h << p.eta1 * std::exp(I * p.phi1), p.eta2 * std::exp(I * p.phi2),
         p.eta2 * std::exp(-I * p.phi2), p.eta1 * std::exp(-I * p.phi1);
    return h;
}

bool is_pt_symmetric(const Matrix2c& m, double tol) {
    Matrix2c sx;
    sx << 0.0, 1.0, 1.0, 0.0;
    const Matrix2c transformed = sx * m.conjugate() * sx;
    return (transformed - m).cwiseAbs().maxCoeff() <= tol;
}

DerivedMedium derive(const PTMediumParams& p) {
    if (!p.unbroken())
        throw BrokenPhaseError("broken PT phase: eta2 <= eta1*|sin(phi1)|");
    DerivedMedium d;
    d.alpha = std::asin(p.eta1 * std::sin(p.phi1) / p.eta2);
    d.length = pi / (2 * p.eta2 * std::cos(d.alpha));
    d.global_phase = -p.eta1 * std::cos(p.phi1) * d.length;
    return d;
}

std::pair<Complex, Complex> spectrum(const PTMediumParams& p) {
    const Matrix2c h = hamiltonian(p);
    const Complex half_tr = 0.5 * (h(0, 0) + h(1, 1));
    const Complex disc = half_tr * half_tr - h.determinant();
    const Complex root = std::sqrt(disc);
    return {half_tr + root, half_tr - root};
}

Matrix2c m_opt_analytic(const PTMediumParams& p) {
    const DerivedMedium d = derive(p);
    const double sa = d.sin_alpha();
    const double ca = d.cos_alpha();
    const Complex scale = std::exp(I * d.global_phase) / ca;
    Matrix2c m;
    m << sa, -I * std::exp(I * p.phi2),
         -I * std::exp(-I * p.phi2), -sa;
    return scale * m;
}

Matrix2c m_opt_numeric(const PTMediumParams& p, double z) {
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::invalid_argument("m_opt_numeric: z must be finite and >= 0");
    return expm(Matrix2c(-I * z * hamiltonian(p)));
}

Matrix2c expm(const Matrix2c& a) {
    // Scale until the infinity norm is small, Taylor-sum, square back up.
    const double norm_inf =
        std::max(std::abs(a(0, 0)) + std::abs(a(0, 1)), std::abs(a(1, 0)) + std::abs(a(1, 1)));
    if (!std::isfinite(norm_inf))
        throw std::invalid_argument("expm: matrix must be finite");
    int squarings = 0;
    double scaled = norm_inf;
    while (scaled > 0.25 && squarings < 64) {
        scaled *= 0.5;
        ++squarings;
    }
    const Matrix2c b = a * std::ldexp(1.0, -squarings);
    Matrix2c result = Matrix2c::Identity();
    Matrix2c term = Matrix2c::Identity();
    for (int k = 1; k <= 32; ++k) {
        term = Matrix2c(term * b) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int i = 0; i < squarings; ++i) result = Matrix2c(result * result);
    return result;
}

} // namespace ptbench
