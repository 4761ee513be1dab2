#pragma once

#include <array>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace ptbench {

using Complex = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr double pi = std::numbers::pi;

// Row index of the amplitude tensor: which arm of the interferometer.
enum class Arm : int { Upper = 0, Lower = 1 };

// Column index of the amplitude tensor: circular polarization component.
// Plus/Minus are the sigma+ / sigma- unit vectors (e_h ± i e_v)/sqrt(2).
enum class CircPol : int { Plus = 0, Minus = 1 };

// Classical field state of the bench: a 2x2 complex amplitude tensor.
// amps(n, m) is the amplitude in arm n carrying circular polarization m.
// Polarization and position are carried by one beam, so the tensor is in
// general not a product of an arm vector and a polarization vector.
struct PolPosState {
    Matrix2c amps = Matrix2c::Zero();

    double total_intensity() const { return amps.squaredNorm(); }
    bool finite() const { return amps.allFinite(); }
};

// Linear operator acting on the arm (row) index; polarization untouched.
struct PositionOperator {
    Matrix2c mat = Matrix2c::Identity();
};

// Linear operator acting on the polarization (column) index, written in the
// circular basis; arms untouched.
struct PolarizationOperator {
    Matrix2c mat = Matrix2c::Identity();
};

// Per-detector intensities after the output polarizing splitters.
// w(n, j): arm n in {upper, lower}, linear polarization j in {h, v}.
struct DetectionRecord {
    double w_uh = 0.0;
    double w_uv = 0.0;
    double w_lh = 0.0;
    double w_lv = 0.0;

    double total() const { return w_uh + w_uv + w_lh + w_lv; }
};

// Source state: one unit of sigma+ in the upper arm and one unit of sigma-
// in the lower arm (identity tensor). Total intensity 2, |det| = 1, so the
// state is maximally arm/polarization inseparable.
PolPosState initial_state();

PolPosState apply_position_op(const PolPosState& s, const PositionOperator& op);
PolPosState apply_polarization_op(const PolPosState& s, const PolarizationOperator& op);

// Lossless four-port splitter phase convention used throughout: the matrix
// [[r e^{i th1}, t e^{i th2}], [t e^{i th3}, r e^{i th4}]] is unitary iff
// th2 - th1 + th3 - th4 = pi (mod 2pi). Default phases {-pi/2, 0, 0, -pi/2}.
inline constexpr std::array<double, 4> default_bs_phases{-pi / 2, 0.0, 0.0, -pi / 2};

// Beam splitter with reflectivity amplitude r in [0, 1], t = +sqrt(1 - r^2).
// Throws std::invalid_argument if r is out of range or, when require_lossless
// is set, if the phases violate the unitarity constraint.
PositionOperator beam_splitter(double r,
                               const std::array<double, 4>& phases = default_bs_phases,
                               bool require_lossless = true);

// Half-wave-plate rotation by angle beta: diag(e^{i beta}, e^{-i beta}) in the
// circular basis, i.e. a rotation of the linear-polarization plane by beta.
PolarizationOperator hwp_rotation(double beta);

// Arm exchange (upper <-> lower); its own inverse.
PositionOperator mirror_swap();

// Project each arm onto linear h/v with a polarizing splitter and record the
// four detector intensities: a_h = (c+ + c-)/sqrt(2), a_v = i(c+ - c-)/sqrt(2).
DetectionRecord pbs_intensities(const PolPosState& s);

// Basis change between circular (sigma+, sigma-) and linear (h, v) amplitude
// components. Both directions are unitary and mutually inverse.
Vector2c circular_to_linear(const Vector2c& c);
Vector2c linear_to_circular(const Vector2c& l);
const Matrix2c& circular_to_linear_matrix();

bool is_unitary(const Matrix2c& m, double tol = 1e-12);

} // namespace ptbench
