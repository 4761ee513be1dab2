#include "ptbench/state.hpp"

#include <cmath>
#include <stdexcept>

namespace ptbench {

namespace {
const Complex I{0.0, 1.0};
} // namespace

PolPosState initial_state() {
    PolPosState s;
    s.amps = Matrix2c::Identity();
    return s;
}

PolPosState apply_position_op(const PolPosState& s, const PositionOperator& op) {
    PolPosState out;
    out.amps = op.mat * s.amps;
    return out;
}

PolPosState apply_polarization_op(const PolPosState& s, const PolarizationOperator& op) {
    // Columns hold the polarization index, so the operator multiplies from the
    // right, transposed: amps'(n, m) = sum_k op(m, k) amps(n, k).
    PolPosState out;
    out.amps = s.amps * op.mat.transpose();
    return out;
}

PositionOperator beam_splitter(double r, const std::array<double, 4>& phases,
                               bool require_lossless) {
    if (!(r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("beam_splitter: reflectivity must lie in [0, 1]");
    if (require_lossless) {
        // th2 - th1 + th3 - th4 == pi (mod 2pi)
        const double defect =
            std::remainder(phases[1] - phases[0] + phases[2] - phases[3] - pi, 2 * pi);
        if (std::abs(defect) > 1e-9)
            throw std::invalid_argument(
                "beam_splitter: phases violate the lossless constraint "
                "th2 - th1 + th3 - th4 = pi (mod 2pi)");
    }
    const double t = std::sqrt(std::max(0.0, 1.0 - r * r));
    PositionOperator op;
    op.mat << r * std::exp(I * phases[0]), t * std::exp(I * phases[1]),
              t * std::exp(I * phases[2]), r * std::exp(I * phases[3]);
    return op;
}

PolarizationOperator hwp_rotation(double beta) {
    PolarizationOperator op;
    op.mat << std::exp(I * beta), 0.0,
              0.0, std::exp(-I * beta);
    return op;
}

PositionOperator mirror_swap() {
    PositionOperator op;
    op.mat << 0.0, 1.0,
              1.0, 0.0;
    return op;
}

DetectionRecord pbs_intensities(const PolPosState& s) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    DetectionRecord rec;
    for (int n = 0; n < 2; ++n) {
        const Complex cp = s.amps(n, 0);
        const Complex cm = s.amps(n, 1);
        const Complex ah = (cp + cm) * inv_sqrt2;
        const Complex av = I * (cp - cm) * inv_sqrt2;
        if (n == 0) {
            rec.w_uh = std::norm(ah);
            rec.w_uv = std::norm(av);
        } else {
            rec.w_lh = std::norm(ah);
            rec.w_lv = std::norm(av);
        }
    }
    return rec;
}

const Matrix2c& circular_to_linear_matrix() {
    // Rows are (h, v), columns are (sigma+, sigma-); unitary.
    static const Matrix2c U = [] {
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        Matrix2c m;
        m << inv_sqrt2, inv_sqrt2,
             I * inv_sqrt2, -I * inv_sqrt2;
        return m;
    }();
    return U;
}

Vector2c circular_to_linear(const Vector2c& c) { return circular_to_linear_matrix() * c; }

Vector2c linear_to_circular(const Vector2c& l) {
    return circular_to_linear_matrix().adjoint() * l;
}

bool is_unitary(const Matrix2c& m, double tol) {
    return (m.adjoint() * m - Matrix2c::Identity()).cwiseAbs().maxCoeff() <= tol;
}

} // namespace ptbench
