#include "ptbench/paraxial.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "ptbench/errors.hpp"
#include "ptbench/format.hpp"

namespace ptbench {

namespace {

const Complex I{0.0, 1.0};

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_field(const TransverseField& f, const TransverseGrid& grid, const char* who) {
    if (f.upper.size() != grid.samples || f.lower.size() != grid.samples)
        throw std::invalid_argument(std::string(who) + ": field size does not match the grid");
}

} // namespace

TransverseGrid::TransverseGrid(int samples_, double half_width_)
    : samples(samples_), half_width(half_width_) {
    if (!power_of_two(samples) || samples < 64)
        throw std::invalid_argument("TransverseGrid: samples must be a power of two >= 64");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("TransverseGrid: half_width must be positive and finite");
}

Eigen::VectorXd TransverseGrid::positions() const {
    Eigen::VectorXd xs(samples);
    for (int j = 0; j < samples; ++j) xs[j] = x(j);
    return xs;
}

Eigen::VectorXd TransverseGrid::wavenumbers() const {
    const double dk = pi / half_width;
    Eigen::VectorXd ks(samples);
    for (int j = 0; j < samples; ++j) {
        const int m = j < samples / 2 ? j : j - samples;
        ks[j] = m * dk;
    }
    return ks;
}

TransverseField gaussian_profiles(double x0, double waist, const TransverseGrid& grid) {
    if (!(waist > 0.0) || !std::isfinite(waist) || !std::isfinite(x0) || x0 < 0.0)
        throw std::invalid_argument("gaussian_profiles: need waist > 0 and x0 >= 0");
    if (!(3.0 * (x0 + waist) < grid.half_width))
        throw DomainTooSmallError(
            "gaussian_profiles: domain too small, need 3 (x0 + waist) < half_width");
    TransverseField f;
    f.upper.resize(grid.samples);
    f.lower.resize(grid.samples);
    for (int j = 0; j < grid.samples; ++j) {
        const double xj = grid.x(j);
        f.upper[j] = std::exp(-(xj - x0) * (xj - x0) / (waist * waist));
        f.lower[j] = std::exp(-(xj + x0) * (xj + x0) / (waist * waist));
    }
    f.upper /= std::sqrt(channel_power(f.upper, grid));
    f.lower /= std::sqrt(channel_power(f.lower, grid));
    return f;
}

Complex overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const TransverseGrid& grid) {
    if (a.size() != grid.samples || b.size() != grid.samples)
        throw std::invalid_argument("overlap: field size does not match the grid");
    return a.dot(b) * grid.dx(); // Eigen's dot conjugates the first argument
}

Eigen::VectorXcd parity_reflect(const Eigen::VectorXcd& f) {
    const auto n = f.size();
    Eigen::VectorXcd out(n);
    for (Eigen::Index j = 0; j < n; ++j) out[j] = f[(n - j) % n];
    return out;
}

double beam_width(const Eigen::VectorXcd& f, const TransverseGrid& grid) {
    double power = 0.0;
    double second = 0.0;
    for (int j = 0; j < grid.samples; ++j) {
        const double w = std::norm(f[j]);
        power += w;
        second += w * grid.x(j) * grid.x(j);
    }
    if (!(power > 0.0)) throw ZeroIntensityError("beam_width: field carries no power");
    return 2.0 * std::sqrt(second / power);
}

double channel_power(const Eigen::VectorXcd& f, const TransverseGrid& grid) {
    if (f.size() != grid.samples)
        throw std::invalid_argument("channel_power: field size does not match the grid");
    return f.squaredNorm() * grid.dx();
}

std::pair<double, double> aggregate_channels(const TransverseField& f, const TransverseGrid& grid) {
    check_field(f, grid, "aggregate_channels");
    return {channel_power(f.upper, grid), channel_power(f.lower, grid)};
}

TransverseField split_step_propagate(const TransverseField& f0, const PropagationConfig& cfg,
                                     const TransverseGrid& grid, double z) {
    check_field(f0, grid, "split_step_propagate");
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::invalid_argument("split_step_propagate: z must be finite and >= 0");
    if (!(cfg.dz > 0.0))
        throw std::invalid_argument("split_step_propagate: dz must be > 0");
    if (cfg.include_diffraction && !(cfg.wave_number > 0.0))
        throw std::invalid_argument("split_step_propagate: wave_number must be > 0");
    const bool uniform = cfg.coupling_profile.size() == 0;
    if (!uniform && cfg.coupling_profile.size() != grid.samples)
        throw std::invalid_argument(
            "split_step_propagate: coupling_profile size does not match the grid");
    if (z == 0.0) return f0;

    const int steps = std::max(1, static_cast<int>(std::ceil(z / cfg.dz - 1e-12)));
    const double dz = z / steps;

    // Spectral phase for half a diffraction step: exp(-i kx^2 dz / (4 k)).
    Eigen::VectorXcd half_kick(grid.samples);
    if (cfg.include_diffraction) {
        const Eigen::VectorXd ks = grid.wavenumbers();
        for (int j = 0; j < grid.samples; ++j)
            half_kick[j] = std::exp(-I * (ks[j] * ks[j] * dz / (4.0 * cfg.wave_number)));
    }

    // Pointwise coupling propagator(s) over a full step.
    const Matrix2c gen = hamiltonian(cfg.medium);
    std::vector<Matrix2c> couple;
    if (uniform) {
        couple.push_back(expm(Matrix2c(-I * dz * gen)));
    } else {
        couple.reserve(grid.samples);
        for (int j = 0; j < grid.samples; ++j)
            couple.push_back(expm(Matrix2c(-I * dz * cfg.coupling_profile[j] * gen)));
    }

    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(grid.samples);
    Eigen::VectorXcd eu = f0.upper;
    Eigen::VectorXcd el = f0.lower;
    const auto diffract_half = [&](Eigen::VectorXcd& e) {
        fft.fwd(spec, e);
        spec = spec.cwiseProduct(half_kick);
        fft.inv(e, spec);
    };
    for (int s = 0; s < steps; ++s) {
        if (cfg.include_diffraction) {
            diffract_half(eu);
            diffract_half(el);
        }
        for (int j = 0; j < grid.samples; ++j) {
            const Matrix2c& u = couple[uniform ? 0 : j];
            const Complex a = eu[j];
            const Complex b = el[j];
            eu[j] = u(0, 0) * a + u(0, 1) * b;
            el[j] = u(1, 0) * a + u(1, 1) * b;
        }
        if (cfg.include_diffraction) {
            diffract_half(eu);
            diffract_half(el);
        }
    }
    return {std::move(eu), std::move(el)};
}

MatrixModelReport validate_matrix_model(const ExperimentSettings& settings, PropagationConfig cfg,
                                        const TransverseGrid& grid, double waist) {
    cfg.medium = settings.medium;
    const DerivedMedium derived = derive(settings.medium);

    // Plane-wave side.
    const ProbabilityTable pm = probabilities(run_bench(settings));

    // Resolved-beam side: run the same staging with the medium leg carried by
    // split stepping. Position operators act on the arm pair pointwise.
    Matrix2c pre = Matrix2c::Identity();
    Matrix2c post = Matrix2c::Identity();
    const Matrix2c bs = bs_from_angle(settings.bs_angle, settings.bs_phases).mat;
    if (settings.placement == MediumPlacement::BeforeSplitter) {
        if (settings.use_mirror_swap) post = mirror_swap().mat * post;
        post = bs * post;
    } else {
        pre = bs;
        if (settings.use_mirror_swap) post = mirror_swap().mat * post;
    }

    const Matrix2c entering = pre * initial_state().amps;
    const TransverseField g = gaussian_profiles(0.0, waist, grid);

    std::array<TransverseField, 2> by_pol; // circular components propagate independently
    for (int m = 0; m < 2; ++m) {
        TransverseField f{entering(0, m) * g.upper, entering(1, m) * g.lower};
        f = split_step_propagate(f, cfg, grid, derived.length);
        TransverseField mixed;
        mixed.upper = post(0, 0) * f.upper + post(0, 1) * f.lower;
        mixed.lower = post(1, 0) * f.upper + post(1, 1) * f.lower;
        by_pol[m] = std::move(mixed);
    }
    // Waveplate phases on the circular components, then linear projection.
    const Complex wp = std::exp(I * settings.hwp_angle);
    by_pol[0].upper *= wp;
    by_pol[0].lower *= wp;
    by_pol[1].upper *= std::conj(wp);
    by_pol[1].lower *= std::conj(wp);

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    DetectionRecord rec;
    for (int n = 0; n < 2; ++n) {
        const Eigen::VectorXcd& cp = n == 0 ? by_pol[0].upper : by_pol[0].lower;
        const Eigen::VectorXcd& cm = n == 0 ? by_pol[1].upper : by_pol[1].lower;
        const Eigen::VectorXcd eh = (cp + cm) * inv_sqrt2;
        const Eigen::VectorXcd ev = I * (cp - cm) * inv_sqrt2;
        const double wh = channel_power(eh, grid);
        const double wv = channel_power(ev, grid);
        if (n == 0) {
            rec.w_uh = wh;
            rec.w_uv = wv;
        } else {
            rec.w_lh = wh;
            rec.w_lv = wv;
        }
    }
    const ProbabilityTable pf = probabilities(rec);

    MatrixModelReport report;
    report.p_matrix = {{{pm.p_uh, pm.p_uv}, {pm.p_lh, pm.p_lv}}};
    report.p_field = {{{pf.p_uh, pf.p_uv}, {pf.p_lh, pf.p_lv}}};
    for (int n = 0; n < 2; ++n)
        for (int j = 0; j < 2; ++j)
            report.max_abs_diff =
                std::max(report.max_abs_diff, std::abs(report.p_matrix[n][j] - report.p_field[n][j]));
    report.diffraction_parameter = cfg.wave_number * waist * waist / derived.length;
    return report;
}

void write_field_csv(std::ostream& os, const TransverseField& f, const TransverseGrid& grid) {
    check_field(f, grid, "write_field_csv");
    os << "x,re_upper,im_upper,re_lower,im_lower\n";
    for (int j = 0; j < grid.samples; ++j) {
        os << fmt12(grid.x(j)) << ',' << fmt12(f.upper[j].real()) << ',' << fmt12(f.upper[j].imag())
           << ',' << fmt12(f.lower[j].real()) << ',' << fmt12(f.lower[j].imag()) << '\n';
    }
}

} // namespace ptbench
