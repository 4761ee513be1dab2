#include "ptbench/pipeline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ptbench/errors.hpp"
#include "ptbench/maximize.hpp"
#include "ptbench/parallel.hpp"

namespace ptbench {

namespace {

const Complex I{0.0, 1.0};

double wrap_pi(double x) {
    double w = x - pi * std::floor(x / pi);
    if (w >= pi) w = 0.0;
    return w;
}

void check_finite_settings(const ExperimentSettings& s) {
    if (!std::isfinite(s.bs_angle) || !std::isfinite(s.hwp_angle))
        throw std::invalid_argument("run_bench: angles must be finite");
    for (const double th : s.bs_phases)
        if (!std::isfinite(th))
            throw std::invalid_argument("run_bench: splitter phases must be finite");
}

} // namespace

PositionOperator bs_from_angle(double bs_angle, const std::array<double, 4>& phases) {
    const double r = std::sin(bs_angle);
    const double t = std::cos(bs_angle);
    PositionOperator op;
    op.mat << r * std::exp(I * phases[0]), t * std::exp(I * phases[1]),
              t * std::exp(I * phases[2]), r * std::exp(I * phases[3]);
    return op;
}

DetectionRecord run_bench(const ExperimentSettings& s) {
    return run_bench(s, initial_state());
}

DetectionRecord run_bench(const ExperimentSettings& s, const PolPosState& input) {
    check_finite_settings(s);
    if (!input.finite())
        throw std::invalid_argument("run_bench: input state must be finite");

    const PositionOperator splitter = bs_from_angle(s.bs_angle, s.bs_phases);
    const PositionOperator medium_op{m_opt_analytic(s.medium)};

    PolPosState st = input;
    if (s.placement == MediumPlacement::BeforeSplitter) {
        st = apply_position_op(st, medium_op);
        if (s.use_mirror_swap) st = apply_position_op(st, mirror_swap());
        st = apply_position_op(st, splitter);
    } else {
        st = apply_position_op(st, splitter);
        st = apply_position_op(st, medium_op);
        if (s.use_mirror_swap) st = apply_position_op(st, mirror_swap());
    }
    st = apply_polarization_op(st, hwp_rotation(s.hwp_angle));
    return pbs_intensities(st);
}

ProbabilityTable probabilities(const DetectionRecord& rec) {
    const double tot = rec.total();
    if (!(tot > 0.0) || !std::isfinite(tot))
        throw ZeroIntensityError("probabilities: total detected intensity is zero");
    ProbabilityTable t;
    t.p_uh = rec.w_uh / tot;
    t.p_uv = rec.w_uv / tot;
    t.p_lh = rec.w_lh / tot;
    t.p_lv = rec.w_lv / tot;
    t.pa_h = t.p_uh + t.p_lh;
    t.pa_v = t.p_uv + t.p_lv;
    t.pb_u = t.p_uh + t.p_uv;
    t.pb_l = t.p_lh + t.p_lv;
    return t;
}

std::pair<double, double> p_single_closed_form(const ExperimentSettings& s) {
    const DerivedMedium d = derive(s.medium);
    const double sa = d.sin_alpha();
    const double r = s.reflectivity();
    const double t = s.transmissivity();
    const double b2 = 2 * s.hwp_angle;
    const double p2 = s.medium.phi2;
    const double ph =
        0.5 - sa * (r * r * std::sin(b2 - p2) - t * t * std::sin(b2 + p2)) / (1.0 + sa * sa);
    return {ph, 1.0 - ph};
}

double signaling_delta(const PTMediumParams& medium, double beta, double phi_a, double phi_b,
                       MediumPlacement placement) {
    ExperimentSettings s;
    s.medium = medium;
    s.hwp_angle = beta;
    s.placement = placement;
    s.bs_angle = phi_a;
    const ProbabilityTable pa = probabilities(run_bench(s));
    s.bs_angle = phi_b;
    const ProbabilityTable pb = probabilities(run_bench(s));
    return std::abs(pa.pa_h - pb.pa_h);
}

double chsh_C(const PTMediumParams& medium, double phi, double beta) {
    ExperimentSettings s;
    s.medium = medium;
    s.bs_angle = phi;
    s.hwp_angle = beta;
    const ProbabilityTable p = probabilities(run_bench(s));
    return p.p_uh + p.p_lv - p.p_uv - p.p_lh;
}

double chsh_S(const PTMediumParams& medium, double phi_1, double beta_1, double phi_2,
              double beta_2) {
    return std::abs(chsh_C(medium, phi_1, beta_1) + chsh_C(medium, phi_1, beta_2) +
                    chsh_C(medium, phi_2, beta_1) - chsh_C(medium, phi_2, beta_2));
}

ChshSearchResult max_chsh(const PTMediumParams& medium, int grid_resolution) {
    if (grid_resolution < 2)
        throw std::invalid_argument("max_chsh: grid resolution must be >= 2");
    const int n = grid_resolution;
    const double h = pi / n;

    // S only ever reads C at grid pairs, so tabulate C once: n^2 bench runs
    // instead of 4 n^4.
    std::vector<double> c(static_cast<std::size_t>(n) * n);
    parallel_for(c.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const int i = static_cast<int>(idx) / n;
            const int j = static_cast<int>(idx) % n;
            c[idx] = chsh_C(medium, i * h, j * h);
        }
    });
    const auto C = [&](int i, int j) -> double { return c[static_cast<std::size_t>(i) * n + j]; };

    // Exhaustive scan of the four settings, parallel over the leading index.
    // Each slice keeps its own lexicographically-first best; the ordered merge
    // below reproduces the serial strict-improvement scan exactly.
    std::vector<double> slice_best(n, -std::numeric_limits<double>::infinity());
    std::vector<std::array<int, 4>> slice_arg(n);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i1 = begin; i1 < end; ++i1) {
            double best = -std::numeric_limits<double>::infinity();
            std::array<int, 4> arg{};
            for (int j1 = 0; j1 < n; ++j1)
                for (int i2 = 0; i2 < n; ++i2)
                    for (int j2 = 0; j2 < n; ++j2) {
                        const double s = std::abs(C(static_cast<int>(i1), j1) +
                                                  C(static_cast<int>(i1), j2) +
                                                  C(i2, j1) - C(i2, j2));
                        if (s > best) {
                            best = s;
                            arg = {static_cast<int>(i1), j1, i2, j2};
                        }
                    }
            slice_best[i1] = best;
            slice_arg[i1] = arg;
        }
    });
    double best = -std::numeric_limits<double>::infinity();
    std::array<int, 4> arg{};
    for (int i1 = 0; i1 < n; ++i1)
        if (slice_best[i1] > best) {
            best = slice_best[i1];
            arg = slice_arg[i1];
        }

    std::vector<double> x{arg[0] * h, arg[1] * h, arg[2] * h, arg[3] * h};
    const ObjectiveFn objective = [&](std::span<const double> v) {
        return chsh_S(medium, v[0], v[1], v[2], v[3]);
    };
    RefineOptions opts;
    opts.initial_step = h / 2;
    const double refined = refine_maximize(objective, x, opts);

    ChshSearchResult res;
    res.s_max = refined;
    for (int k = 0; k < 4; ++k) res.settings[k] = wrap_pi(x[k]); // S is pi-periodic per setting
    return res;
}

ViolationSearchResult max_violation(const PTMediumParams& medium, int grid_resolution,
                                    MediumPlacement placement) {
    if (grid_resolution < 2)
        throw std::invalid_argument("max_violation: grid resolution must be >= 2");
    const int n = grid_resolution;
    const double h = pi / n;

    // Tabulate the marginal P_A(h) over (splitter angle, waveplate angle):
    // the delta for any (beta, phi_a, phi_b) is a difference of two entries.
    std::vector<double> pa(static_cast<std::size_t>(n) * n);
    parallel_for(pa.size(), [&](std::size_t begin, std::size_t end) {
        ExperimentSettings s;
        s.medium = medium;
        s.placement = placement;
        for (std::size_t idx = begin; idx < end; ++idx) {
            const int i = static_cast<int>(idx) / n; // splitter index
            const int j = static_cast<int>(idx) % n; // waveplate index
            s.bs_angle = i * h;
            s.hwp_angle = j * h;
            pa[idx] = probabilities(run_bench(s)).pa_h;
        }
    });
    const auto PA = [&](int i, int j) -> double { return pa[static_cast<std::size_t>(i) * n + j]; };

    double best = -1.0;
    std::array<int, 3> arg{}; // beta, phi_a, phi_b
    for (int j = 0; j < n; ++j)
        for (int ia = 0; ia < n; ++ia)
            for (int ib = 0; ib < n; ++ib) {
                const double delta = std::abs(PA(ia, j) - PA(ib, j));
                if (delta > best) {
                    best = delta;
                    arg = {j, ia, ib};
                }
            }

    std::vector<double> x{arg[0] * h, arg[1] * h, arg[2] * h};
    const ObjectiveFn objective = [&](std::span<const double> v) {
        return signaling_delta(medium, v[0], v[1], v[2], placement);
    };
    RefineOptions opts;
    opts.initial_step = h / 2;
    const double refined = refine_maximize(objective, x, opts);

    ViolationSearchResult res;
    res.delta_max = refined;
    res.beta = wrap_pi(x[0]);
    res.phi_a = wrap_pi(x[1]);
    res.phi_b = wrap_pi(x[2]);
    return res;
}

double chsh_bound(const PTMediumParams& medium) {
    const DerivedMedium d = derive(medium);
    const double s = d.sin_alpha();
    const double c = d.cos_alpha();
    return 2.0 * c * c / (1.0 + s * s);
}

} // namespace ptbench
