#pragma once

#include <array>
#include <utility>

#include "ptbench/medium.hpp"
#include "ptbench/state.hpp"

namespace ptbench {

// Where the medium loop sits relative to the splitter that mixes the arms.
// AfterSplitter is the canonical layout; BeforeSplitter is the control layout
// in which the remote splitter choice provably cannot move the polarization
// marginals.
enum class MediumPlacement { AfterSplitter, BeforeSplitter };

struct ExperimentSettings {
    // Splitter mixing angle: r = sin(angle), t = cos(angle). Angles in
    // [0, pi) cover every splitter including negative transmission (the sign
    // is a pi phase, so the splitter stays lossless for every angle).
    double bs_angle = pi / 4;
    std::array<double, 4> bs_phases = default_bs_phases;
    double hwp_angle = 0.0;
    PTMediumParams medium{};
    MediumPlacement placement = MediumPlacement::AfterSplitter;
    bool use_mirror_swap = true;

    double reflectivity() const { return std::sin(bs_angle); }
    double transmissivity() const { return std::cos(bs_angle); }
};

// Normalized detection statistics. p_* are the four joint probabilities
// P(arm, linear pol); pa_* marginalize over arms, pb_* over polarization.
struct ProbabilityTable {
    double p_uh = 0, p_uv = 0, p_lh = 0, p_lv = 0;
    double pa_h = 0, pa_v = 0;
    double pb_u = 0, pb_l = 0;
};

// Splitter from the mixing angle (see ExperimentSettings::bs_angle).
PositionOperator bs_from_angle(double bs_angle,
                               const std::array<double, 4>& phases = default_bs_phases);

// Full bench run: source -> [medium, swap if BeforeSplitter] -> splitter ->
// [medium, swap if AfterSplitter] -> waveplate -> polarizing splitters.
// The overload with an explicit input exists so scale/gauge invariances can be
// exercised; the canonical run starts from initial_state().
DetectionRecord run_bench(const ExperimentSettings& s);
DetectionRecord run_bench(const ExperimentSettings& s, const PolPosState& input);

// Normalizes a detection record; throws ZeroIntensityError on zero total.
ProbabilityTable probabilities(const DetectionRecord& rec);

// Closed-form polarization marginals {P_A(h), P_A(v)} for the canonical
// layout (medium after the splitter, default phases, swap on):
//   P_A(h) = 1/2 - s [r^2 sin(2b - phi2) - t^2 sin(2b + phi2)] / (1 + s^2),
// with s = sin(alpha), b the waveplate angle. Used as an independent check of
// the stepwise pipeline, never inside it.
std::pair<double, double> p_single_closed_form(const ExperimentSettings& s);

// |P_A(h; phi_a) - P_A(h; phi_b)| at fixed waveplate angle beta: how far the
// local polarization marginal moves when the remote splitter angle changes.
double signaling_delta(const PTMediumParams& medium, double beta, double phi_a, double phi_b,
                       MediumPlacement placement = MediumPlacement::AfterSplitter);

// Correlator C = P(u,h) + P(l,v) - P(u,v) - P(l,h) at splitter angle phi and
// waveplate angle beta.
double chsh_C(const PTMediumParams& medium, double phi, double beta);

// Bell combination S = |C(p1,b1) + C(p1,b2) + C(p2,b1) - C(p2,b2)|.
double chsh_S(const PTMediumParams& medium, double phi_1, double beta_1, double phi_2,
              double beta_2);

struct ChshSearchResult {
    double s_max = 0.0;
    std::array<double, 4> settings{}; // phi_1, beta_1, phi_2, beta_2 in [0, pi)
};

// Global maximum of |S| over the four settings: dense grid over [0, pi)^4
// (strict improvement while scanning in lexicographic order, so the lowest
// grid index wins ties) followed by coordinate refinement.
ChshSearchResult max_chsh(const PTMediumParams& medium, int grid_resolution = 50);

struct ViolationSearchResult {
    double delta_max = 0.0;
    double beta = 0.0, phi_a = 0.0, phi_b = 0.0;
};

// Global maximum of signaling_delta over (beta, phi_a, phi_b), same grid +
// refinement scheme as max_chsh.
ViolationSearchResult max_violation(const PTMediumParams& medium, int grid_resolution = 50,
                                    MediumPlacement placement = MediumPlacement::AfterSplitter);

// Settings-independent envelope of |S|: 2 cos^2(alpha) / (1 + sin^2(alpha)).
double chsh_bound(const PTMediumParams& medium);

} // namespace ptbench
