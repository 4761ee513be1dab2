#pragma once

#include <array>
#include <iosfwd>
#include <utility>

#include <Eigen/Dense>

#include "ptbench/pipeline.hpp"

namespace ptbench {

// Uniform periodic grid over [-half_width, half_width); the sample count must
// be a power of two (>= 64) so the spectral steps stay exact and cheap.
struct TransverseGrid {
    int samples = 0;
    double half_width = 0.0;

    TransverseGrid(int samples, double half_width);

    double dx() const { return 2.0 * half_width / samples; }
    double x(int j) const { return -half_width + j * dx(); }
    Eigen::VectorXd positions() const;
    // Spatial frequencies in FFT order (non-negative first, then negative).
    Eigen::VectorXd wavenumbers() const;
};

// One scalar transverse field per arm of the medium.
struct TransverseField {
    Eigen::VectorXcd upper;
    Eigen::VectorXcd lower;
};

struct PropagationConfig {
    double wave_number = 0.0; // k in the paraxial term -(1/2k) d2/dx2
    double dz = 0.0;          // step-size upper bound, > 0
    PTMediumParams medium{};
    bool include_diffraction = true;
    // Optional transverse envelope multiplying the channel-coupling generator
    // (one sample per grid point; empty = uniform). With a uniform medium the
    // diffraction and coupling steps commute and the splitting is exact; a
    // non-constant envelope restores the usual O(dz^2) splitting error.
    Eigen::VectorXd coupling_profile;
};

// Normalized Gaussian exp(-(x -+ x0)^2 / w^2) per arm (upper at +x0, lower at
// -x0). Requires w > 0 and 3 (x0 + w) < half_width so the beams sit well
// inside the periodic window; throws DomainTooSmallError otherwise.
TransverseField gaussian_profiles(double x0, double waist, const TransverseGrid& grid);

// L2 inner product <a, b> = sum conj(a_j) b_j dx.
Complex overlap(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, const TransverseGrid& grid);

// Sample map x -> -x on the periodic grid.
Eigen::VectorXcd parity_reflect(const Eigen::VectorXcd& f);

// Intensity-weighted width 2 sqrt(<x^2>) about x = 0; equals w for a centered
// Gaussian exp(-x^2/w^2).
double beam_width(const Eigen::VectorXcd& f, const TransverseGrid& grid);

double channel_power(const Eigen::VectorXcd& f, const TransverseGrid& grid);
// (upper power, lower power).
std::pair<double, double> aggregate_channels(const TransverseField& f, const TransverseGrid& grid);

// Strang split stepping over distance z: half-step spectral diffraction,
// full-step pointwise channel coupling, half-step diffraction. The step count
// is ceil(z / dz), so dz is an upper bound on the actual step.
TransverseField split_step_propagate(const TransverseField& f, const PropagationConfig& cfg,
                                     const TransverseGrid& grid, double z);

// Joint-detection comparison between the plane-wave matrix model and the
// resolved-beam propagation of the same bench layout. Both arms carry one
// co-located Gaussian of the given waist through the medium stage; everything
// else follows `settings`. cfg.medium is overridden by settings.medium so the
// two sides always describe the same medium.
struct MatrixModelReport {
    std::array<std::array<double, 2>, 2> p_matrix{}; // [arm][linear pol]
    std::array<std::array<double, 2>, 2> p_field{};
    double max_abs_diff = 0.0;
    double diffraction_parameter = 0.0; // k w^2 / medium length
};
MatrixModelReport validate_matrix_model(const ExperimentSettings& settings, PropagationConfig cfg,
                                        const TransverseGrid& grid, double waist);

// CSV snapshot: x, re/im of both arms, one sample per row.
void write_field_csv(std::ostream& os, const TransverseField& f, const TransverseGrid& grid);

} // namespace ptbench
