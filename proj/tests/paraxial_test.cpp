#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "ptbench/errors.hpp"
#include "ptbench/medium.hpp"
#include "ptbench/paraxial.hpp"

#include "helpers.hpp"

using namespace ptbench;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using testutil::medium_with_sinalpha;

namespace {

double max_field_diff(const TransverseField& a, const TransverseField& b) {
    const double du = (a.upper - b.upper).cwiseAbs().maxCoeff();
    const double dl = (a.lower - b.lower).cwiseAbs().maxCoeff();
    return std::max(du, dl);
}

// Pointwise 2x2 channel mix, the plane-wave limit of the medium stage.
TransverseField apply_matrix(const Matrix2c& m, const TransverseField& f) {
    TransverseField out;
    out.upper = m(0, 0) * f.upper + m(0, 1) * f.lower;
    out.lower = m(1, 0) * f.upper + m(1, 1) * f.lower;
    return out;
}

} // namespace

TEST_CASE("transverse grid") {
    SECTION("rejects bad shapes") {
        REQUIRE_THROWS_AS(TransverseGrid(100, 16.0), std::invalid_argument);
        REQUIRE_THROWS_AS(TransverseGrid(32, 16.0), std::invalid_argument);
        REQUIRE_THROWS_AS(TransverseGrid(256, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(TransverseGrid(256, -4.0), std::invalid_argument);
    }
    SECTION("positions span the half-open window") {
        const TransverseGrid grid(128, 8.0);
        REQUIRE_THAT(grid.dx(), WithinAbs(0.125, 1e-15));
        const Eigen::VectorXd x = grid.positions();
        REQUIRE(x.size() == 128);
        REQUIRE_THAT(x(0), WithinAbs(-8.0, 1e-15));
        REQUIRE_THAT(x(127), WithinAbs(8.0 - 0.125, 1e-12));
    }
    SECTION("wavenumbers come in FFT order") {
        const TransverseGrid grid(64, 8.0);
        const Eigen::VectorXd k = grid.wavenumbers();
        const double dk = pi / 8.0;
        REQUIRE_THAT(k(0), WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(k(1), WithinAbs(dk, 1e-13));
        REQUIRE_THAT(k(31), WithinAbs(31 * dk, 1e-12));
        REQUIRE_THAT(k(32), WithinAbs(-32 * dk, 1e-12));
        REQUIRE_THAT(k(63), WithinAbs(-dk, 1e-13));
    }
}

TEST_CASE("parity reflection") {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(64);
    f(1) = Complex(2.0, -1.0);
    const Eigen::VectorXcd g = parity_reflect(f);
    REQUIRE(g(63) == Complex(2.0, -1.0));
    REQUIRE(g(1) == Complex(0.0, 0.0));
    REQUIRE((parity_reflect(g) - f).cwiseAbs().maxCoeff() == 0.0);
    // index 0 (the window edge) is its own mirror image
    f(0) = Complex(5.0, 0.0);
    REQUIRE(parity_reflect(f)(0) == Complex(5.0, 0.0));
}

TEST_CASE("gaussian channel profiles") {
    const TransverseGrid grid(512, 16.0);
    SECTION("normalized and mirror symmetric") {
        const TransverseField f = gaussian_profiles(4.0, 1.0, grid);
        REQUIRE_THAT(channel_power(f.upper, grid), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(channel_power(f.lower, grid), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(std::abs(overlap(f.upper, f.upper, grid)), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(std::abs(overlap(f.lower, parity_reflect(f.upper), grid)),
                     WithinAbs(1.0, 1e-12));
    }
    SECTION("well separated arms do not overlap") {
        const TransverseField f = gaussian_profiles(4.0, 1.0, grid);
        REQUIRE(std::abs(overlap(f.upper, f.lower, grid)) <= 1e-13);
    }
    SECTION("rejects beams that crowd the window") {
        REQUIRE_THROWS_AS(gaussian_profiles(6.0, 1.0, TransverseGrid(256, 16.0)),
                          DomainTooSmallError);
        REQUIRE_THROWS_AS(gaussian_profiles(-1.0, 1.0, grid), std::invalid_argument);
        REQUIRE_THROWS_AS(gaussian_profiles(1.0, 0.0, grid), std::invalid_argument);
    }
    SECTION("width matches the waist") {
        const TransverseField f = gaussian_profiles(0.0, 1.5, grid);
        REQUIRE_THAT(beam_width(f.upper, grid), WithinRel(1.5, 1e-12));
        REQUIRE_THROWS_AS(beam_width(Eigen::VectorXcd::Zero(512), grid), ZeroIntensityError);
    }
}

TEST_CASE("free diffraction follows the gaussian spreading law") {
    const TransverseGrid grid(512, 16.0);
    const TransverseField f0 = gaussian_profiles(0.0, 1.0, grid);
    PropagationConfig cfg;
    cfg.wave_number = 200.0;
    cfg.medium = medium_with_sinalpha(0.5);
    cfg.coupling_profile = Eigen::VectorXd::Zero(512); // coupling switched off
    for (const double z : {50.0, 120.0, 200.0}) {
        cfg.dz = z / 4;
        const TransverseField f = split_step_propagate(f0, cfg, grid, z);
        const double zr = cfg.wave_number * 1.0 * 1.0 / 2.0;
        const double want = std::sqrt(1.0 + (z / zr) * (z / zr));
        REQUIRE_THAT(beam_width(f.upper, grid), WithinRel(want, 1e-6));
        REQUIRE_THAT(channel_power(f.upper, grid), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("coupling alone reproduces the transfer matrix pointwise") {
    const TransverseGrid grid(256, 16.0);
    const TransverseField f0 = gaussian_profiles(2.0, 1.0, grid);
    const PTMediumParams medium = medium_with_sinalpha(0.5, 0.7);
    const DerivedMedium d = derive(medium);
    PropagationConfig cfg;
    cfg.medium = medium;
    cfg.include_diffraction = false;
    cfg.dz = d.length / 97; // deliberately not a divisor-friendly count
    const TransverseField got = split_step_propagate(f0, cfg, grid, d.length);
    const TransverseField want = apply_matrix(m_opt_analytic(medium), f0);
    REQUIRE(max_field_diff(got, want) <= 1e-10);
}

TEST_CASE("uniform media make the splitting exact") {
    const TransverseGrid grid(256, 16.0);
    const TransverseField f0 = gaussian_profiles(0.0, 1.0, grid);
    const PTMediumParams medium = medium_with_sinalpha(0.4, 1.1);
    const double z = derive(medium).length;
    PropagationConfig cfg;
    cfg.wave_number = 300.0;
    cfg.medium = medium;
    cfg.dz = z / 6; // a handful of coarse steps is already exact

    const TransverseField got = split_step_propagate(f0, cfg, grid, z);

    // diffraction and a uniform coupling commute, so the exact solution is
    // free spreading followed by the plane-wave transfer matrix
    PropagationConfig free_cfg = cfg;
    free_cfg.coupling_profile = Eigen::VectorXd::Zero(256);
    const TransverseField spread = split_step_propagate(f0, free_cfg, grid, z);
    const TransverseField want = apply_matrix(m_opt_analytic(medium), spread);
    REQUIRE(max_field_diff(got, want) <= 1e-10);
}

TEST_CASE("transverse coupling envelope converges at second order") {
    const TransverseGrid grid(256, 16.0);
    const TransverseField f0 = gaussian_profiles(0.0, 1.0, grid);
    const PTMediumParams medium = medium_with_sinalpha(0.5);
    const double z = derive(medium).length;

    PropagationConfig cfg;
    cfg.wave_number = 50.0;
    cfg.medium = medium;
    const Eigen::VectorXd x = grid.positions();
    cfg.coupling_profile = (-(x.array() / 4.0).pow(4)).exp(); // soft aperture

    const auto run = [&](double dz) {
        cfg.dz = dz;
        return split_step_propagate(f0, cfg, grid, z);
    };
    const TransverseField coarse = run(z / 8);
    const TransverseField half = run(z / 16);
    const TransverseField reference = run(z / 32);

    const double e_coarse = max_field_diff(coarse, reference);
    const double e_half = max_field_diff(half, reference);
    REQUIRE(e_half > 1e-12); // the envelope really does break exactness
    // second-order stepping against a quarter-step reference: the error pair
    // scales like (1 - 1/16) : (1/4 - 1/16), i.e. a ratio near 5
    REQUIRE(e_coarse / e_half > 3.0);
    REQUIRE(e_coarse / e_half < 6.0);
}

TEST_CASE("power is conserved exactly when the medium is hermitian") {
    const TransverseGrid grid(256, 16.0);
    const TransverseField f0 = gaussian_profiles(2.0, 1.0, grid);
    PropagationConfig cfg;
    cfg.wave_number = 100.0;
    cfg.dz = 0.05;

    cfg.medium = PTMediumParams(1.3, 0.0, 2.0, 0.4); // real spectrum, unitary step
    const TransverseField hermitian = split_step_propagate(f0, cfg, grid, 1.0);
    const double before = channel_power(f0.upper, grid) + channel_power(f0.lower, grid);
    const auto [hu, hl] = aggregate_channels(hermitian, grid);
    REQUIRE_THAT(hu + hl, WithinRel(before, 1e-10));

    cfg.medium = medium_with_sinalpha(0.5); // balanced gain and loss
    const TransverseField nonhermitian = split_step_propagate(f0, cfg, grid, 1.0);
    const auto [nu, nl] = aggregate_channels(nonhermitian, grid);
    REQUIRE(std::abs(nu + nl - before) > 1e-3);
}

TEST_CASE("resolved beams reproduce the matrix model") {
    const TransverseGrid grid(256, 16.0);
    ExperimentSettings settings;
    settings.medium = medium_with_sinalpha(0.5, 0.6);
    settings.hwp_angle = 0.4;
    const double length = derive(settings.medium).length;

    PropagationConfig cfg;
    cfg.dz = length / 200;

    SECTION("coupling only") {
        cfg.include_diffraction = false;
        const MatrixModelReport rep = validate_matrix_model(settings, cfg, grid, 1.0);
        REQUIRE(rep.max_abs_diff <= 1e-8);
        for (int a = 0; a < 2; ++a)
            for (int p = 0; p < 2; ++p)
                REQUIRE_THAT(rep.p_field[a][p], WithinAbs(rep.p_matrix[a][p], 1e-8));
    }
    SECTION("with diffraction at a comfortable diffraction parameter") {
        cfg.wave_number = 1e3 * length; // k w^2 / L = 1e3
        const MatrixModelReport rep = validate_matrix_model(settings, cfg, grid, 1.0);
        REQUIRE_THAT(rep.diffraction_parameter, WithinRel(1e3, 1e-12));
        REQUIRE(rep.max_abs_diff <= 1e-3);
    }
    SECTION("an aperture makes the deviation genuine but small") {
        cfg.wave_number = 1e3 * length;
        const Eigen::VectorXd x = grid.positions();
        cfg.coupling_profile = (-(x.array() / 8.0).pow(4)).exp();
        const MatrixModelReport rep = validate_matrix_model(settings, cfg, grid, 1.0);
        REQUIRE(rep.max_abs_diff > 1e-12);
        REQUIRE(rep.max_abs_diff <= 1e-3);
    }
}

TEST_CASE("field snapshots serialize as csv") {
    const TransverseGrid grid(64, 4.0);
    const TransverseField f = gaussian_profiles(0.0, 1.0, grid);
    std::ostringstream os;
    write_field_csv(os, f, grid);
    const std::string text = os.str();
    REQUIRE(text.rfind("x,re_upper,im_upper,re_lower,im_lower\n", 0) == 0);
    const long rows = std::count(text.begin(), text.end(), '\n');
    REQUIRE(rows == 65); // header plus one line per sample
}
