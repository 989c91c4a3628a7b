#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "hhg/eigensolver.hpp"
#include "hhg/errors.hpp"
#include "hhg/propagator.hpp"

using namespace hhg;

namespace {

Wavefunction gaussian_packet(const Grid& g, double sigma, double k0) {
    Wavefunction psi(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        psi[i] = std::exp(-x * x / (4.0 * sigma * sigma)) * std::exp(cplx(0.0, k0 * x));
    }
    psi.normalize();
    return psi;
}

double width(const Wavefunction& psi) {
    const auto rho = psi.density();
    const auto& g = psi.grid();
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        m1 += g.x(i) * rho[i] * g.dx();
        m2 += g.x(i) * g.x(i) * rho[i] * g.dx();
    }
    return std::sqrt(m2 - m1 * m1);
}

}  // namespace

TEST_CASE("absorbing mask profile") {
    const Grid g(-10.0, 10.0, 1001);
    const AbsorbingMask mask(g, 0.1, 0.125);
    const auto f = mask.factors();
    REQUIRE(mask.band() == 100);
    CHECK(f[0] == 0.0);
    CHECK(f[g.size() - 1] == 0.0);
    CHECK(f[50] == doctest::Approx(0.9576).epsilon(1e-4));
    CHECK(f[50] == doctest::Approx(std::pow(std::sin(0.75 * std::numbers::pi), 0.125)));
    for (std::size_t j = 1; j < 100; ++j) CHECK(f[j] >= f[j - 1]);
    for (std::size_t j = 100; j < 901; ++j) CHECK(f[j] == 1.0);
    CHECK_THROWS_AS(AbsorbingMask(g, 0.6, 0.125), ValidationError);
}

TEST_CASE("Crank-Nicolson without a mask is unitary under a strong field") {
    const Grid g(-40.0, 40.0, 801);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    auto psi = Wavefunction::from_real(g, set.states[0]);
    CrankNicolson cn(pot, 0.05);
    const double n0 = psi.norm();
    for (int k = 0; k < 2000; ++k) cn.step(psi, 0.1 * std::sin(0.057 * 0.05 * k));
    CHECK(std::abs(psi.norm() - n0) < 1e-8);
}

TEST_CASE("eigenstate only acquires a phase in zero field") {
    const Grid g(-40.0, 40.0, 801);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    const auto psi0 = Wavefunction::from_real(g, set.states[0]);
    auto psi = psi0;
    CrankNicolson cn(pot, 0.02);
    for (int k = 0; k < 500; ++k) cn.step(psi, 0.0);
    cplx overlap = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) overlap += std::conj(psi0[i]) * psi[i] * g.dx();
    CHECK(std::abs(overlap) == doctest::Approx(1.0).epsilon(1e-10));
    // Cayley phase: -2 atan(E dt / 2) per step.
    const double expected = -500.0 * 2.0 * std::atan(0.5 * set.energies[0] * 0.02);
    CHECK(std::remainder(std::arg(overlap) - expected, 2.0 * std::numbers::pi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("free gaussian spreads like the analytic packet") {
    const Grid g(-60.0, 60.0, 6001);
    auto psi = gaussian_packet(g, 1.0, 0.0);
    CrankNicolson cn(Potential::zero(g), 0.001);
    for (int k = 0; k < 2000; ++k) cn.step(psi, 0.0);
    const double expected = std::sqrt(1.0 + 1.0);  // sigma0 sqrt(1 + (t / 2 sigma0^2)^2) at t = 2
    CHECK(width(psi) == doctest::Approx(expected).epsilon(1e-4));
}

// The finite-difference kinetic term breaks Ehrenfest at O(dx^2); dx = 0.05 keeps it well under 1e-3.
TEST_CASE("Ehrenfest acceleration matches the second difference of the dipole") {
    const Grid g(-60.0, 60.0, 2401);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    const Pulse pulse(0.057, 0.03, TrapezoidEnvelope{1.0, 2.0, 1.0});
    PropagationConfig cfg;
    cfg.dt = 0.01;
    cfg.mask_enabled = false;
    const auto res = propagate(Wavefunction::from_real(g, set.states[0]), pot, pulse, cfg);
    const auto& s = res.series;
    double worst = 0.0, scale = 0.0;
    for (std::size_t k = 1; k + 1 < s.size(); k += 7) {
        const double fd = (s.dipole[k + 1] - 2.0 * s.dipole[k] + s.dipole[k - 1]) / (res.dt * res.dt);
        worst = std::max(worst, std::abs(fd - s.accel[k]));
        scale = std::max(scale, std::abs(s.accel[k]));
    }
    CHECK(worst / scale < 1e-3);
}

TEST_CASE("dipole response converges as dt shrinks") {
    const Grid g(-40.0, 40.0, 401);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    const auto psi0 = Wavefunction::from_real(g, set.states[0]);
    const Pulse pulse(0.1, 0.05, TrapezoidEnvelope{1.0, 1.0, 1.0});
    auto final_dipole = [&](double dt) {
        PropagationConfig cfg;
        cfg.dt = dt;
        cfg.mask_enabled = false;
        return propagate(psi0, pot, pulse, cfg).series.dipole.back();
    };
    const double d1 = final_dipole(0.08), d2 = final_dipole(0.04), d3 = final_dipole(0.02);
    const double ratio = std::abs(d1 - d2) / std::abs(d2 - d3);
    CHECK(ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("an unbinding field depletes the norm and sets the flag") {
    const Grid g(-20.0, 20.0, 401);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    const Pulse pulse(0.057, 0.5, TrapezoidEnvelope{1.0, 3.0, 1.0});
    PropagationConfig cfg;
    cfg.dt = 0.05;
    cfg.norm_floor = 0.05;
    const auto res = propagate(Wavefunction::from_real(g, set.states[0]), pot, pulse, cfg);
    CHECK(res.depleted);
    CHECK(std::isfinite(res.depletion_time));
    CHECK(res.series.norm.back() < 0.05);
}

TEST_CASE("density snapshots follow the stride") {
    const Grid g(-20.0, 20.0, 201);
    const auto pot = build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g);
    const auto set = solve_bound_states(pot, 1);
    PropagationConfig cfg;
    cfg.dt = 0.1;
    cfg.density_stride = 100;
    cfg.record_stride = 10;
    const auto res = propagate(Wavefunction::from_real(g, set.states[0]), pot, Pulse(0.1, 0.01, TrapezoidEnvelope{1.0, 1.0, 1.0}), cfg);
    REQUIRE(res.density.has_value());
    CHECK(res.density->n_x == 201);
    CHECK(res.density->data.size() == res.density->n_t() * 201);
    CHECK(res.density->n_t() == res.steps / 100 + 1);
    CHECK(res.series.size() == res.steps / 10 + 1);
}
