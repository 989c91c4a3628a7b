#include "hhg/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hhg/errors.hpp"

namespace hhg {

void PropagationConfig::validate() const {
    require(dt > 0.0 && std::isfinite(dt), "propagation.dt must be positive");
    require(mask_fraction > 0.0 && mask_fraction < 0.5, "propagation.mask_fraction must lie in (0, 0.5)");
    require(mask_exponent > 0.0 && std::isfinite(mask_exponent), "propagation.mask_exponent must be positive");
    require(record_stride >= 1, "propagation.record_stride must be at least 1");
    require(norm_floor >= 0.0 && norm_floor < 1.0, "propagation.norm_floor must lie in [0, 1)");
}

void TimeSeries::reserve(std::size_t n) {
    times.reserve(n);
    field.reserve(n);
    norm.reserve(n);
    dipole.reserve(n);
    accel.reserve(n);
}

void TimeSeries::push(double t, double e, double n, double d, double a) {
    times.push_back(t);
    field.push_back(e);
    norm.push_back(n);
    dipole.push_back(d);
    accel.push_back(a);
}

AbsorbingMask::AbsorbingMask(const Grid& grid, double fraction, double exponent)
    : factors_(grid.size(), 1.0), band_(0) {
    require(fraction > 0.0 && fraction < 0.5, "mask fraction must lie in (0, 0.5)");
    require(exponent > 0.0, "mask exponent must be positive");
    const std::size_t n = grid.size();
    band_ = std::max<std::size_t>(1, static_cast<std::size_t>(fraction * static_cast<double>(n)));
    // Band index j = 0 is the outermost point (xi = pi), j -> band approaches the interior (xi = pi/2).
    for (std::size_t j = 0; j < band_; ++j) {
        const double xi = 0.5 * std::numbers::pi * (1.0 + static_cast<double>(band_ - j) / static_cast<double>(band_));
        const double m = j == 0 ? 0.0 : std::pow(std::sin(xi), exponent);
        factors_[j] = m;
        factors_[n - 1 - j] = m;
    }
}

void AbsorbingMask::apply(Wavefunction& psi) const {
    auto amps = psi.amplitudes();
    const std::size_t n = amps.size();
    for (std::size_t j = 0; j < band_; ++j) {
        amps[j] *= factors_[j];
        amps[n - 1 - j] *= factors_[n - 1 - j];
    }
}

Wavefunction apply_mask(Wavefunction psi, const AbsorbingMask& mask) {
    mask.apply(psi);
    return psi;
}

CrankNicolson::CrankNicolson(const Potential& potential, double dt)
    : grid_(potential.grid()),
      dt_(dt),
      diag_(potential.values().begin(), potential.values().end()),
      xs_(potential.grid().coordinates()),
      cprime_(potential.grid().size()),
      dprime_(potential.grid().size()) {
    require(dt > 0.0 && std::isfinite(dt), "time step must be positive");
    const double kin = 1.0 / (grid_.dx() * grid_.dx());
    for (auto& d : diag_) d += kin;
}

// Solves (1 + i dt/2 H) psi' = (1 - i dt/2 H) psi with the Thomas algorithm. The
// off-diagonal of (1 + i dt/2 H) is i*gamma with gamma = -dt/(4 dx^2); complex
// arithmetic is spelled out to keep the inner loop free of library calls.
void CrankNicolson::step(Wavefunction& psi, double field) {
    auto amps = psi.amplitudes();
    const std::size_t n = amps.size();
    require(n == diag_.size(), "wavefunction grid does not match the stepper grid");
    const double h = 0.5 * dt_;
    const double gamma = -0.25 * dt_ / (grid_.dx() * grid_.dx());

    double cp_re = 0.0, cp_im = 0.0;  // c'_{i-1}
    double dp_re = 0.0, dp_im = 0.0;  // d'_{i-1}
    double prev_re = 0.0, prev_im = 0.0;  // original psi_{i-1}
    for (std::size_t i = 0; i < n; ++i) {
        const double hd = h * (diag_[i] + field * xs_[i]);
        const double pr = amps[i].real(), pi = amps[i].imag();
        double s_re = prev_re, s_im = prev_im;
        if (i + 1 < n) {
            s_re += amps[i + 1].real();
            s_im += amps[i + 1].imag();
        }
        // rhs = (1 - i hd) psi_i - i gamma s
        const double r_re = pr + hd * pi + gamma * s_im;
        const double r_im = pi - hd * pr - gamma * s_re;
        // denom = (1 + i hd) - i gamma c'_{i-1}
        const double den_re = 1.0 + gamma * cp_im;
        const double den_im = hd - gamma * cp_re;
        const double mag2 = den_re * den_re + den_im * den_im;
        if (!(mag2 > 0.0) || !std::isfinite(mag2)) throw RuntimeFailure("tridiagonal solve broke down");
        const double inv_re = den_re / mag2, inv_im = -den_im / mag2;
        // c'_i = i gamma / denom
        const double ncp_re = -gamma * inv_im, ncp_im = gamma * inv_re;
        // d'_i = (rhs - i gamma d'_{i-1}) / denom
        const double num_re = r_re + gamma * dp_im;
        const double num_im = r_im - gamma * dp_re;
        const double ndp_re = num_re * inv_re - num_im * inv_im;
        const double ndp_im = num_re * inv_im + num_im * inv_re;
        cprime_[i] = {ncp_re, ncp_im};
        dprime_[i] = {ndp_re, ndp_im};
        cp_re = ncp_re;
        cp_im = ncp_im;
        dp_re = ndp_re;
        dp_im = ndp_im;
        prev_re = pr;
        prev_im = pi;
    }
    amps[n - 1] = dprime_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        const cplx& c = cprime_[i];
        const cplx& next = amps[i + 1];
        amps[i] = {dprime_[i].real() - (c.real() * next.real() - c.imag() * next.imag()),
                   dprime_[i].imag() - (c.real() * next.imag() + c.imag() * next.real())};
    }
}

Wavefunction step(const Wavefunction& psi, const Potential& potential, double field_value, double dt) {
    require(psi.grid() == potential.grid(), "wavefunction and potential grids differ");
    Wavefunction out = psi;
    CrankNicolson cn(potential, dt);
    cn.step(out, field_value);
    return out;
}

Observables observe(const Wavefunction& psi, const Potential& potential) {
    const auto amps = psi.amplitudes();
    const auto dv = potential.derivative();
    const Grid& g = psi.grid();
    double n = 0.0, d = 0.0, f = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double rho = amps[i].real() * amps[i].real() + amps[i].imag() * amps[i].imag();
        n += rho;
        d += g.x(i) * rho;
        f += dv[i] * rho;
    }
    return {n * g.dx(), d * g.dx(), f * g.dx()};
}

PropagationResult propagate(const Wavefunction& psi0, const Potential& potential, const Pulse& pulse,
                            const PropagationConfig& config) {
    config.validate();
    require(psi0.grid() == potential.grid(), "initial state and potential grids differ");
    const double n0 = psi0.norm();
    require(n0 > 0.0 && n0 <= 1.0 + 1e-9, "initial state must be normalized or sub-normalized");

    const double tau = pulse.duration();
    const auto steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(tau / config.dt)));
    const double dt = tau / static_cast<double>(steps);

    PropagationResult result;
    result.steps = steps;
    result.dt = dt;
    result.series.reserve(steps / config.record_stride + 1);

    const Grid& grid = potential.grid();
    if (config.density_stride > 0) {
        DensityMovie movie;
        movie.x_min = grid.x_min();
        movie.dx = grid.dx();
        movie.n_x = grid.size();
        result.density = std::move(movie);
    }

    Wavefunction psi = psi0;
    CrankNicolson cn(potential, dt);
    std::optional<AbsorbingMask> mask;
    if (config.mask_enabled) mask.emplace(grid, config);

    auto time_at = [&](std::size_t k) { return std::min(tau, static_cast<double>(k) * dt); };
    auto record = [&](std::size_t k) {
        const double t = time_at(k);
        const double e = field_at(pulse, t);
        const auto obs = observe(psi, potential);
        result.series.push(t, e, obs.norm, obs.dipole, -obs.mean_gradient - e * obs.norm);
        if (!result.depleted && obs.norm < config.norm_floor) {
            result.depleted = true;
            result.depletion_time = t;
        }
    };
    auto snapshot = [&](std::size_t k) {
        auto& movie = *result.density;
        movie.times.push_back(time_at(k));
        for (const auto& a : psi.amplitudes()) movie.data.push_back(std::norm(a));
    };

    record(0);
    if (result.density) snapshot(0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t_mid = (static_cast<double>(k) + 0.5) * dt;
        cn.step(psi, field_at(pulse, t_mid));
        if (mask) mask->apply(psi);
        const std::size_t done = k + 1;
        if (done % config.record_stride == 0) record(done);
        if (result.density && done % config.density_stride == 0) snapshot(done);
    }
    return result;
}

}  // namespace hhg
