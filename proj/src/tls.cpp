#include "hhg/tls.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "hhg/errors.hpp"

namespace hhg {
namespace {

constexpr double kSeriesLimit = 12.0;
constexpr int kAsymptoticTerms = 20;

// a_k = prod_{j=1..k} (-(2j-1)^2) / (k! 8^k): coefficients of the Hankel expansion for nu = 0.
constexpr std::array<double, kAsymptoticTerms> hankel_coefficients() {
    std::array<double, kAsymptoticTerms> a{};
    double c = 1.0;
    a[0] = 1.0;
    for (int k = 1; k < kAsymptoticTerms; ++k) {
        const double odd = 2.0 * k - 1.0;
        c *= -(odd * odd) / (8.0 * k);
        a[k] = c;
    }
    return a;
}

constexpr auto kHankel = hankel_coefficients();

double j0_series(double x) {
    const long double q = -0.25L * static_cast<long double>(x) * static_cast<long double>(x);
    long double term = 1.0L, sum = 1.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(k));
        sum += term;
        if (std::fabs(term) < 1e-22L * std::fabs(sum) && std::fabs(term) < 1e-22L) break;
    }
    return static_cast<double>(sum);
}

double j0_asymptotic(double x) {
    double p = 0.0, q = 0.0, inv = 1.0;
    for (int k = 0; k < kAsymptoticTerms; ++k) {
        // a_k / x^k contributes to P (even k) or Q (odd k) with alternating signs.
        const double t = kHankel[static_cast<std::size_t>(k)] * inv;
        const int m = k / 2;
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0)
            p += sign * t;
        else
            q += sign * t;
        inv /= x;
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    require(std::isfinite(x), "bessel_j0 needs a finite argument");
    const double ax = std::abs(x);
    return ax <= kSeriesLimit ? j0_series(ax) : j0_asymptotic(ax);
}

void TlsParams::validate() const {
    require(omega_a > 0.0 && std::isfinite(omega_a), "TLS transition frequency must be positive");
    require(mu >= 0.0 && std::isfinite(mu), "TLS dipole must be non-negative");
}

std::string to_string(SidebandFormula f) {
    switch (f) {
        case SidebandFormula::linear: return "linear";
        case SidebandFormula::carrier_wave: return "carrier-wave";
        case SidebandFormula::odd_centered: return "odd-centered";
    }
    return "unknown";
}

double odd_harmonic(double omega_d, int n) {
    require(n >= 0, "harmonic index must be non-negative");
    return (2.0 * n + 1.0) * omega_d;
}

SidebandPrediction carrier_wave_sidebands(const TlsParams& tls, double omega_d, double rabi, int n) {
    tls.validate();
    require(n >= 1, "carrier-wave sideband index starts at n = 1");
    require(omega_d > 0.0 && rabi >= 0.0, "need omega_d > 0 and rabi >= 0");
    const double center = odd_harmonic(omega_d, n);
    const double bracket = omega_d - tls.omega_a * bessel_j0(2.0 * rabi / omega_d);
    return {n, center, center - bracket, center + bracket, SidebandFormula::carrier_wave, rabi > tls.omega_a};
}

SidebandPrediction odd_centered_sidebands(const TlsParams& tls, double omega_d, double rabi, int n) {
    tls.validate();
    require(n >= 0, "odd-centered sideband index must be non-negative");
    require(omega_d > 0.0 && rabi >= 0.0, "need omega_d > 0 and rabi >= 0");
    const double center = odd_harmonic(omega_d, n);
    const double half = tls.omega_a * bessel_j0(2.0 * rabi / omega_d);
    return {n, center, center - half, center + half, SidebandFormula::odd_centered, rabi > tls.omega_a};
}

SidebandPrediction linear_sidebands(const TlsParams& tls, double omega_d, double rabi, int n) {
    tls.validate();
    require(n >= 0, "linear sideband index must be non-negative");
    require(omega_d > 0.0 && rabi >= 0.0, "need omega_d > 0 and rabi >= 0");
    const double center = odd_harmonic(omega_d, n);
    return {n, center, center - rabi, center + rabi, SidebandFormula::linear, rabi < tls.omega_a};
}

TlsRun tls_propagate(const TlsParams& tls, const Pulse& pulse, double dt, std::size_t record_stride) {
    tls.validate();
    require(dt > 0.0 && std::isfinite(dt), "TLS time step must be positive");
    require(record_stride >= 1, "record stride must be at least 1");
    const double tau = pulse.duration();
    const auto steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(tau / dt)));
    const double h = tau / static_cast<double>(steps);
    const double half_gap = 0.5 * tls.omega_a;

    TlsRun run;
    run.steps = steps;
    run.dt = h;
    run.series.reserve(steps / record_stride + 1);
    run.excited_population.reserve(steps / record_stride + 1);

    cplx cg{1.0, 0.0}, ce{0.0, 0.0};
    auto record = [&](std::size_t k) {
        const double t = std::min(tau, static_cast<double>(k) * h);
        const double pop_e = std::norm(ce);
        run.series.push(t, field_at(pulse, t), std::norm(cg) + pop_e, tls.mu * 2.0 * std::real(std::conj(cg) * ce),
                        0.0);
        run.excited_population.push_back(pop_e);
    };

    record(0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double coupling = -tls.mu * field_at(pulse, (static_cast<double>(k) + 0.5) * h);
        // H = [[-g, c], [c, g]]; exp(-i H h) = cos(w h) I - i sin(w h)/w H, w = sqrt(g^2 + c^2).
        const double w = std::hypot(half_gap, coupling);
        const double cs = std::cos(w * h);
        const double sn = std::sin(w * h) / w;
        const cplx a{cs, sn * half_gap};   // <g|U|g>
        const cplx b{0.0, -sn * coupling}; // off-diagonal
        const cplx d{cs, -sn * half_gap};  // <e|U|e>
        const cplx ng = a * cg + b * ce;
        const cplx ne = b * cg + d * ce;
        cg = ng;
        ce = ne;
        if ((k + 1) % record_stride == 0) record(k + 1);
    }

    auto& s = run.series;
    const std::size_t m = s.size();
    if (m >= 3) {
        const double ts = s.times[1] - s.times[0];
        for (std::size_t k = 1; k + 1 < m; ++k) s.accel[k] = (s.dipole[k + 1] - 2.0 * s.dipole[k] + s.dipole[k - 1]) / (ts * ts);
        s.accel[0] = s.accel[1];
        s.accel[m - 1] = s.accel[m - 2];
    }
    return run;
}

double fit_dipole(std::span<const DipoleFitPoint> points, double omega_d) {
    require(points.size() >= 2, "dipole fit needs at least 2 points");
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.e_peak;
        my += std::abs(p.sideband_omega - omega_d);
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double dx = p.e_peak - mx;
        sxx += dx * dx;
        sxy += dx * (std::abs(p.sideband_omega - omega_d) - my);
    }
    require(sxx > 0.0, "dipole fit needs at least two distinct field amplitudes");
    return sxy / sxx;
}

}  // namespace hhg
