#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hhg/drive.hpp"
#include "hhg/propagator.hpp"

namespace hhg {

/// Bessel function J_0. Power series (extended precision) for |x| <= 12, Hankel
/// asymptotic expansion beyond; absolute error below 1e-12 everywhere.
double bessel_j0(double x);

/// First positive zero of J_0.
inline constexpr double kBesselJ0FirstZero = 2.404825557695773;

/// A two-level subsystem: transition frequency and dipole matrix element.
struct TlsParams {
    double omega_a = 0.0;
    double mu = 0.0;
    void validate() const;
};

enum class SidebandFormula {
    linear,        ///< (2n+1) w_d +- Omega_R, valid for Omega_R < w_a
    carrier_wave,  ///< (2n+1) w_d -+ [w_d - w_a J0(2 Omega_R / w_d)]
    odd_centered,  ///< (2n+1) w_d +- w_a J0(2 Omega_R / w_d)
};

std::string to_string(SidebandFormula f);

/// Sideband pair around the odd harmonic (2n+1) w_d. `lower` is the minus branch and
/// `upper` the plus branch of the formula, so for the carrier-wave formula the pair may
/// be inverted once the bracket turns negative.
struct SidebandPrediction {
    int n = 0;
    double center = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    SidebandFormula formula = SidebandFormula::linear;
    bool in_regime = true;  ///< whether Omega_R is on the side of w_a where the formula applies
};

/// Carrier-wave Mollow sidebands, n >= 1. in_regime is Omega_R > w_a.
SidebandPrediction carrier_wave_sidebands(const TlsParams& tls, double omega_d, double rabi, int n);

/// Sidebands centred on the odd harmonics, for the transition spanning two equidistant
/// steps (tls.omega_a is that larger gap). Any n >= 0 is accepted.
SidebandPrediction odd_centered_sidebands(const TlsParams& tls, double omega_d, double rabi, int n);

/// Mollow sidebands in the perturbative-Rabi regime, n >= 0. in_regime is Omega_R < w_a.
SidebandPrediction linear_sidebands(const TlsParams& tls, double omega_d, double rabi, int n);

/// (2n+1) w_d
double odd_harmonic(double omega_d, int n);

struct TlsRun {
    TimeSeries series;                     ///< dipole = mu * 2 Re(c_g* c_e); accel by second difference
    std::vector<double> excited_population;
    std::size_t steps = 0;
    double dt = 0.0;
};

/// Two-level dynamics under H = -(w_a/2) sigma_z - mu E(t) sigma_x, without the
/// rotating-wave approximation. Each step applies the exact 2x2 propagator with the
/// midpoint field. Starts in the ground level.
TlsRun tls_propagate(const TlsParams& tls, const Pulse& pulse, double dt, std::size_t record_stride = 1);

struct DipoleFitPoint {
    double e_peak;
    double sideband_omega;
};

/// Least-squares slope of |sideband_omega - omega_d| against e_peak (with intercept).
double fit_dipole(std::span<const DipoleFitPoint> points, double omega_d);

}  // namespace hhg
