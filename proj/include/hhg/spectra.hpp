#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hhg/propagator.hpp"

namespace hhg {

enum class Window { rectangular, hann };
enum class SpectrumSource { dipole, acceleration };

std::string to_string(Window w);
std::string to_string(SpectrumSource s);
Window parse_window(const std::string& s);
SpectrumSource parse_source(const std::string& s);

struct SpectrumOptions {
    Window window = Window::rectangular;
    SpectrumSource source = SpectrumSource::dipole;
    /// log10 D is clipped at (max - floor_decades); an all-zero signal maps to -floor_decades.
    double floor_decades = 20.0;
    /// Zero-pad to the next power of two (changes bin spacing only).
    bool pad_pow2 = false;
};

/// Emission spectrum on the positive DFT bins (the omega = 0 bin is dropped).
struct Spectrum {
    std::vector<double> omega;  ///< a.u., strictly increasing
    std::vector<double> order;  ///< omega / omega_d
    std::vector<double> log_d;  ///< log10 D(omega), floored
    double omega_d = 0.0;
    double d_omega = 0.0;  ///< bin spacing
    double floor_value = 0.0;
    SpectrumOptions options;

    std::size_t size() const { return omega.size(); }
};

/// |sum_k s_k e^{-i w_j t_k} dt|^2 on bins j = 0 .. N/2 (one-sided, N = signal length).
std::vector<double> dft_power(std::span<const double> signal, double dt);

/// Spectrum of a uniformly sampled real signal.
Spectrum compute_spectrum(std::span<const double> signal, double dt, double omega_d, const SpectrumOptions& options);

/// Spectrum of a recorded time series, using the dipole or the acceleration channel.
Spectrum compute_spectrum(const TimeSeries& series, double omega_d, const SpectrumOptions& options);

struct Peak {
    double omega;
    double order;
    double log_height;
    double prominence_db;  ///< 10 * (decades above the higher bounding minimum)
};

/// Strict local maxima of log_d, sorted by omega.
struct PeakSet {
    std::vector<Peak> peaks;
    std::size_t size() const { return peaks.size(); }
    bool empty() const { return peaks.empty(); }
};

inline constexpr double kDefaultProminenceDb = 10.0;

/// Peaks with prominence >= min_prominence_db whose bins lie in [order_lo, order_hi].
/// Positions are refined with a 3-point parabola through log_d.
PeakSet find_peaks(const Spectrum& spectrum, double min_prominence_db, double order_lo, double order_hi);

/// Largest log_d within +-0.05 orders of harmonic n.
double harmonic_power(const Spectrum& spectrum, double n, double half_width = 0.05);

}  // namespace hhg
