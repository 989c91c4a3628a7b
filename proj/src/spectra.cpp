#include "hhg/spectra.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>

#include "hhg/errors.hpp"

namespace hhg {
namespace {

// FFTW's planner is not re-entrant; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};

// Buffers come from fftw_alloc so the chosen codelets (and hence the rounding) do not
// depend on where the heap happened to place them.
std::vector<std::complex<double>> real_dft(const std::vector<double>& input) {
    const std::size_t n = input.size();
    const std::size_t m = n / 2 + 1;
    std::unique_ptr<double, FftwFree> in(fftw_alloc_real(n));
    std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(m));
    if (!in || !out) throw RuntimeFailure("FFT buffer allocation failed");
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    if (plan == nullptr) throw RuntimeFailure("FFT planning failed");
    std::copy(input.begin(), input.end(), in.get());
    fftw_execute(plan);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> result(m);
    for (std::size_t k = 0; k < m; ++k) result[k] = {out.get()[k][0], out.get()[k][1]};
    return result;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace

std::string to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }
std::string to_string(SpectrumSource s) { return s == SpectrumSource::acceleration ? "acceleration" : "dipole"; }

Window parse_window(const std::string& s) {
    if (s == "rectangular") return Window::rectangular;
    if (s == "hann") return Window::hann;
    throw ValidationError("unknown window '" + s + "' (expected rectangular or hann)");
}

SpectrumSource parse_source(const std::string& s) {
    if (s == "dipole") return SpectrumSource::dipole;
    if (s == "acceleration") return SpectrumSource::acceleration;
    throw ValidationError("unknown spectrum source '" + s + "' (expected dipole or acceleration)");
}

std::vector<double> dft_power(std::span<const double> signal, double dt) {
    require(!signal.empty(), "empty signal");
    const auto coeffs = real_dft(std::vector<double>(signal.begin(), signal.end()));
    std::vector<double> p(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) p[k] = std::norm(coeffs[k] * dt);
    return p;
}

Spectrum compute_spectrum(std::span<const double> signal, double dt, double omega_d, const SpectrumOptions& options) {
    require(signal.size() >= 2, "spectrum needs at least 2 samples");
    require(dt > 0.0 && std::isfinite(dt), "sample interval must be positive");
    require(omega_d > 0.0, "carrier frequency must be positive");
    require(options.floor_decades > 0.0, "floor_decades must be positive");

    const std::size_t n = signal.size();
    std::vector<double> work(signal.begin(), signal.end());
    if (options.window == Window::hann) {
        for (std::size_t k = 0; k < n; ++k)
            work[k] *= 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1)));
    }
    const std::size_t m = options.pad_pow2 ? next_pow2(n) : n;
    work.resize(m, 0.0);
    const auto coeffs = real_dft(work);

    Spectrum s;
    s.omega_d = omega_d;
    s.options = options;
    s.d_omega = 2.0 * std::numbers::pi / (static_cast<double>(m) * dt);
    const std::size_t bins = m / 2;
    s.omega.resize(bins);
    s.order.resize(bins);
    s.log_d.resize(bins);
    double max_log = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= bins; ++k) {
        const double w = s.d_omega * static_cast<double>(k);
        double d = std::norm(coeffs[k] * dt);
        if (options.source == SpectrumSource::acceleration) d /= (w * w) * (w * w);
        const double l = d > 0.0 ? std::log10(d) : -std::numeric_limits<double>::infinity();
        s.omega[k - 1] = w;
        s.order[k - 1] = w / omega_d;
        s.log_d[k - 1] = l;
        max_log = std::max(max_log, l);
    }
    s.floor_value = std::isfinite(max_log) ? max_log - options.floor_decades : -options.floor_decades;
    for (auto& l : s.log_d) l = std::max(l, s.floor_value);
    return s;
}

Spectrum compute_spectrum(const TimeSeries& series, double omega_d, const SpectrumOptions& options) {
    require(series.size() >= 2, "time series needs at least 2 samples");
    const double dt = series.times[1] - series.times[0];
    require(dt > 0.0, "time samples must increase");
    for (std::size_t k = 2; k < series.size(); ++k) {
        const double step = series.times[k] - series.times[k - 1];
        if (std::abs(step - dt) > 1e-6 * dt) throw ValidationError("time series is not uniformly sampled");
    }
    const auto& signal = options.source == SpectrumSource::acceleration ? series.accel : series.dipole;
    return compute_spectrum(std::span<const double>(signal), dt, omega_d, options);
}

PeakSet find_peaks(const Spectrum& spectrum, double min_prominence_db, double order_lo, double order_hi) {
    require(order_hi > order_lo, "order window must have order_hi > order_lo");
    const auto& y = spectrum.log_d;
    const std::size_t n = y.size();
    PeakSet out;
    if (n < 3) return out;
    const auto first = std::lower_bound(spectrum.order.begin(), spectrum.order.end(), order_lo) - spectrum.order.begin();
    const auto last = std::upper_bound(spectrum.order.begin(), spectrum.order.end(), order_hi) - spectrum.order.begin();
    if (first >= last) throw ValidationError("order window contains no spectrum bins");

    const double min_prom_decades = min_prominence_db / 10.0;
    for (std::size_t i = std::max<std::size_t>(1, first); i < std::min<std::size_t>(n - 1, last); ++i) {
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
        // Prominence: drop to the higher of the two minima separating this peak from higher ground.
        double left_min = y[i];
        for (std::size_t j = i; j-- > 0;) {
            if (y[j] > y[i]) break;
            left_min = std::min(left_min, y[j]);
        }
        double right_min = y[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            if (y[j] > y[i]) break;
            right_min = std::min(right_min, y[j]);
        }
        const double prominence = y[i] - std::max(left_min, right_min);
        if (prominence < min_prom_decades) continue;

        const double a = y[i - 1], b = y[i], c = y[i + 1];
        const double curv = a - 2.0 * b + c;
        double delta = curv != 0.0 ? 0.5 * (a - c) / curv : 0.0;
        delta = std::clamp(delta, -0.5, 0.5);
        const double omega = spectrum.omega[i] + delta * spectrum.d_omega;
        out.peaks.push_back({omega, omega / spectrum.omega_d, b - 0.25 * (a - c) * delta, 10.0 * prominence});
    }
    return out;
}

double harmonic_power(const Spectrum& spectrum, double n, double half_width) {
    require(n > 0.0, "harmonic order must be positive");
    require(!spectrum.order.empty() && n - half_width >= spectrum.order.front() && n + half_width <= spectrum.order.back(),
            "harmonic order outside the spectrum range");
    double best = -std::numeric_limits<double>::infinity();
    const auto lo = std::lower_bound(spectrum.order.begin(), spectrum.order.end(), n - half_width);
    for (auto it = lo; it != spectrum.order.end() && *it <= n + half_width; ++it)
        best = std::max(best, spectrum.log_d[static_cast<std::size_t>(it - spectrum.order.begin())]);
    require(std::isfinite(best), "no spectrum bins near the requested harmonic");
    return best;
}

}  // namespace hhg
