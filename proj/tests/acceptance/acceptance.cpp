// Acceptance suite: one line per criterion, non-zero exit if any selected criterion fails.
// Usage: hhgsim_acceptance [criterion numbers...]   (default: all)

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hhg/config.hpp"
#include "hhg/eigensolver.hpp"
#include "hhg/propagator.hpp"
#include "hhg/spectra.hpp"
#include "hhg/sweep.hpp"
#include "hhg/tls.hpp"

#ifndef HHGSIM_CONFIG_DIR
#error "HHGSIM_CONFIG_DIR must point at the configs directory"
#endif

using namespace hhg;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

RunConfig config(const std::string& name) { return load_config(std::string(HHGSIM_CONFIG_DIR) + "/" + name); }

const Peak* nearest_peak(const PeakSet& set, double order) {
    const Peak* best = nullptr;
    for (const auto& p : set.peaks)
        if (best == nullptr || std::abs(p.order - order) < std::abs(best->order - order)) best = &p;
    return best;
}

struct GridSetup {
    TdseSystem system;
    Potential potential;
    Wavefunction ground;
    SystemReference ref;
};

GridSetup grid_setup(const RunConfig& cfg) {
    auto sys = resolve_tdse(cfg);
    auto pot = build_potential(sys.wells, sys.grid, sys.prefactor);
    const auto eig = solve_bound_states(pot, 3);
    SystemReference ref;
    ref.omega_a = eig.frequency(0, 1);
    ref.mu = std::abs(transition(eig, 0, 1).dipole);
    ref.omega_a3 = eig.frequency(0, 2);
    ref.energies = eig.energies;
    auto ground = Wavefunction::from_real(sys.grid, eig.states[0]);
    return {std::move(sys), std::move(pot), std::move(ground), ref};
}

Spectrum grid_spectrum(const GridSetup& g, const Pulse& pulse, const SpectrumOptions& opts, double* final_norm = nullptr) {
    const auto r = propagate(g.ground, g.potential, pulse, g.system.propagation);
    if (final_norm) *final_norm = r.series.norm.back();
    return compute_spectrum(r.series, pulse.omega_d(), opts);
}

// 1. Resonant TLS, Omega_R = 0.3 omega_a: sidebands at omega_d +- Omega_R.
Outcome tls_triplet() {
    auto cfg = config("tls_mollow.cfg");
    const auto sys = std::get<TlsSystem>(resolve_system(cfg));
    const SystemReference ref{sys.tls.omega_a, sys.tls.mu, 0.0, {}};
    const auto pulse = resolve_pulse(cfg, ref);
    const double rabi = rabi_frequency(sys.tls.mu, pulse.e_peak());
    const auto run = tls_propagate(sys.tls, pulse, sys.dt, sys.record_stride);
    const auto spec = compute_spectrum(run.series, pulse.omega_d(), resolve_spectrum(cfg));
    const auto peaks = find_peaks(spec, kDefaultProminenceDb, 0.2, 1.8);
    const double tol = std::max(2.0 * spec.d_omega, 0.03 * rabi);
    bool ok = true;
    std::string detail;
    for (double target : {pulse.omega_d() - rabi, pulse.omega_d() + rabi}) {
        const auto* p = nearest_peak(peaks, target / pulse.omega_d());
        const double err = p ? std::abs(p->omega - target) : std::numeric_limits<double>::infinity();
        ok = ok && err <= tol;
        detail += fmt("|dw| = %.2e ", err);
    }
    return {ok, detail + fmt("(tol %.2e a.u.)", tol)};
}

// 2. Resonant TLS at Omega_R = 2 omega_a: carrier-wave sidebands n = 1, 2.
Outcome tls_carrier_wave() {
    auto cfg = config("tls_mollow.cfg");
    cfg.set("pulse.rabi_over_wa", "2");
    const auto sys = std::get<TlsSystem>(resolve_system(cfg));
    const SystemReference ref{sys.tls.omega_a, sys.tls.mu, 0.0, {}};
    const auto pulse = resolve_pulse(cfg, ref);
    const double rabi = rabi_frequency(sys.tls.mu, pulse.e_peak());
    const auto run = tls_propagate(sys.tls, pulse, sys.dt, sys.record_stride);
    const auto spec = compute_spectrum(run.series, pulse.omega_d(), resolve_spectrum(cfg));
    const auto peaks = find_peaks(spec, kDefaultProminenceDb, 0.5, 7.5);
    double worst = 0.0;
    for (int n : {1, 2}) {
        const auto pr = carrier_wave_sidebands(sys.tls, pulse.omega_d(), rabi, n);
        for (double w : {pr.lower, pr.upper}) {
            const auto* p = nearest_peak(peaks, w / pulse.omega_d());
            worst = std::max(worst, p ? std::abs(p->order - w / pulse.omega_d()) : 1e9);
        }
    }
    return {worst <= 0.05, fmt("worst |d order| = %.4f (tol 0.05)", worst)};
}

// 3. Single well, E1 - E0 = 0.395: odd harmonics 3, 5, 7 above even 2, 4, 6 by 20 dB.
Outcome single_well_odd_only() {
    const auto cfg = config("single_well.cfg");
    const auto g = grid_setup(cfg);
    if (std::abs(g.ref.omega_a - 0.395) > 0.005) return {false, fmt("omega_a = %.4f, not 0.395", g.ref.omega_a)};
    const auto pulse = resolve_pulse(cfg, g.ref);
    const auto spec = grid_spectrum(g, pulse, resolve_spectrum(cfg));
    double min_odd = std::numeric_limits<double>::infinity(), max_even = -min_odd;
    for (int n : {3, 5, 7}) min_odd = std::min(min_odd, harmonic_power(spec, n));
    for (int n : {2, 4, 6}) max_even = std::max(max_even, harmonic_power(spec, n));
    const double margin_db = 10.0 * (min_odd - max_even);
    return {margin_db >= 20.0, fmt("omega_a = %.4f, min odd - max even = %.1f dB (need 20)", g.ref.omega_a, margin_db)};
}

struct SweepOutcome {
    const BranchReport* family;
    ComparisonReport report;
    double seconds;
};

ComparisonReport sweep_report(const RunConfig& cfg) {
    const auto system = resolve_system(cfg);
    const auto ref = reference_for(system);
    auto sc = resolve_sweep(cfg, ref);
    sc.system = system;
    const auto map = run_sweep(sc);
    const auto preds = predictions_for(map, resolve_predictions(cfg));
    const auto tracks = extract_tracks(map, preds, cfg.real("sweep.tolerance_order"), cfg.real("spectrum.min_prominence_db"));
    return compare_tracks(tracks, preds, cfg.real("sweep.compare_min_over_wa") * ref.omega_a,
                          cfg.real("sweep.compare_max_over_wa") * ref.omega_a);
}

// 4. Double well at omega_a = 0.04, omega_d = 0.7 omega_a, 64 rows to 4 omega_a.
Outcome double_well_sweep() {
    auto cfg = config("double_well.cfg");
    cfg.set("sweep.workers", "8");
    const auto t0 = std::chrono::steady_clock::now();
    const auto report = sweep_report(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto* cw = report.family("carrier-wave");
    if (cw == nullptr) return {false, "no carrier-wave branch detected"};
    const bool ok = cw->rms <= 0.1 && cw->coverage >= 0.7 && secs < 1800.0;
    return {ok, fmt("rms %.4f (<= 0.1), coverage %.3f (>= 0.7), %zu rows, %.0f s (< 1800)", cw->rms, cw->coverage,
                    static_cast<std::size_t>(cfg.integer("sweep.rows")), secs)};
}

// 5. Resonant double well at Omega_R = (j01 / 2) omega_d: sidebands on 2 omega_d and 4 omega_d.
Outcome even_coincidence() {
    auto cfg = config("double_well_resonant.cfg");
    const auto g = grid_setup(cfg);
    const double wd = resolve_omega_d(cfg, g.ref);
    cfg.set("pulse.rabi_over_wa", fmt("%.17g", 0.5 * kBesselJ0FirstZero * wd / g.ref.omega_a));
    const auto pulse = resolve_pulse(cfg, g.ref);
    const auto spec = grid_spectrum(g, pulse, resolve_spectrum(cfg));
    const auto peaks = find_peaks(spec, kDefaultProminenceDb, 1.2, 4.8);
    bool ok = true;
    std::string detail;
    for (int h : {2, 4}) {
        const auto* p = nearest_peak(peaks, h);
        const double d = p ? std::abs(p->order - h) : 1e9;
        ok = ok && d <= 0.05;
        detail += fmt("nearest to %d: %.4f (|d| %.4f)  ", h, p ? p->order : NAN, d);
    }
    return {ok, detail + "(tol 0.05)"};
}

struct LinearScan {
    std::vector<double> rabi, separation;
    std::vector<DipoleFitPoint> points;
    double mu_eigen = 0.0;
    double omega_d = 0.0;
};

// Resonant double well at Omega_R / omega_a = 0.1 .. 0.6; the strongest peak on each side of
// omega_d (excluding the central line) gives the sideband pair.
const LinearScan& linear_scan() {
    static const LinearScan scan = [] {
        auto cfg = config("double_well_resonant.cfg");
        const auto g = grid_setup(cfg);
        LinearScan s;
        s.mu_eigen = g.ref.mu;
        s.omega_d = resolve_omega_d(cfg, g.ref);
        for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}) {
            cfg.set("pulse.rabi_over_wa", fmt("%.17g", r));
            const auto pulse = resolve_pulse(cfg, g.ref);
            const auto spec = grid_spectrum(g, pulse, resolve_spectrum(cfg));
            const auto peaks = find_peaks(spec, kDefaultProminenceDb, 0.1, 1.9);
            const Peak* lo = nullptr;
            const Peak* hi = nullptr;
            for (const auto& p : peaks.peaks) {
                const double off = p.order - 1.0;
                if (std::abs(off) < 0.05) continue;
                auto*& slot = off < 0 ? lo : hi;
                if (slot == nullptr || p.prominence_db > slot->prominence_db) slot = &p;
            }
            if (lo == nullptr || hi == nullptr) continue;
            s.rabi.push_back(r * g.ref.omega_a);
            s.separation.push_back(hi->omega - lo->omega);
            s.points.push_back({pulse.e_peak(), lo->omega});
            s.points.push_back({pulse.e_peak(), hi->omega});
        }
        return s;
    }();
    return scan;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) mx += x[k] / n, my += y[k] / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) sxx += (x[k] - mx) * (x[k] - mx), sxy += (x[k] - mx) * (y[k] - my);
    return sxy / sxx;
}

// 6. Sideband separation grows as 2 Omega_R in the linear regime.
Outcome linear_slope() {
    const auto& s = linear_scan();
    if (s.rabi.size() < 3) return {false, fmt("only %zu amplitudes with a resolved pair", s.rabi.size())};
    const double slope = ls_slope(s.rabi, s.separation);
    return {std::abs(slope - 2.0) <= 0.1, fmt("slope %.4f over %zu amplitudes (2 +- 5%%)", slope, s.rabi.size())};
}

// 7. Dipole from the linear-regime fit against <0|x|1>.
Outcome dipole_fit() {
    const auto& s = linear_scan();
    if (s.points.size() < 2) return {false, "not enough sideband points"};
    const double mu = fit_dipole(s.points, s.omega_d);
    const double rel = std::abs(mu - s.mu_eigen) / s.mu_eigen;
    return {rel <= 0.15, fmt("fitted mu %.4f vs eigensolver %.4f (rel %.3f, tol 0.15)", mu, s.mu_eigen, rel)};
}

// 8. Numerics oracles.
double j0_oracle(double x) {
    // Taylor series in long double, terms generated independently of the library.
    long double sum = 0.0L, term = 1.0L;
    const long double q = static_cast<long double>(x) * x / 4.0L;
    for (int k = 0; k < 120; ++k) {
        if (k > 0) term *= -q / (static_cast<long double>(k) * k);
        sum += term;
    }
    return static_cast<double>(sum);
}

double dvr_ground_energy(double a, double b, double half_width, int n) {
    // Colbert-Miller sinc-DVR, dense diagonalization.
    const double dx = 2.0 * half_width / (n + 1);
    Eigen::MatrixXd h(n, n);
    for (int i = 0; i < n; ++i) {
        const double x = -half_width + (i + 1) * dx;
        for (int j = 0; j < n; ++j) {
            const int d = i - j;
            h(i, j) = d == 0 ? std::numbers::pi * std::numbers::pi / (6.0 * dx * dx)
                             : ((d % 2 == 0) ? 1.0 : -1.0) / (dx * dx * d * d);
        }
        h(i, i) += -1.0 / std::sqrt(a * x * x + b);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

Outcome numerics_oracles() {
    std::string detail;
    bool ok = true;

    {  // norm drift, mask off
        const Grid g(-100, 100, 4001);
        const auto pot = build_potential(std::vector<WellSpec>{{1.0, 2.0, 0.0}}, g);
        const auto eig = solve_bound_states(pot, 1);
        auto psi = Wavefunction::from_real(g, eig.states[0]);
        const PropagationConfig pc;
        CrankNicolson cn(pot, pc.dt);
        const double n0 = psi.norm();
        for (int k = 0; k < 10000; ++k) cn.step(psi, 0.05 * std::sin(0.057 * k * pc.dt));
        const double drift = std::abs(psi.norm() - n0);
        ok = ok && drift <= 1e-8;
        detail += fmt("norm drift %.1e; ", drift);
    }
    {  // free Gaussian spreading, sigma(t) = sigma0 sqrt(1 + (t / (2 sigma0^2))^2)
        const Grid g(-60, 60, 6001);
        const double s0 = 1.0, t_end = 2.0, dt = 0.001;
        std::vector<cplx> amp(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) amp[i] = std::exp(-g.x(i) * g.x(i) / (4.0 * s0 * s0));
        Wavefunction psi(g, amp);
        psi.normalize();
        CrankNicolson cn(Potential::zero(g), dt);
        const auto steps = static_cast<int>(std::lround(t_end / dt));
        for (int k = 0; k < steps; ++k) cn.step(psi, 0.0);
        const auto rho = psi.density();
        double m2 = 0.0, n = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            m2 += g.x(i) * g.x(i) * rho[i];
            n += rho[i];
        }
        const double width = std::sqrt(m2 / n);
        const double expect = s0 * std::sqrt(1.0 + std::pow(t_end / (2.0 * s0 * s0), 2));
        const double rel = std::abs(width - expect) / expect;
        ok = ok && rel <= 1e-3;
        detail += fmt("gaussian width rel %.1e; ", rel);
    }
    {  // soft-Coulomb a = 1, b = 2 ground energy
        const double oracle = dvr_ground_energy(1.0, 2.0, 40.0, 799);
        const auto pot = build_potential(std::vector<WellSpec>{{1.0, 2.0, 0.0}}, Grid(-100, 100, 4001));
        const double e0 = solve_bound_states(pot, 1).energies[0];
        ok = ok && std::abs(e0 - oracle) <= 1e-3;
        detail += fmt("E0 %.6f vs %.6f; ", e0, oracle);
    }
    {  // J0
        double worst = 0.0;
        for (int k = -20; k <= 20; ++k) worst = std::max(worst, std::abs(bessel_j0(0.5 * k) - j0_oracle(0.5 * k)));
        ok = ok && worst <= 1e-10;
        detail += fmt("J0 max err %.1e", worst);
    }
    return {ok, detail};
}

// 9. Same Omega_R / omega_a = 1.8: the single well depletes, the double well does not.
Outcome depletion_contrast() {
    double n_single = 0.0, n_double = 0.0;
    {
        auto cfg = config("single_well_strong.cfg");
        cfg.set("propagation.density_stride", "0");
        const auto g = grid_setup(cfg);
        const auto r = propagate(g.ground, g.potential, resolve_pulse(cfg, g.ref), g.system.propagation);
        n_single = r.series.norm.back();
    }
    {
        auto cfg = config("double_well.cfg");
        cfg.set("pulse.rabi_over_wa", "1.8");
        const auto g = grid_setup(cfg);
        const auto r = propagate(g.ground, g.potential, resolve_pulse(cfg, g.ref), g.system.propagation);
        n_double = r.series.norm.back();
    }
    return {n_single < 0.9 && n_double > 0.99,
            fmt("final norm single %.4f (< 0.9), double %.6f (> 0.99)", n_single, n_double)};
}

// 10. 20-cycle-FWHM Gaussian sweep: carrier-wave branch still resolved.
Outcome gaussian_smearing() {
    auto cfg = config("double_well_gaussian.cfg");
    cfg.set("sweep.workers", std::to_string(std::max(1u, std::thread::hardware_concurrency())));
    const auto report = sweep_report(cfg);
    const auto* cw = report.family("carrier-wave");
    if (cw == nullptr) return {false, "no carrier-wave branch detected"};
    return {cw->rms <= 0.15 && cw->coverage >= 0.4,
            fmt("rms %.4f (<= 0.15), coverage %.3f (>= 0.4)", cw->rms, cw->coverage)};
}

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound of its own
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {
        {1, "tls-mollow-triplet", 5.0, tls_triplet},
        {2, "tls-carrier-wave-sidebands", 10.0, tls_carrier_wave},
        {3, "single-well-odd-harmonics", 120.0, single_well_odd_only},
        {4, "double-well-carrier-wave-sweep", 1800.0, double_well_sweep},
        {5, "even-harmonic-coincidence", 0.0, even_coincidence},
        {6, "linear-regime-slope", 0.0, linear_slope},
        {7, "dipole-fit-consistency", 0.0, dipole_fit},
        {8, "numerics-oracles", 60.0, numerics_oracles},
        {9, "depletion-contrast", 0.0, depletion_contrast},
        {10, "gaussian-pulse-smearing", 0.0, gaussian_smearing},
    };
    std::set<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

    int failures = 0;
    for (const auto& c : all) {
        if (!wanted.empty() && !wanted.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget_s > 0.0 && secs >= c.budget_s) {
            o.pass = false;
            o.detail += fmt(" [over runtime budget %.0f s]", c.budget_s);
        }
        std::printf("%s  criterion %2d  %-32s %s  (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
