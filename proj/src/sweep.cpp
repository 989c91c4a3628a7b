#include "hhg/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "hhg/errors.hpp"

namespace hhg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct RowResult {
    Spectrum spectrum;
    double final_norm = 1.0;
};

nlohmann::json system_metadata(const SweepSystem& system) {
    nlohmann::json j;
    if (const auto* tdse = std::get_if<TdseSystem>(&system)) {
        j["kind"] = "tdse";
        j["grid"] = {{"x_min", tdse->grid.x_min()}, {"x_max", tdse->grid.x_max()}, {"n_points", tdse->grid.size()}};
        j["prefactor"] = tdse->prefactor;
        auto wells = nlohmann::json::array();
        for (const auto& w : tdse->wells) wells.push_back({{"a", w.a}, {"b", w.b}, {"center", w.center}});
        j["wells"] = wells;
        const auto& p = tdse->propagation;
        j["propagation"] = {{"dt", p.dt},
                            {"mask_enabled", p.mask_enabled},
                            {"mask_fraction", p.mask_fraction},
                            {"mask_exponent", p.mask_exponent},
                            {"record_stride", p.record_stride}};
    } else {
        const auto& tls = std::get<TlsSystem>(system);
        j["kind"] = "tls";
        j["omega_a"] = tls.tls.omega_a;
        j["mu"] = tls.tls.mu;
        j["dt"] = tls.dt;
        j["record_stride"] = tls.record_stride;
    }
    return j;
}

}  // namespace

void SweepConfig::validate() const {
    require(amplitudes.size() >= 2, "sweep needs at least 2 amplitudes");
    for (std::size_t k = 0; k < amplitudes.size(); ++k) {
        require(amplitudes[k] >= 0.0 && std::isfinite(amplitudes[k]), "sweep amplitudes must be non-negative");
        if (k > 0) require(amplitudes[k] > amplitudes[k - 1], "sweep amplitudes must be strictly increasing");
    }
    require(order_hi > order_lo && order_lo >= 0.0, "order range must satisfy 0 <= order_lo < order_hi");
    require(workers >= 1, "worker count must be at least 1");
    if (const auto* tdse = std::get_if<TdseSystem>(&system)) {
        require(!tdse->wells.empty(), "sweep system needs at least one well");
        require(tdse->n_levels >= 2, "sweep system needs at least two levels");
        tdse->propagation.validate();
    } else {
        const auto& tls = std::get<TlsSystem>(system);
        tls.tls.validate();
        require(tls.dt > 0.0, "TLS time step must be positive");
    }
}

SystemReference reference_for(const SweepSystem& system) {
    SystemReference ref;
    if (const auto* tdse = std::get_if<TdseSystem>(&system)) {
        const auto potential = build_potential(tdse->wells, tdse->grid, tdse->prefactor);
        const auto eig = solve_bound_states(potential, tdse->n_levels);
        const auto t01 = transition(eig, 0, 1);
        ref.omega_a = t01.frequency;
        ref.mu = std::abs(t01.dipole);
        if (eig.size() >= 3) ref.omega_a3 = eig.frequency(0, 2);
        ref.energies = eig.energies;
    } else {
        const auto& tls = std::get<TlsSystem>(system);
        ref.omega_a = tls.tls.omega_a;
        ref.mu = tls.tls.mu;
        ref.energies = {-0.5 * tls.tls.omega_a, 0.5 * tls.tls.omega_a};
    }
    return ref;
}

Spectrum SpectrumMap::row_spectrum(std::size_t k) const {
    require(k < rows(), "map row out of range");
    Spectrum s;
    s.omega_d = omega_d;
    s.d_omega = d_omega;
    s.order = order;
    s.omega.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) s.omega[i] = order[i] * omega_d;
    const auto r = row(k);
    s.log_d.assign(r.begin(), r.end());
    return s;
}

SpectrumMap run_sweep(const SweepConfig& config) {
    config.validate();
    SpectrumMap map;
    map.reference = reference_for(config.system);
    map.amplitudes = config.amplitudes;
    map.omega_d = config.pulse.omega_d();
    map.floor_decades = config.spectrum.floor_decades;
    map.rabi.resize(map.rows());
    for (std::size_t k = 0; k < map.rows(); ++k) map.rabi[k] = map.reference.mu * map.amplitudes[k];

    // Shared immutable inputs for grid-based rows.
    std::optional<Potential> potential;
    std::optional<Wavefunction> ground;
    if (const auto* tdse = std::get_if<TdseSystem>(&config.system)) {
        potential = build_potential(tdse->wells, tdse->grid, tdse->prefactor);
        const auto eig = solve_bound_states(*potential, 1);
        ground = Wavefunction::from_real(tdse->grid, eig.states[0]);
    }

    const std::size_t n_rows = map.rows();
    std::vector<std::optional<RowResult>> results(n_rows);
    std::vector<std::string> errors(n_rows);

    auto run_row = [&](std::size_t k) {
        const Pulse pulse = config.pulse.with_amplitude(config.amplitudes[k]);
        RowResult r;
        if (const auto* tdse = std::get_if<TdseSystem>(&config.system)) {
            const auto prop = propagate(*ground, *potential, pulse, tdse->propagation);
            r.spectrum = compute_spectrum(prop.series, pulse.omega_d(), config.spectrum);
            r.final_norm = prop.series.norm.back();
        } else {
            const auto& tls = std::get<TlsSystem>(config.system);
            const auto run = tls_propagate(tls.tls, pulse, tls.dt, tls.record_stride);
            r.spectrum = compute_spectrum(run.series, pulse.omega_d(), config.spectrum);
            r.final_norm = run.series.norm.back();
        }
        results[k] = std::move(r);
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n_rows; k = next++) {
            try {
                run_row(k);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    const std::size_t n_workers = std::min(config.workers, n_rows);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Order axis from the first successful row; all rows share the sampling.
    const auto first_ok = std::find_if(results.begin(), results.end(), [](const auto& r) { return r.has_value(); });
    if (first_ok == results.end()) throw RuntimeFailure("every sweep row failed: " + errors.front());
    const Spectrum& ref = (*first_ok)->spectrum;
    map.d_omega = ref.d_omega;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < ref.order.size(); ++i) {
        if (ref.order[i] < config.order_lo) lo = i + 1;
        if (ref.order[i] <= config.order_hi) hi = i + 1;
    }
    if (lo >= hi) throw ValidationError("order range contains no spectrum bins");
    map.order.assign(ref.order.begin() + static_cast<std::ptrdiff_t>(lo), ref.order.begin() + static_cast<std::ptrdiff_t>(hi));

    const std::size_t cols = map.cols();
    map.log_d.assign(n_rows * cols, kNaN);
    map.row_ok.assign(n_rows, false);
    map.row_errors = errors;
    map.final_norm.assign(n_rows, kNaN);
    for (std::size_t k = 0; k < n_rows; ++k) {
        if (!results[k]) continue;
        const auto& s = results[k]->spectrum;
        if (s.order.size() != ref.order.size()) {
            map.row_errors[k] = "row spectrum length differs from the map axis";
            continue;
        }
        std::copy_n(s.log_d.begin() + static_cast<std::ptrdiff_t>(lo), cols, map.log_d.begin() + static_cast<std::ptrdiff_t>(k * cols));
        map.row_ok[k] = true;
        map.final_norm[k] = results[k]->final_norm;
    }

    map.metadata = {
        {"system", system_metadata(config.system)},
        {"pulse",
         {{"omega_d_au", config.pulse.omega_d()},
          {"envelope", envelope_name(config.pulse.envelope())},
          {"cycles", envelope_cycles(config.pulse.envelope())}}},
        {"reference", {{"omega_a_au", map.reference.omega_a}, {"mu_au", map.reference.mu}, {"omega_a3_au", map.reference.omega_a3}}},
        {"spectrum",
         {{"window", to_string(config.spectrum.window)},
          {"source", to_string(config.spectrum.source)},
          {"floor_decades", config.spectrum.floor_decades},
          {"pad_pow2", config.spectrum.pad_pow2},
          {"order_lo", config.order_lo},
          {"order_hi", config.order_hi}}},
        {"conventions",
         {{"units", "atomic"}, {"gauge", "length"}, {"hamiltonian", "-1/2 d2/dx2 + V(x) + E(t) x"},
          {"field_amplitude", "peak"}, {"rabi", "mu * e_peak"}}},
        {"workers", config.workers},
    };
    return map;
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::odd_harmonic: return "odd-harmonic";
        case Branch::carrier_wave_lower: return "carrier-wave-lower";
        case Branch::carrier_wave_upper: return "carrier-wave-upper";
        case Branch::odd_centered_lower: return "odd-centered-lower";
        case Branch::odd_centered_upper: return "odd-centered-upper";
        case Branch::linear_lower: return "linear-lower";
        case Branch::linear_upper: return "linear-upper";
        case Branch::unassigned: return "unassigned";
    }
    return "unknown";
}

std::string family_of(Branch b) {
    switch (b) {
        case Branch::odd_harmonic: return "odd-harmonic";
        case Branch::carrier_wave_lower:
        case Branch::carrier_wave_upper: return "carrier-wave";
        case Branch::odd_centered_lower:
        case Branch::odd_centered_upper: return "odd-centered";
        case Branch::linear_lower:
        case Branch::linear_upper: return "linear";
        case Branch::unassigned: return "unassigned";
    }
    return "unknown";
}

std::vector<PredictionCurve> predictions_for(const SpectrumMap& map, const PredictionSet& set) {
    require(map.rows() > 0 && map.cols() > 0, "empty spectrum map");
    const double lo = map.order.front(), hi = map.order.back();
    const double wd = map.omega_d;
    auto inside = [&](double order) { return order >= lo && order <= hi ? order : kNaN; };
    std::vector<PredictionCurve> out;
    auto add = [&](Branch branch, int n, auto&& omega_of_row) {
        PredictionCurve c{branch, n, map.rabi, std::vector<double>(map.rows())};
        bool any = false;
        for (std::size_t k = 0; k < map.rows(); ++k) {
            c.order[k] = inside(omega_of_row(k) / wd);
            any = any || std::isfinite(c.order[k]);
        }
        if (any) out.push_back(std::move(c));
    };

    const TlsParams tls{map.reference.omega_a, map.reference.mu};
    for (int n = 0; n <= set.max_n; ++n) {
        if (set.odd_harmonics) add(Branch::odd_harmonic, n, [&](std::size_t) { return odd_harmonic(wd, n); });
        if (set.carrier_wave && n >= 1) {
            add(Branch::carrier_wave_lower, n,
                [&](std::size_t k) { return carrier_wave_sidebands(tls, wd, map.rabi[k], n).lower; });
            add(Branch::carrier_wave_upper, n,
                [&](std::size_t k) { return carrier_wave_sidebands(tls, wd, map.rabi[k], n).upper; });
        }
        if (set.odd_centered && map.reference.omega_a3 > 0.0) {
            const TlsParams tls3{map.reference.omega_a3, map.reference.mu};
            add(Branch::odd_centered_lower, n,
                [&](std::size_t k) { return odd_centered_sidebands(tls3, wd, map.rabi[k], n).lower; });
            add(Branch::odd_centered_upper, n,
                [&](std::size_t k) { return odd_centered_sidebands(tls3, wd, map.rabi[k], n).upper; });
        }
        if (set.linear) {
            add(Branch::linear_lower, n, [&](std::size_t k) { return linear_sidebands(tls, wd, map.rabi[k], n).lower; });
            add(Branch::linear_upper, n, [&](std::size_t k) { return linear_sidebands(tls, wd, map.rabi[k], n).upper; });
        }
    }
    return out;
}

std::vector<PeakTrack> extract_tracks(const SpectrumMap& map, std::span<const PredictionCurve> predictions,
                                      double tolerance_order, double min_prominence_db) {
    require(tolerance_order > 0.0, "track tolerance must be positive");
    for (const auto& c : predictions)
        require(c.order.size() == map.rows(), "prediction curves must be evaluated on the map's rows");

    std::vector<PeakTrack> tracks(predictions.size());
    for (std::size_t c = 0; c < predictions.size(); ++c) {
        tracks[c].branch = predictions[c].branch;
        tracks[c].n = predictions[c].n;
    }
    PeakTrack unassigned{Branch::unassigned, 0, {}};

    for (std::size_t k = 0; k < map.rows(); ++k) {
        if (!map.row_ok[k]) continue;
        const auto peaks = find_peaks(map.row_spectrum(k), min_prominence_db, map.order.front(), map.order.back());
        // (distance, peak, curve) candidates, assigned greedily from the closest pair.
        std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
        for (std::size_t p = 0; p < peaks.size(); ++p) {
            for (std::size_t c = 0; c < predictions.size(); ++c) {
                const double pred = predictions[c].order[k];
                if (!std::isfinite(pred)) continue;
                const double dist = std::abs(peaks.peaks[p].order - pred);
                if (dist <= tolerance_order) candidates.emplace_back(dist, p, c);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        std::vector<bool> peak_used(peaks.size(), false), curve_used(predictions.size(), false);
        for (const auto& [dist, p, c] : candidates) {
            if (peak_used[p] || curve_used[c]) continue;
            peak_used[p] = curve_used[c] = true;
            tracks[c].points.push_back({k, map.rabi[k], peaks.peaks[p].order, predictions[c].order[k]});
        }
        for (std::size_t p = 0; p < peaks.size(); ++p)
            if (!peak_used[p]) unassigned.points.push_back({k, map.rabi[k], peaks.peaks[p].order, kNaN});
    }
    tracks.push_back(std::move(unassigned));
    return tracks;
}

const BranchReport* ComparisonReport::family(const std::string& name) const {
    for (const auto& f : families)
        if (f.name == name) return &f;
    return nullptr;
}

ComparisonReport compare_tracks(std::span<const PeakTrack> tracks, std::span<const PredictionCurve> predictions,
                                double rabi_lo, double rabi_hi) {
    require(!tracks.empty(), "no tracks to compare");
    require(!predictions.empty(), "no predictions to compare against");
    auto in_range = [&](double r) { return r >= rabi_lo && r <= rabi_hi; };

    struct Accum {
        double sq = 0.0;
        std::size_t points = 0;
        std::vector<bool> expected, detected;
    };
    const std::size_t n_rows = predictions.front().rabi.size();
    auto make = [&] { return Accum{0.0, 0, std::vector<bool>(n_rows, false), std::vector<bool>(n_rows, false)}; };
    auto finish = [](const std::string& name, const Accum& a) {
        BranchReport r;
        r.name = name;
        r.points = a.points;
        r.expected_rows = static_cast<std::size_t>(std::count(a.expected.begin(), a.expected.end(), true));
        for (std::size_t k = 0; k < a.expected.size(); ++k)
            if (a.expected[k] && a.detected[k]) ++r.detected_rows;
        r.rms = a.points ? std::sqrt(a.sq / static_cast<double>(a.points)) : kNaN;
        r.coverage = r.expected_rows ? static_cast<double>(r.detected_rows) / static_cast<double>(r.expected_rows) : kNaN;
        return r;
    };

    ComparisonReport report;
    std::map<std::string, Accum> families;
    for (const auto& curve : predictions) {
        Accum a = make();
        Accum& fam = families.try_emplace(family_of(curve.branch), make()).first->second;
        for (std::size_t k = 0; k < n_rows; ++k) {
            if (in_range(curve.rabi[k]) && std::isfinite(curve.order[k])) a.expected[k] = fam.expected[k] = true;
        }
        for (const auto& track : tracks) {
            if (track.branch != curve.branch || track.n != curve.n) continue;
            for (const auto& p : track.points) {
                if (!in_range(p.rabi) || !std::isfinite(p.predicted)) continue;
                const double e = p.order - p.predicted;
                a.sq += e * e;
                fam.sq += e * e;
                ++a.points;
                ++fam.points;
                a.detected[p.row] = fam.detected[p.row] = true;
            }
        }
        report.branches.push_back(finish(to_string(curve.branch) + "-" + std::to_string(curve.n), a));
    }
    for (const auto& [name, acc] : families) report.families.push_back(finish(name, acc));
    return report;
}

}  // namespace hhg
