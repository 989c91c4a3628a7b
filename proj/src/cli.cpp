#include "hhg/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "hhg/config.hpp"
#include "hhg/eigensolver.hpp"
#include "hhg/errors.hpp"
#include "hhg/sweep.hpp"

namespace hhg {
namespace {

constexpr const char* kConventions =
    "units: atomic (hbar = m_e = e = 1); gauge: length, H = -1/2 d^2/dx^2 + V(x) + E(t) x\n"
    "field: E(t) = p(t) e_peak sin(omega_d t), e_peak is the peak amplitude; Omega_R = mu e_peak\n";

struct Common {
    std::string config_path;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string prefix;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
    auto* opt = cmd->add_option("-c,--config", c.config_path, "config file (flat section.key = value)");
    if (config_required) opt->required()->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", c.sets, "override a config key, e.g. --set pulse.e_peak=0.05");
    cmd->add_option("--out-dir", c.out_dir, "output directory (overrides output.dir)");
    cmd->add_option("--prefix", c.prefix, "output file stem (overrides output.prefix)");
}

RunConfig load(const Common& c) {
    RunConfig cfg = load_config(c.config_path);
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
        cfg.set(s.substr(0, eq), s.substr(eq + 1));
    }
    if (!c.out_dir.empty()) cfg.set("output.dir", c.out_dir);
    if (!c.prefix.empty()) cfg.set("output.prefix", c.prefix);
    return cfg;
}

class Outputs {
public:
    Outputs(std::string dir, std::string prefix, std::ostream& log) : dir_(std::move(dir)), prefix_(std::move(prefix)), log_(log) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw RuntimeFailure("cannot create output directory '" + dir_ + "': " + ec.message());
    }
    explicit Outputs(const RunConfig& cfg, std::ostream& log) : Outputs(cfg.text("output.dir"), cfg.text("output.prefix"), log) {}

    std::string path(const std::string& suffix) const { return (std::filesystem::path(dir_) / (prefix_ + suffix)).string(); }
    std::string name(const std::string& suffix) const { return prefix_ + suffix; }

    template <class Fn>
    void write(const std::string& suffix, Fn&& fn) const {
        const auto p = path(suffix);
        std::ofstream f(p, std::ios::binary);
        if (!f) throw RuntimeFailure("cannot open '" + p + "' for writing");
        fn(f);
        if (!f) throw RuntimeFailure("write failed for '" + p + "'");
        log_ << "wrote " << p << '\n';
    }

    void script(const std::string& suffix, PlotKind kind, const std::string& data_suffix, const std::string& title,
                const nlohmann::json& layout = {}) const {
        write(suffix, [&](std::ostream& f) { f << plot_script(kind, name(data_suffix), title, layout); });
    }

private:
    std::string dir_;
    std::string prefix_;
    std::ostream& log_;
};

std::string header(const std::string& command, const RunConfig* cfg, const std::string& notes = {}) {
    std::string h = "hhgsim " + command + "\n" + kConventions + notes;
    if (cfg != nullptr) h += "effective config:\n" + serialize_config(*cfg);
    return h;
}

std::string reference_notes(const SystemReference& ref) {
    std::ostringstream s;
    s.precision(12);
    s << "omega_a_au = " << ref.omega_a << "\nmu_au = " << ref.mu << "\n";
    if (ref.omega_a3 > 0.0) s << "omega_a3_au = " << ref.omega_a3 << "\n";
    if (ref.mu > 0.0) s << "E0_au (Omega_R = omega_a) = " << ref.omega_a / ref.mu << "\n";
    return s.str();
}

std::string pulse_notes(const Pulse& p) {
    std::ostringstream s;
    s.precision(12);
    s << "pulse: omega_d_au = " << p.omega_d() << ", e_peak_au = " << p.e_peak() << ", envelope = " << envelope_name(p.envelope())
      << ", duration_au = " << p.duration() << "\n";
    return s.str();
}

struct PeakWindow {
    double min_prominence_db = kDefaultProminenceDb;
    double order_lo = 0.0;
    double order_hi = 10.0;
};

PeakWindow peak_window(const RunConfig& cfg) {
    return {cfg.real("spectrum.min_prominence_db"), cfg.real("spectrum.order_lo"), cfg.real("spectrum.order_hi")};
}

PeakSet peaks_in_range(const Spectrum& s, const PeakWindow& w) {
    const double lo = std::max(w.order_lo, s.order.front());
    const double hi = std::min(w.order_hi, s.order.back());
    if (hi <= lo) return {};
    return find_peaks(s, w.min_prominence_db, lo, hi);
}

void write_spectrum_products(const Outputs& o, const Spectrum& s, const PeakWindow& w, double e_peak,
                             const std::string& h) {
    o.write("_spectrum.csv", [&](std::ostream& f) { write_spectrum_csv(f, s, h); });
    o.write("_peaks.csv", [&](std::ostream& f) { write_peaks_csv(f, peaks_in_range(s, w), e_peak, h); });
    o.script("_spectrum.gp", PlotKind::spectrum, "_spectrum.csv", "emission spectrum");
}

struct GridRun {
    TdseSystem system;
    Potential potential;
    EigenSet eig;
    SystemReference ref;
};

GridRun prepare_grid(const RunConfig& cfg, std::size_t levels, std::ostream& err) {
    auto sys = resolve_tdse(cfg);
    auto pot = build_potential(sys.wells, sys.grid, sys.prefactor);
    auto eig = solve_bound_states(pot, std::max<std::size_t>(levels, 2));
    for (const auto& w : eig.warnings) err << "warning: " << w << '\n';
    SystemReference ref;
    ref.omega_a = eig.frequency(0, 1);
    ref.mu = std::abs(transition(eig, 0, 1).dipole);
    if (eig.size() >= 3) ref.omega_a3 = eig.frequency(0, 2);
    ref.energies = eig.energies;
    return {std::move(sys), std::move(pot), std::move(eig), std::move(ref)};
}

std::string wells_note(const TdseSystem& s) {
    std::string out = "wells (a,b,center): ";
    for (const auto& w : s.wells) {
        std::ostringstream one;
        one.precision(12);
        one << w.a << "," << w.b << "," << w.center << "; ";
        out += one.str();
    }
    return out + "\n";
}

int run_eigen(const Common& c, std::ostream& out, std::ostream& err) {
    const auto cfg = load(c);
    const auto g = prepare_grid(cfg, static_cast<std::size_t>(cfg.integer("system.n_levels")), err);
    const Outputs o(cfg, out);
    const auto h = header("eigen", &cfg, wells_note(g.system) + reference_notes(g.ref));
    o.write("_eigen.csv", [&](std::ostream& f) { write_eigen_csv(f, g.eig, h); });
    o.write("_dipoles.csv", [&](std::ostream& f) { write_dipoles_csv(f, g.eig, h); });
    o.write("_potential.csv", [&](std::ostream& f) { write_potential_csv(f, g.potential, h); });
    o.script("_eigen.gp", PlotKind::eigen, "_eigen.csv", "bound levels");
    out.precision(10);
    for (std::size_t k = 0; k < g.eig.size(); ++k) out << "E" << k << " = " << g.eig.energies[k] << " a.u.\n";
    out << "omega_a = " << g.ref.omega_a << " a.u., mu = " << g.ref.mu << " a.u.\n";
    return kExitOk;
}

int run_propagate(const Common& c, bool density, std::ostream& out, std::ostream& err) {
    auto cfg = load(c);
    auto g = prepare_grid(cfg, static_cast<std::size_t>(cfg.integer("system.n_levels")), err);
    const auto pulse = resolve_pulse(cfg, g.ref);
    if (density && cfg.integer("propagation.density_stride") == 0) {
        // Roughly 400 snapshots over the pulse.
        const auto steps = static_cast<long long>(std::llround(pulse.duration() / cfg.real("propagation.dt")));
        cfg.set("propagation.density_stride", std::to_string(std::max<long long>(1, steps / 400)));
        g.system.propagation = resolve_propagation(cfg);
    }
    const auto psi0 = Wavefunction::from_real(g.system.grid, g.eig.states[0]);
    const auto result = propagate(psi0, g.potential, pulse, g.system.propagation);
    const auto notes = wells_note(g.system) + reference_notes(g.ref) + pulse_notes(pulse) +
                       "dt_used_au = " + std::to_string(result.dt) + "\n" +
                       (result.depleted ? "depleted at t_au = " + std::to_string(result.depletion_time) + "\n" : "");
    const auto h = header(density ? "density" : "propagate", &cfg, notes);
    const Outputs o(cfg, out);
    o.write("_series.csv", [&](std::ostream& f) { write_time_series_csv(f, result.series, h); });
    o.script("_series.gp", PlotKind::time_series, "_series.csv", "dipole and norm");
    if (!density) {
        const auto spec = compute_spectrum(result.series, pulse.omega_d(), resolve_spectrum(cfg));
        write_spectrum_products(o, spec, peak_window(cfg), pulse.e_peak(), h);
    }
    if (result.density) {
        const auto& movie = *result.density;
        nlohmann::json meta = {{"command", density ? "density" : "propagate"}, {"header", h}};
        std::size_t bytes = 0;
        o.write("_density.bin", [&](std::ostream& f) { bytes = write_density_binary(f, movie, meta); });
        const double dts = movie.n_t() > 1 ? movie.times[1] - movie.times[0] : 1.0;
        o.script("_density.gp", PlotKind::density, "_density.bin", "|psi(x,t)|^2",
                 {{"header_bytes", bytes}, {"n_x", movie.n_x}, {"n_t", movie.n_t()}, {"x_min", movie.x_min},
                  {"dx", movie.dx}, {"t0", movie.n_t() ? movie.times[0] : 0.0}, {"dt_snapshot", dts}});
    }
    out << "final norm = " << result.series.norm.back() << (result.depleted ? " (depleted)" : "") << '\n';
    return kExitOk;
}

int run_spectrum(const Common& c, const std::string& input, double omega_d, const std::string& window,
                 const std::string& source, std::ostream& out) {
    SpectrumOptions opts;
    PeakWindow pw;
    std::string dir = ".", prefix = "hhgsim";
    std::string cfg_text;
    if (!c.config_path.empty()) {
        const auto cfg = load(c);
        opts = resolve_spectrum(cfg);
        pw = peak_window(cfg);
        dir = cfg.text("output.dir");
        prefix = cfg.text("output.prefix");
        cfg_text = "effective config:\n" + serialize_config(cfg);
    } else if (!c.sets.empty()) {
        throw ValidationError("--set needs --config for the spectrum command");
    }
    if (!c.out_dir.empty()) dir = c.out_dir;
    if (!c.prefix.empty()) prefix = c.prefix;
    if (!window.empty()) opts.window = parse_window(window);
    if (!source.empty()) opts.source = parse_source(source);
    std::ifstream in(input);
    if (!in) throw ValidationError("cannot open time series '" + input + "'");
    const auto series = read_time_series_csv(in);
    const auto spec = compute_spectrum(series, omega_d, opts);
    std::ostringstream notes;
    notes.precision(12);
    notes << "input = " << input << "\nomega_d_au = " << omega_d << "\nwindow = " << to_string(opts.window)
          << "\nsource = " << to_string(opts.source) << "\nfloor_decades = " << opts.floor_decades << "\n";
    const Outputs o(dir, prefix, out);
    write_spectrum_products(o, spec, pw, std::numeric_limits<double>::quiet_NaN(),
                            header("spectrum", nullptr, notes.str() + cfg_text));
    return kExitOk;
}

int run_tls(const Common& c, std::ostream& out, std::ostream& err) {
    const auto cfg = load(c);
    SystemReference ref;
    std::string notes;
    if (cfg.text("system.kind") == "tls") {
        ref = reference_for(resolve_system(cfg));
    } else {
        const auto g = prepare_grid(cfg, 2, err);
        ref = g.ref;
        notes = "two-level parameters taken from levels 0 and 1 of the grid system\n";
    }
    const TlsParams tls{ref.omega_a, ref.mu};
    const auto pulse = resolve_pulse(cfg, ref);
    const auto run = tls_propagate(tls, pulse, cfg.real("propagation.dt"),
                                   static_cast<std::size_t>(cfg.integer("propagation.record_stride")));
    const auto h = header("tls", &cfg, notes + reference_notes(ref) + pulse_notes(pulse));
    const Outputs o(cfg, out);
    o.write("_series.csv", [&](std::ostream& f) { write_time_series_csv(f, run.series, h); });
    o.script("_series.gp", PlotKind::time_series, "_series.csv", "two-level dipole");
    auto opts = resolve_spectrum(cfg);
    const auto spec = compute_spectrum(run.series, pulse.omega_d(), opts);
    write_spectrum_products(o, spec, peak_window(cfg), pulse.e_peak(), h);
    return kExitOk;
}

struct PredictArgs {
    double wa = 0.0, wd = 0.0, mu = 0.0, amp_min = 0.0, amp_max = 0.0;
    std::optional<double> wa3;
    std::size_t rows = 64;
    int max_n = 3;
    std::string formulas = "odd-harmonic,carrier-wave,odd-centered";
    std::string output = "predict.csv";
};

int run_predict(const PredictArgs& a, std::ostream& out) {
    require(a.wa > 0.0 && a.wd > 0.0 && a.mu > 0.0, "--wa, --wd and --mu must be positive");
    require(a.amp_max > a.amp_min && a.amp_min >= 0.0, "need 0 <= --amp-min < --amp-max");
    require(a.rows >= 2, "--rows must be at least 2");
    require(a.max_n >= 0, "--max-n must be non-negative");
    const double wa3 = a.wa3.value_or(2.0 * a.wa);
    std::vector<std::string> wanted;
    {
        std::istringstream in(a.formulas);
        std::string f;
        while (std::getline(in, f, ',')) {
            if (f != "odd-harmonic" && f != "carrier-wave" && f != "odd-centered" && f != "linear")
                throw ValidationError("unknown formula '" + f + "'");
            wanted.push_back(f);
        }
    }
    const auto want = [&](const char* f) { return std::find(wanted.begin(), wanted.end(), f) != wanted.end(); };
    const TlsParams tls{a.wa, a.mu}, tls3{wa3, a.mu};
    std::vector<PredictionRow> rows;
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double e = a.amp_min + (a.amp_max - a.amp_min) * static_cast<double>(k) / static_cast<double>(a.rows - 1);
        const double r = rabi_frequency(a.mu, e);
        const auto add = [&](const SidebandPrediction& p) {
            rows.push_back({e, r, p.n, p.lower / a.wd, p.upper / a.wd, to_string(p.formula)});
        };
        for (int n = 0; n <= a.max_n; ++n) {
            if (want("odd-harmonic")) {
                const double h = odd_harmonic(a.wd, n) / a.wd;
                rows.push_back({e, r, n, h, h, "odd-harmonic"});
            }
            if (want("carrier-wave") && n >= 1) add(carrier_wave_sidebands(tls, a.wd, r, n));
            if (want("odd-centered")) add(odd_centered_sidebands(tls3, a.wd, r, n));
            if (want("linear")) add(linear_sidebands(tls, a.wd, r, n));
        }
    }
    std::ostringstream notes;
    notes.precision(12);
    notes << "omega_a_au = " << a.wa << "\nomega_d_au = " << a.wd << "\nmu_au = " << a.mu << "\nomega_a3_au = " << wa3
          << (a.wa3 ? "" : " (default 2 omega_a)") << "\nformulas = " << a.formulas << "\n";
    const auto p = std::filesystem::path(a.output);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    {
        std::ofstream f(a.output, std::ios::binary);
        if (!f) throw RuntimeFailure("cannot open '" + a.output + "' for writing");
        write_predictions_csv(f, rows, header("predict", nullptr, notes.str()));
    }
    out << "wrote " << a.output << '\n';
    const auto script = p.parent_path() / (p.stem().string() + ".gp");
    std::ofstream g(script, std::ios::binary);
    g << plot_script(PlotKind::predictions, p.filename().string(), "predicted sidebands");
    out << "wrote " << script.string() << '\n';
    return kExitOk;
}

int run_sweep_cmd(const Common& c, std::ostream& out, std::ostream& err) {
    const auto cfg = load(c);
    const auto system = resolve_system(cfg);
    const auto ref = reference_for(system);
    auto sc = resolve_sweep(cfg, ref);
    sc.system = system;
    const auto map = run_sweep(sc);
    for (std::size_t k = 0; k < map.rows(); ++k)
        if (!map.row_ok[k]) err << "row " << k << " failed: " << map.row_errors[k] << '\n';
    const auto preds = predictions_for(map, resolve_predictions(cfg));
    const auto tracks = extract_tracks(map, preds, cfg.real("sweep.tolerance_order"), cfg.real("spectrum.min_prominence_db"));
    const double wa = ref.omega_a;
    const auto report = compare_tracks(tracks, preds, cfg.real("sweep.compare_min_over_wa") * wa,
                                       cfg.real("sweep.compare_max_over_wa") * wa);
    std::string notes = reference_notes(ref);
    if (const auto* t = std::get_if<TdseSystem>(&system)) notes = wells_note(*t) + notes;
    const auto h = header("sweep", &cfg, notes);
    const Outputs o(cfg, out);
    o.write("_map.bin", [&](std::ostream& f) { write_map_binary(f, map, {{"command", "sweep"}, {"header", h}}); });
    o.write("_map.csv", [&](std::ostream& f) { write_map_csv(f, map, h); });
    o.write("_tracks.csv", [&](std::ostream& f) { write_tracks_csv(f, tracks, wa, h); });
    o.write("_report.csv", [&](std::ostream& f) { write_report_csv(f, report, h); });
    o.script("_map.gp", PlotKind::map, "_map.csv", "log10 D over (order, Omega_R)");
    out.precision(4);
    for (const auto& f : report.families)
        out << f.name << ": rms " << f.rms << " orders, coverage " << f.coverage << " (" << f.detected_rows << "/"
            << f.expected_rows << " rows)\n";
    return kExitOk;
}

int run_fit_dipole(const std::vector<std::string>& files, double omega_d, std::optional<double> min_off,
                   std::optional<double> max_off, const std::string& side, std::ostream& out) {
    std::vector<PeakRecord> records;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw ValidationError("cannot open peaks file '" + f + "'");
        const auto r = read_peaks_csv(in);
        records.insert(records.end(), r.begin(), r.end());
    }
    const auto pts = sideband_points(records, omega_d, min_off.value_or(0.05 * omega_d), max_off.value_or(omega_d), side);
    const double mu = fit_dipole(pts, omega_d);
    out.precision(10);
    out << "points = " << pts.size() << "\nmu_au = " << mu << '\n';
    return kExitOk;
}

}  // namespace

std::vector<DipoleFitPoint> sideband_points(std::span<const PeakRecord> records, double omega_d, double min_offset,
                                            double max_offset, const std::string& side) {
    require(side == "upper" || side == "lower" || side == "both", "side must be upper, lower or both");
    require(max_offset > min_offset && min_offset >= 0.0, "need 0 <= min_offset < max_offset");
    std::map<double, std::pair<const PeakRecord*, const PeakRecord*>> best;  // e_peak -> (lower, upper)
    for (const auto& r : records) {
        if (!std::isfinite(r.e_peak)) continue;
        const double off = r.peak.omega - omega_d;
        if (std::abs(off) < min_offset || std::abs(off) > max_offset) continue;
        auto& slot = best[r.e_peak];
        auto*& cur = off > 0 ? slot.second : slot.first;
        if (cur == nullptr || r.peak.prominence_db > cur->peak.prominence_db) cur = &r;
    }
    std::vector<DipoleFitPoint> pts;
    for (const auto& [e, pair] : best) {
        if (side != "upper" && pair.first) pts.push_back({e, pair.first->peak.omega});
        if (side != "lower" && pair.second) pts.push_back({e, pair.second->peak.omega});
    }
    return pts;
}

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"hhgsim: strong-field TDSE and two-level harmonic spectra"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hhgsim 0.1.0");

    Common common;
    auto* eigen = app.add_subcommand("eigen", "bound levels and dipoles of the configured wells");
    add_common(eigen, common, true);
    auto* prop = app.add_subcommand("propagate", "time series and spectrum of one pulse");
    add_common(prop, common, true);
    auto* dens = app.add_subcommand("density", "|psi(x,t)|^2 movie of one pulse");
    add_common(dens, common, true);
    auto* tls = app.add_subcommand("tls", "two-level run with the configured pulse");
    add_common(tls, common, true);
    auto* sweep = app.add_subcommand("sweep", "amplitude sweep, peak tracks and comparison report");
    add_common(sweep, common, true);

    auto* spec = app.add_subcommand("spectrum", "spectrum and peaks of a time-series CSV");
    add_common(spec, common, false);
    std::string input, window, source;
    double spec_wd = 0.0;
    spec->add_option("-i,--input", input, "time-series CSV")->required()->check(CLI::ExistingFile);
    spec->add_option("--omega-d", spec_wd, "carrier frequency (a.u.)")->required();
    spec->add_option("--window", window, "rectangular or hann");
    spec->add_option("--source", source, "dipole or acceleration");

    PredictArgs pa;
    auto* pred = app.add_subcommand("predict", "analytic sideband curves over an amplitude range");
    pred->add_option("--wa", pa.wa, "transition frequency omega_a (a.u.)")->required();
    pred->add_option("--wd", pa.wd, "carrier frequency omega_d (a.u.)")->required();
    pred->add_option("--mu", pa.mu, "transition dipole (a.u.)")->required();
    pred->add_option("--amp-max", pa.amp_max, "largest field amplitude (a.u.)")->required();
    pred->add_option("--amp-min", pa.amp_min, "smallest field amplitude (a.u.)");
    pred->add_option("--wa3", pa.wa3, "gap for the odd-centered formula (default 2 omega_a)");
    pred->add_option("--rows", pa.rows, "amplitude samples");
    pred->add_option("--max-n", pa.max_n, "highest index n");
    pred->add_option("--formulas", pa.formulas, "comma list: odd-harmonic, carrier-wave, odd-centered, linear");
    pred->add_option("-o,--output", pa.output, "output CSV");

    std::vector<std::string> peak_files;
    double fit_wd = 0.0;
    std::optional<double> min_off, max_off;
    std::string side = "both";
    auto* fit = app.add_subcommand("fit-dipole", "transition dipole from linear-regime sideband peaks");
    fit->add_option("-p,--peaks", peak_files, "peaks CSV files")->required()->check(CLI::ExistingFile);
    fit->add_option("--omega-d", fit_wd, "carrier frequency (a.u.)")->required();
    fit->add_option("--min-offset", min_off, "smallest |omega - omega_d| considered (default 0.05 omega_d)");
    fit->add_option("--max-offset", max_off, "largest |omega - omega_d| considered (default omega_d)");
    fit->add_option("--side", side, "upper, lower or both")->check(CLI::IsMember({"upper", "lower", "both"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << app.version() << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (eigen->parsed()) return run_eigen(common, out, err);
        if (prop->parsed()) return run_propagate(common, false, out, err);
        if (dens->parsed()) return run_propagate(common, true, out, err);
        if (tls->parsed()) return run_tls(common, out, err);
        if (sweep->parsed()) return run_sweep_cmd(common, out, err);
        if (spec->parsed()) return run_spectrum(common, input, spec_wd, window, source, out);
        if (pred->parsed()) return run_predict(pa, out);
        if (fit->parsed()) return run_fit_dipole(peak_files, fit_wd, min_off, max_off, side, out);
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime failure: " << e.what() << '\n';
        return kExitRuntime;
    }
    err << app.help();
    return kExitUsage;
}

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_dispatch(args, out, err);
}

}  // namespace hhg
