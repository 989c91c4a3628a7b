#include "hhg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hhg/eigensolver.hpp"
#include "hhg/errors.hpp"

namespace hhg {
namespace {

ConfigKey key(std::string name, ValueType type, std::optional<ConfigValue> fallback, std::string help,
              std::vector<std::string> choices = {}) {
    return {std::move(name), type, std::move(fallback), std::move(choices), std::move(help)};
}

std::vector<ConfigKey> build_schema() {
    using V = ValueType;
    return {
        key("system.kind", V::text, std::string("tdse"), "tdse (grid) or tls (two-level model)", {"tdse", "tls"}),
        key("system.wells", V::wells, std::nullopt, "explicit wells 'a,b,center; a,b,center; ...'"),
        key("system.well_count", V::integer, std::nullopt, "number of equally spaced identical wells"),
        key("system.well_a", V::real, 1.0, "shape parameter a of generated wells"),
        key("system.well_b", V::real, 1.0, "softening b of generated wells"),
        key("system.well_separation", V::real, std::nullopt, "center spacing of generated wells (a.u.)"),
        key("system.target_omega_a", V::real, std::nullopt, "tune the spacing so E1 - E0 hits this value (a.u.)"),
        key("system.prefactor", V::real, -1.0, "overall potential prefactor (negative = attractive)"),
        key("system.n_levels", V::integer, 3LL, "bound levels to solve for"),
        key("tls.omega_a", V::real, std::nullopt, "two-level transition frequency (a.u.)"),
        key("tls.mu", V::real, std::nullopt, "two-level transition dipole (a.u.)"),
        key("grid.x_min", V::real, -200.0, "left edge (a.u.)"),
        key("grid.x_max", V::real, 200.0, "right edge (a.u.)"),
        key("grid.n_points", V::integer, 8192LL, "grid points including both edges"),
        key("pulse.omega_d", V::real, std::nullopt, "carrier frequency (a.u.)"),
        key("pulse.omega_d_over_wa", V::real, std::nullopt, "carrier frequency in units of omega_a"),
        key("pulse.e_peak", V::real, std::nullopt, "peak field amplitude (a.u.)"),
        key("pulse.intensity_wcm2", V::real, std::nullopt, "peak intensity (W/cm^2)"),
        key("pulse.rabi_over_wa", V::real, std::nullopt, "peak amplitude as mu * E / omega_a"),
        key("pulse.envelope", V::text, std::string("trapezoid"), "trapezoid or gaussian", {"trapezoid", "gaussian"}),
        key("pulse.n_on", V::real, std::nullopt, "trapezoid ramp-up cycles"),
        key("pulse.n_p", V::real, std::nullopt, "trapezoid plateau cycles"),
        key("pulse.n_off", V::real, std::nullopt, "trapezoid ramp-down cycles"),
        key("pulse.n_fwhm", V::real, std::nullopt, "gaussian FWHM in cycles"),
        key("propagation.dt", V::real, 0.02, "time step (a.u.)"),
        key("propagation.mask", V::boolean, true, "absorbing edge mask on/off"),
        key("propagation.mask_fraction", V::real, 0.1, "mask band per edge as a share of the grid"),
        key("propagation.mask_exponent", V::real, 0.125, "q in the sin^q mask"),
        key("propagation.record_stride", V::integer, 1LL, "record observables every k steps"),
        key("propagation.density_stride", V::integer, 0LL, "density snapshot every k steps (0 = off)"),
        key("propagation.norm_floor", V::real, 1e-3, "norm below which a run is flagged depleted"),
        key("spectrum.window", V::text, std::string("rectangular"), "rectangular or hann", {"rectangular", "hann"}),
        key("spectrum.source", V::text, std::string("dipole"), "dipole or acceleration", {"dipole", "acceleration"}),
        key("spectrum.floor_decades", V::real, 20.0, "dynamic range kept below the maximum"),
        key("spectrum.pad_pow2", V::boolean, false, "zero-pad to a power of two"),
        key("spectrum.min_prominence_db", V::real, 10.0, "peak prominence threshold (dB)"),
        key("spectrum.order_lo", V::real, 0.0, "lowest harmonic order kept"),
        key("spectrum.order_hi", V::real, 10.0, "highest harmonic order kept"),
        key("sweep.rows", V::integer, 64LL, "amplitude rows"),
        key("sweep.rabi_min_over_wa", V::real, 0.0, "first row, Omega_R / omega_a"),
        key("sweep.rabi_max_over_wa", V::real, 4.0, "last row, Omega_R / omega_a"),
        key("sweep.workers", V::integer, 1LL, "worker threads"),
        key("sweep.tolerance_order", V::real, kDefaultTrackTolerance, "track assignment tolerance (orders)"),
        key("sweep.compare_min_over_wa", V::real, 1.5, "comparison window start, Omega_R / omega_a"),
        key("sweep.compare_max_over_wa", V::real, 4.0, "comparison window end, Omega_R / omega_a"),
        key("sweep.formulas", V::text, std::string("odd-harmonic,carrier-wave"),
            "comma list from odd-harmonic, carrier-wave, odd-centered, linear"),
        key("sweep.max_n", V::integer, 12LL, "highest sideband index predicted"),
        key("output.dir", V::text, std::string("."), "output directory"),
        key("output.prefix", V::text, std::string("hhgsim"), "output file stem"),
    };
}

const ConfigKey* find_key(const std::string& name) {
    const auto& schema = config_schema();
    const auto it = std::find_if(schema.begin(), schema.end(), [&](const ConfigKey& k) { return k.name == name; });
    return it == schema.end() ? nullptr : &*it;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string where(std::size_t line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

double parse_real(const std::string& s, bool& ok) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    const auto r = std::from_chars(s.data(), end, v);
    ok = r.ec == std::errc() && r.ptr == end && std::isfinite(v);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

ConfigValue parse_value(const ConfigKey& k, const std::string& raw, std::size_t line) {
    const auto fail = [&](const std::string& what) -> ValidationError {
        return ValidationError(where(line) + k.name + ": expected " + what + ", got '" + raw + "'");
    };
    switch (k.type) {
        case ValueType::real: {
            bool ok = false;
            const double v = parse_real(raw, ok);
            if (!ok) throw fail("a real number");
            return v;
        }
        case ValueType::integer: {
            long long v = 0;
            const auto* end = raw.data() + raw.size();
            const auto r = std::from_chars(raw.data(), end, v);
            if (r.ec != std::errc() || r.ptr != end || v < 0) throw fail("a non-negative integer");
            return v;
        }
        case ValueType::boolean:
            if (raw == "true") return true;
            if (raw == "false") return false;
            throw fail("true or false");
        case ValueType::text:
            if (raw.empty()) throw fail("a value");
            if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), raw) == k.choices.end()) {
                std::string list;
                for (const auto& c : k.choices) list += (list.empty() ? "" : " | ") + c;
                throw fail(list);
            }
            return raw;
        case ValueType::wells: {
            std::vector<WellSpec> wells;
            for (const auto& item : split(raw, ';')) {
                const auto parts = split(item, ',');
                if (parts.size() != 3) throw fail("'a,b,center' triples separated by ';'");
                bool oa = false, ob = false, oc = false;
                WellSpec w{parse_real(parts[0], oa), parse_real(parts[1], ob), parse_real(parts[2], oc)};
                if (!(oa && ob && oc)) throw fail("'a,b,center' triples separated by ';'");
                wells.push_back(w);
            }
            if (wells.empty()) throw fail("at least one well");
            return wells;
        }
    }
    throw fail("a value");
}

std::string format_real(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void check_sweep_formulas(const std::string& text, std::size_t line) {
    for (const auto& f : split(text, ',')) {
        if (f != "odd-harmonic" && f != "carrier-wave" && f != "odd-centered" && f != "linear")
            throw ValidationError(where(line) + "sweep.formulas: unknown formula '" + f + "'");
    }
}

std::vector<std::string> shape_keys(const std::string& envelope) {
    if (envelope == "gaussian") return {"pulse.n_fwhm"};
    return {"pulse.n_on", "pulse.n_p", "pulse.n_off"};
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
    static const std::vector<ConfigKey> schema = build_schema();
    return schema;
}

std::string format_value(const ConfigValue& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) return format_real(v);
            else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
            else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::string>) return v;
            else {
                std::string s;
                for (const auto& w : v) {
                    if (!s.empty()) s += "; ";
                    s += format_real(w.a) + "," + format_real(w.b) + "," + format_real(w.center);
                }
                return s;
            }
        },
        value);
}

const ConfigEntry& RunConfig::entry(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        if (find_key(key) == nullptr) throw ValidationError("unknown config key '" + key + "'");
        throw ValidationError("missing required key " + key);
    }
    return it->second;
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }
bool RunConfig::is_explicit(const std::string& key) const { return has(key) && entries_.at(key).explicit_value; }
double RunConfig::real(const std::string& key) const { return std::get<double>(entry(key).value); }
long long RunConfig::integer(const std::string& key) const { return std::get<long long>(entry(key).value); }
bool RunConfig::boolean(const std::string& key) const { return std::get<bool>(entry(key).value); }
const std::string& RunConfig::text(const std::string& key) const { return std::get<std::string>(entry(key).value); }
const std::vector<WellSpec>& RunConfig::wells(const std::string& key) const {
    return std::get<std::vector<WellSpec>>(entry(key).value);
}
std::size_t RunConfig::line_of(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

void RunConfig::set(const std::string& key, const std::string& value) {
    const auto* k = find_key(key);
    if (k == nullptr) throw ValidationError("unknown config key '" + key + "'");
    entries_[key] = {parse_value(*k, trim(value), 0), true, 0};
    // Shape defaults were filled for an implicit envelope; an explicit change re-derives them.
    if (key == "pulse.envelope")
        for (auto it = entries_.begin(); it != entries_.end();)
            it = (it->first.rfind("pulse.n_", 0) == 0 && !it->second.explicit_value) ? entries_.erase(it) : std::next(it);
    validate_config(*this);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    if (a.entries_.size() != b.entries_.size()) return false;
    for (const auto& [name, e] : a.entries_) {
        const auto it = b.entries_.find(name);
        if (it == b.entries_.end() || it->second.value != e.value || it->second.explicit_value != e.explicit_value)
            return false;
    }
    return true;
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ValidationError(where(line) + "expected 'section.key = value'");
        const std::string name = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto* k = find_key(name);
        if (k == nullptr) throw ValidationError(where(line) + "unknown key '" + name + "'");
        if (cfg.entries_.count(name)) throw ValidationError(where(line) + "duplicate key '" + name + "'");
        cfg.entries_[name] = {parse_value(*k, value, line), true, line};
    }
    validate_config(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void validate_config(RunConfig& cfg) {
    auto& e = cfg.entries_;
    const auto line = [&](const std::string& k) { return where(cfg.line_of(k)); };
    const auto exclusive = [&](std::initializer_list<const char*> keys) {
        const char* first = nullptr;
        for (const char* k : keys) {
            if (!cfg.has(k)) continue;
            if (first != nullptr) throw ValidationError(line(k) + k + " conflicts with " + first + "; give only one");
            first = k;
        }
    };

    for (const auto& k : config_schema())
        if (k.fallback && !e.count(k.name) && k.name.rfind("pulse.n_", 0) != 0) e[k.name] = {*k.fallback, false, 0};

    if (cfg.text("system.kind") == "tdse") {
        for (const char* k : {"tls.omega_a", "tls.mu"})
            if (cfg.has(k)) throw ValidationError(line(k) + k + " is only used when system.kind = tls");
        exclusive({"system.wells", "system.well_count"});
        if (!cfg.has("system.wells") && !cfg.has("system.well_count"))
            throw ValidationError("missing required key system.wells (or system.well_count)");
        if (cfg.has("system.well_count")) {
            if (cfg.integer("system.well_count") < 1)
                throw ValidationError(line("system.well_count") + "system.well_count must be at least 1");
            exclusive({"system.well_separation", "system.target_omega_a"});
            if (cfg.integer("system.well_count") > 1 && !cfg.has("system.well_separation") &&
                !cfg.has("system.target_omega_a"))
                throw ValidationError(line("system.well_count") +
                                      "system.well_count > 1 requires system.well_separation or system.target_omega_a");
        } else {
            for (const char* k : {"system.well_separation", "system.target_omega_a"})
                if (cfg.has(k)) throw ValidationError(line(k) + k + " needs system.well_count instead of system.wells");
        }
    } else {
        for (const char* k : {"system.wells", "system.well_count"})
            if (cfg.has(k)) throw ValidationError(line(k) + k + " is only used when system.kind = tdse");
        for (const char* k : {"tls.omega_a", "tls.mu"})
            if (!cfg.has(k)) throw ValidationError(line("system.kind") + "system.kind = tls requires " + k);
    }

    exclusive({"pulse.omega_d", "pulse.omega_d_over_wa"});
    exclusive({"pulse.e_peak", "pulse.intensity_wcm2", "pulse.rabi_over_wa"});

    const std::string envelope = cfg.text("pulse.envelope");
    const auto needed = shape_keys(envelope);
    for (const char* k : {"pulse.n_on", "pulse.n_p", "pulse.n_off", "pulse.n_fwhm"}) {
        if (cfg.is_explicit(k) && std::find(needed.begin(), needed.end(), k) == needed.end())
            throw ValidationError(line(k) + std::string(k) + " does not apply to pulse.envelope = " + envelope);
    }
    const bool any_shape = std::any_of(needed.begin(), needed.end(), [&](const std::string& k) { return cfg.is_explicit(k); });
    if (cfg.is_explicit("pulse.envelope") || any_shape) {
        for (const auto& k : needed)
            if (!cfg.has(k))
                throw ValidationError(line("pulse.envelope") + "pulse.envelope = " + envelope + " requires " + k);
    } else {
        const TrapezoidEnvelope d;
        e["pulse.n_on"] = {d.n_on, false, 0};
        e["pulse.n_p"] = {d.n_p, false, 0};
        e["pulse.n_off"] = {d.n_off, false, 0};
    }

    check_sweep_formulas(cfg.text("sweep.formulas"), cfg.line_of("sweep.formulas"));
    if (cfg.real("spectrum.order_hi") <= cfg.real("spectrum.order_lo"))
        throw ValidationError(line("spectrum.order_hi") + "spectrum.order_hi must exceed spectrum.order_lo");
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    for (const auto& k : config_schema()) {
        if (!config.has(k.name)) continue;
        const auto& e = config.entries().at(k.name);
        if (e.explicit_value)
            out << k.name << " = " << format_value(e.value) << '\n';
        else
            out << "# " << k.name << " = " << format_value(e.value) << "  (default)\n";
    }
    return out.str();
}

TdseSystem resolve_tdse(const RunConfig& config) {
    require(config.text("system.kind") == "tdse", "config does not describe a grid system (system.kind = tls)");
    TdseSystem s;
    s.grid = Grid(config.real("grid.x_min"), config.real("grid.x_max"),
                  static_cast<std::size_t>(config.integer("grid.n_points")));
    s.prefactor = config.real("system.prefactor");
    s.n_levels = static_cast<std::size_t>(config.integer("system.n_levels"));
    s.propagation = resolve_propagation(config);
    if (config.has("system.wells")) {
        s.wells = config.wells("system.wells");
    } else {
        const auto count = static_cast<std::size_t>(config.integer("system.well_count"));
        const double a = config.real("system.well_a"), b = config.real("system.well_b");
        double sep = 0.0;
        if (config.has("system.well_separation"))
            sep = config.real("system.well_separation");
        else if (count > 1)
            sep = tune_well_separation(count, a, b, config.real("system.target_omega_a"), s.grid);
        s.wells = equally_spaced_wells(count, a, b, sep);
    }
    return s;
}

SweepSystem resolve_system(const RunConfig& config) {
    if (config.text("system.kind") == "tls") {
        TlsSystem t;
        t.tls = {config.real("tls.omega_a"), config.real("tls.mu")};
        t.tls.validate();
        t.dt = config.real("propagation.dt");
        t.record_stride = static_cast<std::size_t>(config.integer("propagation.record_stride"));
        require(t.dt > 0.0, "propagation.dt must be positive");
        require(t.record_stride >= 1, "propagation.record_stride must be at least 1");
        return t;
    }
    return resolve_tdse(config);
}

Envelope resolve_envelope(const RunConfig& config) {
    Envelope env;
    if (config.text("pulse.envelope") == "gaussian")
        env = GaussianEnvelope{config.real("pulse.n_fwhm")};
    else
        env = TrapezoidEnvelope{config.real("pulse.n_on"), config.real("pulse.n_p"), config.real("pulse.n_off")};
    validate_envelope(env);
    return env;
}

double resolve_omega_d(const RunConfig& config, const SystemReference& reference) {
    if (config.has("pulse.omega_d")) return config.real("pulse.omega_d");
    if (config.has("pulse.omega_d_over_wa")) return config.real("pulse.omega_d_over_wa") * reference.omega_a;
    throw ValidationError("missing required key pulse.omega_d (or pulse.omega_d_over_wa)");
}

Pulse resolve_pulse(const RunConfig& config, const SystemReference& reference) {
    const double wd = resolve_omega_d(config, reference);
    double e = 0.0;
    if (config.has("pulse.e_peak"))
        e = config.real("pulse.e_peak");
    else if (config.has("pulse.intensity_wcm2"))
        e = intensity_to_field(config.real("pulse.intensity_wcm2"));
    else if (config.has("pulse.rabi_over_wa")) {
        require(reference.mu > 0.0, "pulse.rabi_over_wa needs a non-zero transition dipole");
        e = config.real("pulse.rabi_over_wa") * reference.omega_a / reference.mu;
    } else
        throw ValidationError("missing required key pulse.e_peak (or pulse.intensity_wcm2, pulse.rabi_over_wa)");
    return Pulse(wd, e, resolve_envelope(config));
}

PropagationConfig resolve_propagation(const RunConfig& config) {
    PropagationConfig p;
    p.dt = config.real("propagation.dt");
    p.mask_enabled = config.boolean("propagation.mask");
    p.mask_fraction = config.real("propagation.mask_fraction");
    p.mask_exponent = config.real("propagation.mask_exponent");
    p.record_stride = static_cast<std::size_t>(config.integer("propagation.record_stride"));
    p.density_stride = static_cast<std::size_t>(config.integer("propagation.density_stride"));
    p.norm_floor = config.real("propagation.norm_floor");
    p.validate();
    return p;
}

SpectrumOptions resolve_spectrum(const RunConfig& config) {
    SpectrumOptions s;
    s.window = parse_window(config.text("spectrum.window"));
    s.source = parse_source(config.text("spectrum.source"));
    s.floor_decades = config.real("spectrum.floor_decades");
    s.pad_pow2 = config.boolean("spectrum.pad_pow2");
    require(s.floor_decades > 0.0, "spectrum.floor_decades must be positive");
    return s;
}

SweepConfig resolve_sweep(const RunConfig& config, const SystemReference& reference) {
    SweepConfig c;
    c.system = resolve_system(config);
    c.pulse = Pulse(resolve_omega_d(config, reference), 0.0, resolve_envelope(config));
    const auto rows = config.integer("sweep.rows");
    require(rows >= 2, "sweep.rows must be at least 2");
    require(reference.mu > 0.0, "sweep needs a non-zero transition dipole to set the Rabi axis");
    const double lo = config.real("sweep.rabi_min_over_wa"), hi = config.real("sweep.rabi_max_over_wa");
    require(hi > lo && lo >= 0.0, "sweep needs 0 <= sweep.rabi_min_over_wa < sweep.rabi_max_over_wa");
    for (long long k = 0; k < rows; ++k) {
        const double r = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(rows - 1);
        c.amplitudes.push_back(r * reference.omega_a / reference.mu);
    }
    c.order_lo = config.real("spectrum.order_lo");
    c.order_hi = config.real("spectrum.order_hi");
    c.spectrum = resolve_spectrum(config);
    c.workers = static_cast<std::size_t>(config.integer("sweep.workers"));
    c.validate();
    return c;
}

PredictionSet resolve_predictions(const RunConfig& config) {
    PredictionSet p{false, false, false, false, static_cast<int>(config.integer("sweep.max_n"))};
    for (const auto& f : split(config.text("sweep.formulas"), ',')) {
        if (f == "odd-harmonic") p.odd_harmonics = true;
        if (f == "carrier-wave") p.carrier_wave = true;
        if (f == "odd-centered") p.odd_centered = true;
        if (f == "linear") p.linear = true;
    }
    return p;
}

}  // namespace hhg
