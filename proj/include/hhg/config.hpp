#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hhg/drive.hpp"
#include "hhg/potential.hpp"
#include "hhg/propagator.hpp"
#include "hhg/spectra.hpp"
#include "hhg/sweep.hpp"

namespace hhg {

enum class ValueType { real, integer, boolean, text, wells };

using ConfigValue = std::variant<double, long long, bool, std::string, std::vector<WellSpec>>;

struct ConfigEntry {
    ConfigValue value;
    bool explicit_value = false;
    std::size_t line = 0;  ///< 0 for defaults
};

/// Schema entry for one `section.key`.
struct ConfigKey {
    std::string name;
    ValueType type;
    std::optional<ConfigValue> fallback;  ///< default, if any
    std::vector<std::string> choices;     ///< allowed values for enumerated text keys
    std::string help;
};

/// The closed key schema, in canonical output order.
const std::vector<ConfigKey>& config_schema();

/// Flat `section.key = value` configuration after validation and defaulting.
class RunConfig {
public:
    bool has(const std::string& key) const;
    bool is_explicit(const std::string& key) const;
    double real(const std::string& key) const;
    long long integer(const std::string& key) const;
    bool boolean(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    const std::vector<WellSpec>& wells(const std::string& key) const;
    std::size_t line_of(const std::string& key) const;

    /// Overrides (or adds) a value as if it had been written explicitly.
    void set(const std::string& key, const std::string& value);

    const std::map<std::string, ConfigEntry>& entries() const { return entries_; }

    friend bool operator==(const RunConfig& a, const RunConfig& b);

private:
    friend RunConfig parse_config(const std::string& text);
    friend void validate_config(RunConfig& config);
    std::map<std::string, ConfigEntry> entries_;
    const ConfigEntry& entry(const std::string& key) const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Cross-key checks; parse_config and RunConfig::set call it.
void validate_config(RunConfig& config);

/// Explicit keys as `key = value` lines, defaults as `# key = value (default)` comments,
/// so the text re-parses to an equal config.
std::string serialize_config(const RunConfig& config);

std::string format_value(const ConfigValue& value);

/// Grid-based system described by the config, with the well separation tuned if requested.
TdseSystem resolve_tdse(const RunConfig& config);
SweepSystem resolve_system(const RunConfig& config);
/// omega_d and e_peak may be given relative to the system reference.
Pulse resolve_pulse(const RunConfig& config, const SystemReference& reference);
double resolve_omega_d(const RunConfig& config, const SystemReference& reference);
Envelope resolve_envelope(const RunConfig& config);
PropagationConfig resolve_propagation(const RunConfig& config);
SpectrumOptions resolve_spectrum(const RunConfig& config);
SweepConfig resolve_sweep(const RunConfig& config, const SystemReference& reference);
PredictionSet resolve_predictions(const RunConfig& config);

}  // namespace hhg
