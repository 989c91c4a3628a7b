#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hhg/drive.hpp"
#include "hhg/eigensolver.hpp"
#include "hhg/potential.hpp"
#include "hhg/propagator.hpp"
#include "hhg/spectra.hpp"
#include "hhg/tls.hpp"

namespace hhg {

/// Grid-based system: wells on a grid, propagated from the ground state.
struct TdseSystem {
    Grid grid = default_grid();
    std::vector<WellSpec> wells;
    double prefactor = -1.0;
    PropagationConfig propagation;
    std::size_t n_levels = 3;
};

/// Two-level reference system.
struct TlsSystem {
    TlsParams tls;
    double dt = 0.02;
    std::size_t record_stride = 1;
};

using SweepSystem = std::variant<TdseSystem, TlsSystem>;

struct SweepConfig {
    SweepSystem system;
    Pulse pulse{0.057, 0.0, TrapezoidEnvelope{}};  ///< e_peak is replaced per row
    std::vector<double> amplitudes;                ///< e_peak per row (a.u.), strictly increasing
    double order_lo = 0.0;
    double order_hi = 10.0;
    SpectrumOptions spectrum;
    std::size_t workers = 1;

    void validate() const;
};

/// Level structure the sweep is referenced to: w_a = E1 - E0, mu = |<0|x|1>|.
struct SystemReference {
    double omega_a = 0.0;
    double mu = 0.0;
    double omega_a3 = 0.0;  ///< E2 - E0 when a third level was solved, else 0
    std::vector<double> energies;
};

SystemReference reference_for(const SweepSystem& system);

/// log10 D over (amplitude row x harmonic order), restricted to the configured order range.
struct SpectrumMap {
    std::vector<double> amplitudes;
    std::vector<double> rabi;  ///< mu * amplitude
    std::vector<double> order;
    std::vector<double> log_d;  ///< row-major, rows() x cols()
    std::vector<bool> row_ok;
    std::vector<std::string> row_errors;
    std::vector<double> final_norm;
    SystemReference reference;
    double omega_d = 0.0;
    double d_omega = 0.0;
    double floor_decades = 20.0;
    nlohmann::json metadata;

    std::size_t rows() const { return amplitudes.size(); }
    std::size_t cols() const { return order.size(); }
    std::span<const double> row(std::size_t k) const { return {log_d.data() + k * cols(), cols()}; }
    /// A row as a Spectrum (for peak finding).
    Spectrum row_spectrum(std::size_t k) const;
};

SpectrumMap run_sweep(const SweepConfig& config);

enum class Branch {
    odd_harmonic,
    carrier_wave_lower,
    carrier_wave_upper,
    odd_centered_lower,
    odd_centered_upper,
    linear_lower,
    linear_upper,
    unassigned,
};

std::string to_string(Branch b);
/// Branch family name: "odd-harmonic", "carrier-wave", "odd-centered", "linear", "unassigned".
std::string family_of(Branch b);

/// Predicted order of one branch on every map row (NaN where outside the map's order range).
struct PredictionCurve {
    Branch branch = Branch::unassigned;
    int n = 0;
    std::vector<double> rabi;
    std::vector<double> order;
};

struct PredictionSet {
    bool odd_harmonics = true;
    bool carrier_wave = true;
    bool odd_centered = false;  ///< needs reference.omega_a3
    bool linear = false;
    int max_n = 12;
};

std::vector<PredictionCurve> predictions_for(const SpectrumMap& map, const PredictionSet& set);

struct TrackPoint {
    std::size_t row = 0;
    double rabi = 0.0;
    double order = 0.0;
    double predicted = 0.0;  ///< NaN for unassigned peaks
};

/// Detected peaks attached to one predicted branch. The unassigned track collects every
/// peak left over and may hold several points per row.
struct PeakTrack {
    Branch branch = Branch::unassigned;
    int n = 0;
    std::vector<TrackPoint> points;
};

inline constexpr double kDefaultTrackTolerance = 0.15;

/// Per-row peak finding, then greedy nearest-prediction assignment within `tolerance_order`.
std::vector<PeakTrack> extract_tracks(const SpectrumMap& map, std::span<const PredictionCurve> predictions,
                                      double tolerance_order = kDefaultTrackTolerance,
                                      double min_prominence_db = kDefaultProminenceDb);

struct BranchReport {
    std::string name;  ///< branch label (with n) or family name
    double rms = 0.0;  ///< RMS of observed - predicted order
    double coverage = 0.0;
    std::size_t detected_rows = 0;
    std::size_t expected_rows = 0;
    std::size_t points = 0;
};

struct ComparisonReport {
    std::vector<BranchReport> branches;
    std::vector<BranchReport> families;
    const BranchReport* family(const std::string& name) const;
};

/// RMS error and coverage per branch and per family, counting rows with rabi in [rabi_lo, rabi_hi].
ComparisonReport compare_tracks(std::span<const PeakTrack> tracks, std::span<const PredictionCurve> predictions,
                                double rabi_lo, double rabi_hi);

}  // namespace hhg
