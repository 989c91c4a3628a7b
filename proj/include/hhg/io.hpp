#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "hhg/eigensolver.hpp"
#include "hhg/potential.hpp"
#include "hhg/propagator.hpp"
#include "hhg/spectra.hpp"
#include "hhg/sweep.hpp"
#include "hhg/tls.hpp"

namespace hhg {

/// Writes `text` as '# '-prefixed comment lines.
void write_comment_block(std::ostream& out, const std::string& text);

// CSV writers. `header` (typically the serialized config plus run notes) goes first as comments.
void write_time_series_csv(std::ostream& out, const TimeSeries& series, const std::string& header);
void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum, const std::string& header);
void write_peaks_csv(std::ostream& out, const PeakSet& peaks, double e_peak, const std::string& header);
void write_eigen_csv(std::ostream& out, const EigenSet& set, const std::string& header);
void write_dipoles_csv(std::ostream& out, const EigenSet& set, const std::string& header);
void write_potential_csv(std::ostream& out, const Potential& potential, const std::string& header);

struct PredictionRow {
    double e_peak;
    double rabi;
    int n;
    double lower_order;
    double upper_order;
    std::string formula;  ///< "odd-harmonic" or a SidebandFormula name
};
void write_predictions_csv(std::ostream& out, std::span<const PredictionRow> rows, const std::string& header);

void write_map_csv(std::ostream& out, const SpectrumMap& map, const std::string& header);
void write_tracks_csv(std::ostream& out, std::span<const PeakTrack> tracks, double omega_a, const std::string& header);
void write_report_csv(std::ostream& out, const ComparisonReport& report, const std::string& header);

// Binary containers: one JSON metadata line, then little-endian float64, row-major.
/// Both return the size of the metadata line in bytes (including the newline).
std::size_t write_density_binary(std::ostream& out, const DensityMovie& movie, nlohmann::json metadata);
std::size_t write_map_binary(std::ostream& out, const SpectrumMap& map, nlohmann::json metadata);

struct BinaryBlock {
    nlohmann::json metadata;
    std::vector<double> values;
};
BinaryBlock read_binary(std::istream& in);

/// Reads a CSV written by write_time_series_csv (comment lines skipped).
TimeSeries read_time_series_csv(std::istream& in);

struct PeakRecord {
    double e_peak;
    Peak peak;
};
/// Reads one or more peaks CSVs concatenated (comment lines and repeated headers skipped).
std::vector<PeakRecord> read_peaks_csv(std::istream& in);

/// Gnuplot script for a CSV or binary product. `layout` carries what the binary density
/// plot needs: header_bytes, n_x, n_t, x_min, dx, t0, dt_snapshot.
enum class PlotKind { time_series, spectrum, eigen, predictions, map, density };
std::string plot_script(PlotKind kind, const std::string& data_file, const std::string& title,
                        const nlohmann::json& layout = {});

}  // namespace hhg
