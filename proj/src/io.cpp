#include "hhg/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "hhg/errors.hpp"
#include "hhg/units.hpp"

namespace hhg {
namespace {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_doubles(std::ostream& out, std::span<const double> values) {
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(values.data()), static_cast<std::streamsize>(values.size_bytes()));
    } else {
        for (double v : values) {
            auto bits = std::bit_cast<std::uint64_t>(v);
            char bytes[8];
            for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
            out.write(bytes, 8);
        }
    }
}

std::size_t write_metadata_line(std::ostream& out, const nlohmann::json& metadata) {
    const std::string line = metadata.dump() + "\n";
    out << line;
    return line.size();
}

std::vector<double> parse_row(const std::string& line, std::size_t expected, const std::string& what) {
    std::vector<double> v;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        double x = 0.0;
        const auto* end = cell.data() + cell.size();
        const auto r = std::from_chars(cell.data(), end, x);
        if (r.ec != std::errc() || r.ptr != end) throw ValidationError(what + ": cannot parse '" + cell + "'");
        v.push_back(x);
    }
    if (v.size() != expected)
        throw ValidationError(what + ": expected " + std::to_string(expected) + " columns, got " +
                              std::to_string(v.size()));
    return v;
}

bool skip_line(const std::string& line) { return line.empty() || line[0] == '#'; }

}  // namespace

void write_comment_block(std::ostream& out, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out << "# " << line << '\n';
}

void write_time_series_csv(std::ostream& out, const TimeSeries& s, const std::string& header) {
    write_comment_block(out, header);
    out << "t_au,field_au,norm,dipole_au,accel_au\n";
    for (std::size_t k = 0; k < s.size(); ++k)
        out << num(s.times[k]) << ',' << num(s.field[k]) << ',' << num(s.norm[k]) << ',' << num(s.dipole[k]) << ','
            << num(s.accel[k]) << '\n';
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s, const std::string& header) {
    write_comment_block(out, header);
    out << "omega_au,order,log10_D\n";
    for (std::size_t k = 0; k < s.size(); ++k) out << num(s.omega[k]) << ',' << num(s.order[k]) << ',' << num(s.log_d[k]) << '\n';
}

void write_peaks_csv(std::ostream& out, const PeakSet& peaks, double e_peak, const std::string& header) {
    write_comment_block(out, header);
    out << "e_peak_au,omega_au,order,log10_height,prominence_db\n";
    for (const auto& p : peaks.peaks)
        out << num(e_peak) << ',' << num(p.omega) << ',' << num(p.order) << ',' << num(p.log_height) << ','
            << num(p.prominence_db) << '\n';
}

void write_eigen_csv(std::ostream& out, const EigenSet& set, const std::string& header) {
    write_comment_block(out, header);
    out << "level,energy_au,energy_eV\n";
    for (std::size_t k = 0; k < set.size(); ++k)
        out << k << ',' << num(set.energies[k]) << ',' << num(set.energies[k] * units::kHartreeEv) << '\n';
}

void write_dipoles_csv(std::ostream& out, const EigenSet& set, const std::string& header) {
    write_comment_block(out, header);
    out << "j,k,frequency_au,dipole_au\n";
    for (std::size_t j = 0; j < set.size(); ++j)
        for (std::size_t k = j + 1; k < set.size(); ++k)
            out << j << ',' << k << ',' << num(set.frequency(j, k)) << ',' << num(set.dipoles[j][k]) << '\n';
}

void write_potential_csv(std::ostream& out, const Potential& potential, const std::string& header) {
    write_comment_block(out, header);
    out << "x_au,V_au\n";
    const auto& g = potential.grid();
    const auto v = potential.values();
    for (std::size_t i = 0; i < g.size(); ++i) out << num(g.x(i)) << ',' << num(v[i]) << '\n';
}

void write_predictions_csv(std::ostream& out, std::span<const PredictionRow> rows, const std::string& header) {
    write_comment_block(out, header);
    out << "e_peak_au,rabi_au,n,lower_order,upper_order,formula\n";
    for (const auto& r : rows)
        out << num(r.e_peak) << ',' << num(r.rabi) << ',' << r.n << ',' << num(r.lower_order) << ','
            << num(r.upper_order) << ',' << r.formula << '\n';
}

void write_map_csv(std::ostream& out, const SpectrumMap& map, const std::string& header) {
    write_comment_block(out, header);
    out << "rabi_over_wa,order,log10_D\n";
    const double wa = map.reference.omega_a;
    for (std::size_t r = 0; r < map.rows(); ++r) {
        const auto row = map.row(r);
        for (std::size_t c = 0; c < map.cols(); ++c) out << num(map.rabi[r] / wa) << ',' << num(map.order[c]) << ',' << num(row[c]) << '\n';
        out << '\n';  // scan separator for gnuplot
    }
}

void write_tracks_csv(std::ostream& out, std::span<const PeakTrack> tracks, double omega_a, const std::string& header) {
    write_comment_block(out, header);
    out << "branch,n,row,rabi_au,rabi_over_wa,order,predicted_order\n";
    for (const auto& t : tracks)
        for (const auto& p : t.points)
            out << to_string(t.branch) << ',' << t.n << ',' << p.row << ',' << num(p.rabi) << ',' << num(p.rabi / omega_a)
                << ',' << num(p.order) << ',' << num(p.predicted) << '\n';
}

void write_report_csv(std::ostream& out, const ComparisonReport& report, const std::string& header) {
    write_comment_block(out, header);
    out << "scope,name,rms_order,coverage,detected_rows,expected_rows,points\n";
    const auto emit = [&](const char* scope, const BranchReport& b) {
        out << scope << ',' << b.name << ',' << num(b.rms) << ',' << num(b.coverage) << ',' << b.detected_rows << ','
            << b.expected_rows << ',' << b.points << '\n';
    };
    for (const auto& b : report.families) emit("family", b);
    for (const auto& b : report.branches) emit("branch", b);
}

std::size_t write_density_binary(std::ostream& out, const DensityMovie& movie, nlohmann::json metadata) {
    metadata["format"] = {{"dtype", "float64"}, {"endian", "little"}, {"order", "row-major"},
                          {"shape", {movie.n_t(), movie.n_x}}, {"axes", {"time", "x"}}};
    metadata["x_min"] = movie.x_min;
    metadata["dx"] = movie.dx;
    metadata["times"] = movie.times;
    const auto bytes = write_metadata_line(out, metadata);
    write_doubles(out, movie.data);
    return bytes;
}

std::size_t write_map_binary(std::ostream& out, const SpectrumMap& map, nlohmann::json metadata) {
    metadata["format"] = {{"dtype", "float64"}, {"endian", "little"}, {"order", "row-major"},
                          {"shape", {map.rows(), map.cols()}}, {"axes", {"amplitude", "order"}}};
    metadata["sweep"] = map.metadata;
    metadata["amplitudes_au"] = map.amplitudes;
    metadata["rabi_au"] = map.rabi;
    metadata["order"] = map.order;
    metadata["row_ok"] = map.row_ok;
    metadata["row_errors"] = map.row_errors;
    metadata["final_norm"] = map.final_norm;
    const auto bytes = write_metadata_line(out, metadata);
    write_doubles(out, map.log_d);
    return bytes;
}

BinaryBlock read_binary(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("binary file has no metadata line");
    BinaryBlock b;
    try {
        b.metadata = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("bad metadata line: ") + e.what());
    }
    const auto shape = b.metadata.at("format").at("shape");
    std::size_t count = 1;
    for (const auto& d : shape) count *= d.get<std::size_t>();
    b.values.resize(count);
    for (auto& v : b.values) {
        unsigned char bytes[8];
        if (!in.read(reinterpret_cast<char*>(bytes), 8)) throw ValidationError("binary payload is truncated");
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
        v = std::bit_cast<double>(bits);
    }
    return b;
}

TimeSeries read_time_series_csv(std::istream& in) {
    TimeSeries s;
    std::string line;
    bool header = false;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (skip_line(line)) continue;
        if (!header) {
            if (line != "t_au,field_au,norm,dipole_au,accel_au")
                throw ValidationError("time series CSV: unexpected header '" + line + "'");
            header = true;
            continue;
        }
        const auto v = parse_row(line, 5, "time series CSV line " + std::to_string(n));
        s.push(v[0], v[1], v[2], v[3], v[4]);
    }
    if (!header) throw ValidationError("time series CSV: missing header");
    return s;
}

std::vector<PeakRecord> read_peaks_csv(std::istream& in) {
    std::vector<PeakRecord> out;
    std::string line;
    std::size_t n = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++n;
        if (skip_line(line)) continue;
        if (line == "e_peak_au,omega_au,order,log10_height,prominence_db") {
            header = true;
            continue;
        }
        if (!header) throw ValidationError("peaks CSV: missing header before line " + std::to_string(n));
        const auto v = parse_row(line, 5, "peaks CSV line " + std::to_string(n));
        out.push_back({v[0], {v[1], v[2], v[3], v[4]}});
    }
    return out;
}

std::string plot_script(PlotKind kind, const std::string& data_file, const std::string& title,
                        const nlohmann::json& layout) {
    std::ostringstream s;
    s << "# gnuplot script; run: gnuplot -p <this file>\n";
    s << "set title \"" << title << "\"\n";
    if (kind != PlotKind::density)
        s << "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\n";
    switch (kind) {
        case PlotKind::time_series:
            s << "set xlabel 't (a.u.)'\nset ylabel '<x> (a.u.)'\nset y2label 'norm'\nset y2tics\n"
              << "plot '" << data_file << "' using 1:4 with lines title 'dipole', \\\n"
              << "     '' using 1:3 axes x1y2 with lines title 'norm'\n";
            break;
        case PlotKind::spectrum:
            s << "set xlabel 'harmonic order'\nset ylabel 'log10 D'\n"
              << "plot '" << data_file << "' using 2:3 with lines notitle\n";
            break;
        case PlotKind::eigen:
            s << "set xlabel 'level'\nset ylabel 'E (a.u.)'\n"
              << "plot '" << data_file << "' using 1:2 with points pt 7 notitle\n";
            break;
        case PlotKind::predictions:
            s << "set xlabel 'harmonic order'\nset ylabel 'Omega_R (a.u.)'\n"
              << "plot '" << data_file << "' using 4:2 with points pt 7 ps 0.3 title 'lower', \\\n"
              << "     '' using 5:2 with points pt 7 ps 0.3 title 'upper'\n";
            break;
        case PlotKind::map:
            s << "set xlabel 'harmonic order'\nset ylabel 'Omega_R / omega_a'\nset cblabel 'log10 D'\n"
              << "set view map\nset pm3d map\n"
              << "splot '" << data_file << "' using 2:1:3 with pm3d notitle\n";
            break;
        case PlotKind::density: {
            const auto nx = layout.at("n_x").get<std::size_t>();
            const auto nt = layout.at("n_t").get<std::size_t>();
            s << "set xlabel 'x (a.u.)'\nset ylabel 't (a.u.)'\nset cblabel '|psi|^2'\n"
              << "plot '" << data_file << "' binary skip=" << layout.at("header_bytes").get<std::size_t>()
              << " array=(" << nx << "," << nt << ") format='%float64' endian=little"
              << " dx=" << num(layout.at("dx").get<double>()) << " dy=" << num(layout.at("dt_snapshot").get<double>())
              << " origin=(" << num(layout.at("x_min").get<double>()) << "," << num(layout.at("t0").get<double>())
              << ") with image notitle\n";
            break;
        }
    }
    return s.str();
}

}  // namespace hhg
