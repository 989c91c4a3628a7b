#include <doctest.h>

#include <sstream>
#include <string>

#include "hhg/config.hpp"
#include "hhg/io.hpp"

using namespace hhg;

TEST_CASE("comment block prefixes each line") {
    std::ostringstream out;
    write_comment_block(out, "a = 1\nb = 2\n");
    CHECK(out.str() == "# a = 1\n# b = 2\n");
}

TEST_CASE("time series round-trips through CSV with the config in the header") {
    const auto cfg = parse_config("system.wells = 1,1,0\npulse.omega_d = 0.057\npulse.e_peak = 0.05\n");
    TimeSeries s;
    for (int k = 0; k < 50; ++k) s.push(0.1 * k, std::sin(0.3 * k), 1.0 - 1e-3 * k, 1.0 / (k + 3.0), -1e-17 * k);
    std::ostringstream out;
    write_time_series_csv(out, s, serialize_config(cfg));
    const auto text = out.str();
    CHECK(text.find("# pulse.e_peak = 0.05") != std::string::npos);
    CHECK(text.find("t_au,field_au,norm,dipole_au,accel_au") != std::string::npos);
    std::istringstream in(text);
    const auto back = read_time_series_csv(in);
    CHECK(back.times == s.times);
    CHECK(back.field == s.field);
    CHECK(back.norm == s.norm);
    CHECK(back.dipole == s.dipole);
    CHECK(back.accel == s.accel);
}

TEST_CASE("binary density container round-trips") {
    DensityMovie m;
    m.x_min = -2.0;
    m.dx = 0.5;
    m.n_x = 3;
    m.times = {0.0, 1.5};
    m.data = {0.1, 0.2, 0.3, 0.4, 0.5, 1e-300};
    std::stringstream buf;
    const auto header_bytes = write_density_binary(buf, m, {{"note", "x"}});
    const auto raw = buf.str();
    CHECK(raw.size() == header_bytes + 6 * sizeof(double));
    CHECK(raw[header_bytes - 1] == '\n');
    const auto block = read_binary(buf);
    CHECK(block.values == m.data);
    CHECK(block.metadata["format"]["shape"] == nlohmann::json::array({2, 3}));
    CHECK(block.metadata["note"] == "x");
    CHECK(block.metadata["dx"].get<double>() == 0.5);
}

TEST_CASE("peaks CSV round-trips and tolerates concatenated files") {
    PeakSet ps;
    ps.peaks = {{0.05, 1.25, -3.5, 42.0}, {0.11, 2.75, -6.25, 12.5}};
    std::ostringstream out;
    write_peaks_csv(out, ps, 0.02, "run one");
    write_peaks_csv(out, ps, 0.03, "run two");
    std::istringstream in(out.str());
    const auto recs = read_peaks_csv(in);
    REQUIRE(recs.size() == 4);
    CHECK(recs[0].e_peak == 0.02);
    CHECK(recs[3].e_peak == 0.03);
    CHECK(recs[1].peak.omega == 0.11);
    CHECK(recs[1].peak.prominence_db == 12.5);
}

TEST_CASE("malformed inputs are rejected") {
    std::istringstream bad_header("x,y\n1,2\n");
    CHECK_THROWS(read_time_series_csv(bad_header));
    std::istringstream bad_binary("not json\n");
    CHECK_THROWS(read_binary(bad_binary));
}

TEST_CASE("gnuplot scripts reference their data") {
    const auto s = plot_script(PlotKind::density, "run_density.bin", "density", {{"header_bytes", 120}, {"n_x", 3}, {"n_t", 2}, {"dx", 0.5}, {"dt_snapshot", 1.5}, {"x_min", -2.0}, {"t0", 0.0}});
    CHECK(s.find("run_density.bin") != std::string::npos);
    CHECK(s.find("skip=120") != std::string::npos);
    CHECK(plot_script(PlotKind::spectrum, "s.csv", "t").find("columnhead") != std::string::npos);
}
