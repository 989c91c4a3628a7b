#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hhg/errors.hpp"
#include "hhg/sweep.hpp"

using namespace hhg;

namespace {

SweepConfig tls_sweep(std::vector<double> amplitudes, std::size_t workers) {
    SweepConfig cfg;
    cfg.system = TlsSystem{TlsParams{0.04, 1.0}, 0.05, 4};
    cfg.pulse = Pulse(0.04, 0.0, TrapezoidEnvelope{1.0, 50.0, 1.0});
    cfg.amplitudes = std::move(amplitudes);
    cfg.order_lo = 0.0;
    cfg.order_hi = 3.0;
    cfg.workers = workers;
    return cfg;
}

// Map whose rows hold a log-parabolic bump on every predicted order.
SpectrumMap painted_map() {
    SpectrumMap map;
    map.omega_d = 0.028;
    map.reference = {0.04, 2.0, 0.0, {}};
    for (int i = 0; i < 10; ++i) {
        map.rabi.push_back(0.018 + 0.001 * i);
        map.amplitudes.push_back(map.rabi.back() / 2.0);
    }
    for (int i = 1; i <= 2000; ++i) map.order.push_back(0.005 * i);
    map.d_omega = 0.005 * map.omega_d;
    map.row_ok.assign(map.rows(), true);
    map.row_errors.assign(map.rows(), "");
    map.final_norm.assign(map.rows(), 1.0);
    map.log_d.assign(map.rows() * map.cols(), -20.0);
    const auto curves = predictions_for(map, PredictionSet{true, true, false, false, 4});
    for (const auto& c : curves) {
        for (std::size_t k = 0; k < map.rows(); ++k) {
            if (!std::isfinite(c.order[k])) continue;
            for (std::size_t j = 0; j < map.cols(); ++j) {
                const double u = (map.order[j] - c.order[k]) / 0.01;
                double& cell = map.log_d[k * map.cols() + j];
                cell = std::max(cell, -10.0 - u * u);
            }
        }
    }
    return map;
}

}  // namespace

TEST_CASE("two-row TLS sweep shows the resonant triplet") {
    const auto map = run_sweep(tls_sweep({0.0, 0.012}, 1));
    REQUIRE(map.rows() == 2);
    CHECK(map.row_ok[0]);
    CHECK(map.row_ok[1]);
    const auto r0 = map.row(0);
    CHECK(*std::max_element(r0.begin(), r0.end()) == *std::min_element(r0.begin(), r0.end()));
    CHECK(map.rabi[1] == doctest::Approx(0.012));
    const auto peaks = find_peaks(map.row_spectrum(1), 10.0, 0.5, 1.5);
    auto near = [&](double order) {
        return std::any_of(peaks.peaks.begin(), peaks.peaks.end(),
                           [&](const Peak& p) { return std::abs(p.order - order) < 0.04; });
    };
    CHECK(near(1.0));
    CHECK(near(0.7));
    CHECK(near(1.3));
    CHECK(map.metadata.contains("system"));
}

TEST_CASE("sweep output does not depend on the worker count") {
    const std::vector<double> amps{0.002, 0.006, 0.01, 0.014, 0.02};
    const auto a = run_sweep(tls_sweep(amps, 1));
    const auto b = run_sweep(tls_sweep(amps, 3));
    REQUIRE(a.log_d.size() == b.log_d.size());
    CHECK(a.log_d == b.log_d);
    CHECK(a.order == b.order);
}

TEST_CASE("sweep configuration is validated") {
    CHECK_THROWS_AS(run_sweep(tls_sweep({0.01}, 1)), ValidationError);
    CHECK_THROWS_AS(run_sweep(tls_sweep({0.02, 0.01}, 1)), ValidationError);
    CHECK_THROWS_AS(run_sweep(tls_sweep({0.01, 0.02}, 0)), ValidationError);
}

TEST_CASE("painted map is fully assigned with negligible error") {
    const auto map = painted_map();
    const auto curves = predictions_for(map, PredictionSet{true, true, false, false, 4});
    const auto tracks = extract_tracks(map, curves, 0.15, 10.0);
    REQUIRE(tracks.back().branch == Branch::unassigned);
    CHECK(tracks.back().points.empty());
    const auto report = compare_tracks(tracks, curves, 0.0, 1.0);
    for (const auto& f : report.families) {
        CHECK(f.rms <= 1e-3);
        CHECK(f.coverage == 1.0);
    }
    REQUIRE(report.family("carrier-wave") != nullptr);
    CHECK(report.family("carrier-wave")->expected_rows == map.rows());
    CHECK(report.family("linear") == nullptr);

    // Continuity: a branch moves smoothly from row to row.
    for (const auto& t : tracks) {
        for (std::size_t i = 1; i < t.points.size(); ++i) {
            CHECK(t.points[i].row == t.points[i - 1].row + 1);
            CHECK(std::abs(t.points[i].order - t.points[i - 1].order) < 0.1);
        }
    }
}

TEST_CASE("tracks that sit on the predictions score perfectly") {
    const auto map = painted_map();
    const auto curves = predictions_for(map, PredictionSet{true, true, false, false, 4});
    std::vector<PeakTrack> tracks;
    for (const auto& c : curves) {
        PeakTrack t{c.branch, c.n, {}};
        for (std::size_t k = 0; k < c.order.size(); ++k)
            if (std::isfinite(c.order[k])) t.points.push_back({k, c.rabi[k], c.order[k], c.order[k]});
        tracks.push_back(std::move(t));
    }
    const auto report = compare_tracks(tracks, curves, 0.0, 1.0);
    for (const auto& b : report.branches) {
        CHECK(b.rms == 0.0);
        CHECK(b.coverage == 1.0);
    }
    // Only the rows inside the comparison interval count.
    const auto narrow = compare_tracks(tracks, curves, 0.0185, 0.0205);
    CHECK(narrow.family("odd-harmonic")->expected_rows == 2);
}

TEST_CASE("prediction curves carry branch labels") {
    const auto map = painted_map();
    const auto curves = predictions_for(map, PredictionSet{false, false, false, true, 1});
    REQUIRE(curves.size() == 4);
    CHECK(to_string(curves[0].branch) == "linear-lower");
    CHECK(family_of(curves[1].branch) == "linear");
    CHECK(curves[0].order[0] == doctest::Approx((0.028 - 0.018) / 0.028));
}
