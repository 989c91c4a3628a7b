#include <doctest.h>

#include <cmath>
#include <vector>

#include "hhg/errors.hpp"
#include "hhg/potential.hpp"

using namespace hhg;

TEST_CASE("grid spacing and coordinates") {
    const Grid g(-10.0, 10.0, 201);
    CHECK(g.dx() == doctest::Approx(0.1));
    CHECK(g.x(0) == -10.0);
    CHECK(g.x(200) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 2), ValidationError);
    CHECK_THROWS_AS(Grid(1.0, -1.0, 10), ValidationError);
}

TEST_CASE("single well matches the closed form and is attractive") {
    const Grid g(-20.0, 20.0, 401);
    const std::vector<WellSpec> w{{1.0, 2.0, 0.0}};
    const auto p = build_potential(w, g);
    for (std::size_t i = 0; i < g.size(); i += 37) {
        const double x = g.x(i);
        CHECK(p.values()[i] == doctest::Approx(-1.0 / std::sqrt(x * x + 2.0)));
    }
    CHECK(p.values()[200] == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("symmetric wells give an even potential and an odd derivative") {
    const Grid g(-30.0, 30.0, 601);
    const auto wells = equally_spaced_wells(2, 0.5, 0.3, 5.0);
    REQUIRE(wells.size() == 2);
    CHECK(wells[0].center == doctest::Approx(-2.5));
    CHECK(wells[1].center == doctest::Approx(2.5));
    const auto p = build_potential(wells, g);
    const auto n = g.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        CHECK(p.values()[i] == doctest::Approx(p.values()[n - 1 - i]).epsilon(1e-12));
        CHECK(p.derivative()[i] == doctest::Approx(-p.derivative()[n - 1 - i]).epsilon(1e-12));
    }
}

TEST_CASE("wells add and the derivative matches finite differences") {
    const Grid g(-15.0, 15.0, 3001);
    const std::vector<WellSpec> a{{1.0, 1.0, -2.0}}, b{{0.3, 0.7, 3.0}}, ab{{1.0, 1.0, -2.0}, {0.3, 0.7, 3.0}};
    const auto pa = build_potential(a, g), pb = build_potential(b, g), pab = build_potential(ab, g);
    for (std::size_t i = 0; i < g.size(); i += 101)
        CHECK(pab.values()[i] == doctest::Approx(pa.values()[i] + pb.values()[i]).epsilon(1e-14));
    const double h = 1e-5;
    for (double x : {-7.3, -2.0, 0.4, 2.9, 8.1}) {
        const double fd = (potential_at(ab, x + h) - potential_at(ab, x - h)) / (2.0 * h);
        CHECK(potential_derivative_at(ab, x) == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("potential validation") {
    const Grid g(-5.0, 5.0, 11);
    CHECK_THROWS_AS(build_potential(std::vector<WellSpec>{}, g), ValidationError);
    CHECK_THROWS_AS(build_potential(std::vector<WellSpec>{{0.0, 1.0, 0.0}}, g), ValidationError);
    CHECK_THROWS_AS(build_potential(std::vector<WellSpec>{{1.0, -1.0, 0.0}}, g), ValidationError);
    CHECK_THROWS_AS(build_potential(std::vector<WellSpec>{{1.0, 1.0, 0.0}}, g, 0.0), ValidationError);
}
