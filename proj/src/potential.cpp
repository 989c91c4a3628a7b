#include "hhg/potential.hpp"

#include <cmath>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

Potential::Potential(Grid grid, std::vector<WellSpec> wells, double prefactor, std::vector<double> values,
                     std::vector<double> derivative)
    : grid_(grid),
      wells_(std::move(wells)),
      prefactor_(prefactor),
      values_(std::move(values)),
      derivative_(std::move(derivative)) {}

Potential Potential::tabulated(Grid grid, std::vector<double> values, std::vector<double> derivative) {
    require(values.size() == grid.size() && derivative.size() == grid.size(),
            "tabulated potential arrays must match the grid size");
    return Potential(grid, {}, 0.0, std::move(values), std::move(derivative));
}

Potential Potential::zero(Grid grid) {
    return tabulated(grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0));
}

double potential_at(std::span<const WellSpec> wells, double x, double prefactor) {
    double v = 0.0;
    for (const auto& w : wells) {
        const double s = x - w.center;
        v += 1.0 / std::sqrt(w.a * s * s + w.b);
    }
    return prefactor * v;
}

double potential_derivative_at(std::span<const WellSpec> wells, double x, double prefactor) {
    // d/dx (a s^2 + b)^(-1/2) = -a s (a s^2 + b)^(-3/2)
    double dv = 0.0;
    for (const auto& w : wells) {
        const double s = x - w.center;
        const double u = w.a * s * s + w.b;
        dv -= w.a * s / (u * std::sqrt(u));
    }
    return prefactor * dv;
}

Potential build_potential(std::span<const WellSpec> wells, const Grid& grid, double prefactor) {
    require(!wells.empty(), "potential needs at least one well");
    for (std::size_t k = 0; k < wells.size(); ++k) {
        const auto& w = wells[k];
        require(w.a > 0.0 && w.b > 0.0, "well " + std::to_string(k) + ": a and b must be positive");
        require(std::isfinite(w.center), "well " + std::to_string(k) + ": center must be finite");
    }
    require(std::isfinite(prefactor) && prefactor != 0.0, "potential prefactor must be finite and nonzero");

    std::vector<double> values(grid.size());
    std::vector<double> derivative(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        values[i] = potential_at(wells, x, prefactor);
        derivative[i] = potential_derivative_at(wells, x, prefactor);
    }
    return Potential(grid, std::vector<WellSpec>(wells.begin(), wells.end()), prefactor, std::move(values),
                     std::move(derivative));
}

std::vector<WellSpec> equally_spaced_wells(std::size_t count, double a, double b, double separation) {
    require(count >= 1, "need at least one well");
    std::vector<WellSpec> wells(count);
    const double first = -0.5 * separation * static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) wells[k] = {a, b, first + separation * static_cast<double>(k)};
    return wells;
}

}  // namespace hhg
