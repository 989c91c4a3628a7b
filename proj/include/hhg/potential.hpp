#pragma once

#include <span>
#include <vector>

#include "hhg/grid.hpp"

namespace hhg {

/// One soft-Coulomb well, sign * 1/sqrt(a (x - center)^2 + b).
struct WellSpec {
    double a = 1.0;       ///< shape parameter (dimensionless), > 0
    double b = 1.0;       ///< softening (a.u.^2), > 0
    double center = 0.0;  ///< position (a.u.)

    friend bool operator==(const WellSpec&, const WellSpec&) = default;
};

/// Stationary potential sampled on a grid together with its analytic derivative.
class Potential {
public:
    /// Arbitrary tabulated potential; the derivative must be supplied by the caller.
    static Potential tabulated(Grid grid, std::vector<double> values, std::vector<double> derivative);
    /// V = 0 everywhere; the grid edges then act as hard walls.
    static Potential zero(Grid grid);

    const Grid& grid() const { return grid_; }
    const std::vector<WellSpec>& wells() const { return wells_; }
    double prefactor() const { return prefactor_; }
    std::span<const double> values() const { return values_; }
    std::span<const double> derivative() const { return derivative_; }

private:
    friend Potential build_potential(std::span<const WellSpec>, const Grid&, double);
    Potential(Grid grid, std::vector<WellSpec> wells, double prefactor, std::vector<double> values,
              std::vector<double> derivative);

    Grid grid_;
    std::vector<WellSpec> wells_;
    double prefactor_;
    std::vector<double> values_;
    std::vector<double> derivative_;
};

/// Sum of soft-Coulomb wells. The prefactor is the sign convention: -1 gives attractive wells.
Potential build_potential(std::span<const WellSpec> wells, const Grid& grid, double prefactor = -1.0);

/// Value of the well sum at an arbitrary point (off-grid evaluation).
double potential_at(std::span<const WellSpec> wells, double x, double prefactor = -1.0);
double potential_derivative_at(std::span<const WellSpec> wells, double x, double prefactor = -1.0);

/// `count` identical wells centred on the origin, adjacent centres `separation` apart.
std::vector<WellSpec> equally_spaced_wells(std::size_t count, double a, double b, double separation);

}  // namespace hhg
