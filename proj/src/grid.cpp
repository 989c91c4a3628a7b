#include "hhg/grid.hpp"

#include <cmath>
#include <string>

#include "hhg/errors.hpp"

namespace hhg {

Grid::Grid(double x_min, double x_max, std::size_t n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points), dx_(0.0) {
    require(n_points >= 3, "grid needs at least 3 points, got " + std::to_string(n_points));
    require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
            "grid extents must be finite with x_max > x_min");
    dx_ = (x_max - x_min) / static_cast<double>(n_points - 1);
}

std::vector<double> Grid::coordinates() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
}

Grid default_grid() { return Grid(-200.0, 200.0, 8192); }

Wavefunction::Wavefunction(Grid grid) : grid_(grid), amps_(grid.size(), cplx{0.0, 0.0}) {}

Wavefunction::Wavefunction(Grid grid, std::vector<cplx> amplitudes)
    : grid_(grid), amps_(std::move(amplitudes)) {
    require(amps_.size() == grid_.size(), "amplitude count does not match grid size");
}

Wavefunction Wavefunction::from_real(Grid grid, std::span<const double> values) {
    require(values.size() == grid.size(), "state length does not match grid size");
    std::vector<cplx> amps(values.begin(), values.end());
    return Wavefunction(grid, std::move(amps));
}

double Wavefunction::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s * grid_.dx();
}

double Wavefunction::expectation_x() const {
    double s = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) s += grid_.x(i) * std::norm(amps_[i]);
    return s * grid_.dx();
}

std::vector<double> Wavefunction::density() const {
    std::vector<double> rho(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) rho[i] = std::norm(amps_[i]);
    return rho;
}

void Wavefunction::normalize() {
    const double n = norm();
    if (n <= 0.0) throw ValidationError("cannot normalize a zero wavefunction");
    const double s = 1.0 / std::sqrt(n);
    for (auto& a : amps_) a *= s;
}

}  // namespace hhg
