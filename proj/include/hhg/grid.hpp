#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hhg {

using cplx = std::complex<double>;

/// Uniform 1D spatial grid. Point i sits at x_min + i*dx, never accumulated.
class Grid {
public:
    Grid(double x_min, double x_max, std::size_t n_points);

    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    std::size_t size() const { return n_; }
    double dx() const { return dx_; }
    double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }

    std::vector<double> coordinates() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double dx_;
};

/// Default simulation grid: [-200, 200] a.u. with 8192 points.
Grid default_grid();

/// Complex amplitudes on a grid. Norm is dx * sum |psi_i|^2.
class Wavefunction {
public:
    explicit Wavefunction(Grid grid);
    Wavefunction(Grid grid, std::vector<cplx> amplitudes);

    /// Real-valued state, e.g. an eigenvector from the bound-state solver.
    static Wavefunction from_real(Grid grid, std::span<const double> values);

    const Grid& grid() const { return grid_; }
    std::span<cplx> amplitudes() { return amps_; }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx& operator[](std::size_t i) { return amps_[i]; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }
    std::size_t size() const { return amps_.size(); }

    double norm() const;
    double expectation_x() const;
    std::vector<double> density() const;
    void normalize();

private:
    Grid grid_;
    std::vector<cplx> amps_;
};

}  // namespace hhg
