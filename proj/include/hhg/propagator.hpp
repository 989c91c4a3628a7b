#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hhg/drive.hpp"
#include "hhg/grid.hpp"
#include "hhg/potential.hpp"

namespace hhg {

struct PropagationConfig {
    double dt = 0.02;
    bool mask_enabled = true;
    double mask_fraction = 0.1;    ///< share of the grid covered by the mask on each edge
    double mask_exponent = 0.125;  ///< q in sin^q
    std::size_t record_stride = 1;
    std::size_t density_stride = 0;  ///< 0 disables density snapshots
    double norm_floor = 1e-3;        ///< below this the run is flagged as depleted

    void validate() const;
};

/// Observables sampled on a uniform time grid.
struct TimeSeries {
    std::vector<double> times;
    std::vector<double> field;
    std::vector<double> norm;
    std::vector<double> dipole;  ///< <x>
    std::vector<double> accel;   ///< d^2<x>/dt^2 (Ehrenfest form)

    std::size_t size() const { return times.size(); }
    void reserve(std::size_t n);
    void push(double t, double e, double n, double d, double a);
};

/// |psi(x, t)|^2 snapshots, row-major (time x position).
struct DensityMovie {
    double x_min = 0.0;
    double dx = 0.0;
    std::size_t n_x = 0;
    std::vector<double> times;
    std::vector<double> data;

    std::size_t n_t() const { return times.size(); }
    std::span<const double> row(std::size_t k) const { return {data.data() + k * n_x, n_x}; }
};

struct PropagationResult {
    TimeSeries series;
    std::optional<DensityMovie> density;
    bool depleted = false;
    double depletion_time = std::numeric_limits<double>::quiet_NaN();
    std::size_t steps = 0;
    double dt = 0.0;  ///< step actually used: duration / steps
};

/// Multiplicative edge mask: 1 in the interior, sin^q decaying to 0 at the outermost points.
class AbsorbingMask {
public:
    AbsorbingMask(const Grid& grid, double fraction, double exponent);
    AbsorbingMask(const Grid& grid, const PropagationConfig& config)
        : AbsorbingMask(grid, config.mask_fraction, config.mask_exponent) {}

    std::span<const double> factors() const { return factors_; }
    std::size_t band() const { return band_; }
    void apply(Wavefunction& psi) const;

private:
    std::vector<double> factors_;
    std::size_t band_;
};

Wavefunction apply_mask(Wavefunction psi, const AbsorbingMask& mask);

/// Crank-Nicolson stepper for H = -1/2 d^2/dx^2 + V(x) + E x. Owns its workspace,
/// so one instance per concurrently running propagation.
class CrankNicolson {
public:
    CrankNicolson(const Potential& potential, double dt);

    /// Advance psi by dt in place; `field` is E at the step midpoint.
    void step(Wavefunction& psi, double field);
    double dt() const { return dt_; }

private:
    Grid grid_;
    double dt_;
    std::vector<double> diag_;  // 1/dx^2 + V_i
    std::vector<double> xs_;
    std::vector<cplx> cprime_;
    std::vector<cplx> dprime_;
};

/// One Crank-Nicolson step without the mask.
Wavefunction step(const Wavefunction& psi, const Potential& potential, double field_value, double dt);

struct Observables {
    double norm;
    double dipole;      ///< dx * sum x |psi|^2
    double mean_gradient;  ///< dx * sum V'(x) |psi|^2
};

Observables observe(const Wavefunction& psi, const Potential& potential);

/// Evolve psi0 over the whole pulse. Acceleration is -<V'> - E(t) * norm.
PropagationResult propagate(const Wavefunction& psi0, const Potential& potential, const Pulse& pulse,
                            const PropagationConfig& config);

}  // namespace hhg
