#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hhg/grid.hpp"
#include "hhg/potential.hpp"

namespace hhg {

/// Lowest eigenpairs of H_a = -1/2 d^2/dx^2 + V on a grid (3-point kinetic stencil,
/// Dirichlet walls just outside the grid).
struct EigenSet {
    Grid grid;
    std::vector<double> energies;             ///< ascending (a.u.)
    std::vector<std::vector<double>> states;  ///< dx-normalized real eigenvectors
    std::vector<bool> bound;                  ///< energy < 0
    std::vector<std::vector<double>> dipoles; ///< mu_jk = dx * sum x phi_j phi_k
    double ionization_threshold = 0.0;        ///< -E_0
    std::vector<std::string> warnings;

    std::size_t size() const { return energies.size(); }
    /// E_k - E_j
    double frequency(std::size_t j, std::size_t k) const { return energies.at(k) - energies.at(j); }
};

struct EigenOptions {
    /// Fail if fewer than the requested number of negative-energy states exist.
    bool require_bound = true;
    /// Warn when a state's amplitude at either grid edge exceeds this.
    double boundary_tolerance = 1e-6;
    std::size_t inverse_iterations = 4;
};

EigenSet solve_bound_states(const Potential& potential, std::size_t n_levels, const EigenOptions& options = {});

struct Transition {
    double frequency;  ///< E_k - E_j (a.u.)
    double dipole;     ///< <phi_j|x|phi_k> (a.u.), sign follows the eigenvector phase convention
};

/// Requires j < k < eigenset.size().
Transition transition(const EigenSet& eigenset, std::size_t j, std::size_t k);

/// <phi|H_a|phi> / <phi|phi> with the same discretization the solver uses.
double rayleigh_quotient(const Potential& potential, std::span<const double> state);

/// Number of eigenvalues of the discretized H_a strictly below `energy` (Sturm count).
std::size_t count_levels_below(const Potential& potential, double energy);

/// Separation of `count` equally spaced identical wells for which E_1 - E_0 equals
/// `target_splitting`, found by bisection on [sep_lo, sep_hi]. sep_hi is capped so the
/// wells span at most 70% of the grid.
double tune_well_separation(std::size_t count, double a, double b, double target_splitting, const Grid& grid,
                            double sep_lo = 0.5, double sep_hi = 30.0);

}  // namespace hhg
