#include "hhg/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hhg/errors.hpp"

namespace hhg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric tridiagonal matrix of the discretized H_a: constant off-diagonal.
struct Tridiag {
    std::vector<double> diag;
    double off;
};

Tridiag discretize(const Potential& potential) {
    const double dx = potential.grid().dx();
    const double kin = 1.0 / (dx * dx);
    Tridiag t{std::vector<double>(potential.values().begin(), potential.values().end()), -0.5 * kin};
    for (auto& d : t.diag) d += kin;
    return t;
}

std::size_t sturm_count(const Tridiag& t, double lambda) {
    const double off2 = t.off * t.off;
    const double tiny = kEps * std::abs(t.off) + std::numeric_limits<double>::min();
    std::size_t count = 0;
    double q = t.diag[0] - lambda;
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < t.diag.size(); ++i) {
        q = t.diag[i] - lambda - off2 / q;
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double bisect_eigenvalue(const Tridiag& t, std::size_t k, double lo, double hi) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// LU with partial pivoting of a general tridiagonal matrix, solved in place.
class TridiagLU {
public:
    TridiagLU(std::vector<double> dl, std::vector<double> d, std::vector<double> du)
        : dl_(std::move(dl)), d_(std::move(d)), du_(std::move(du)), du2_(d_.size(), 0.0), ipiv_(d_.size()) {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i < n; ++i) ipiv_[i] = i;
        double scale = 0.0;
        for (double v : d_) scale = std::max(scale, std::abs(v));
        for (double v : du_) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                if (d_[i] != 0.0) {
                    const double fact = dl_[i] / d_[i];
                    dl_[i] = fact;
                    d_[i + 1] -= fact * du_[i];
                }
            } else {
                const double fact = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = fact;
                const double temp = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = temp - fact * d_[i + 1];
                if (i + 2 < n) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -fact * du_[i + 1];
                }
                ipiv_[i] = i + 1;
            }
        }
        // Exact singularity happens when the shift hits an eigenvalue to machine precision.
        const double floor = kEps * std::max(scale, 1.0);
        for (auto& v : d_)
            if (std::abs(v) < floor) v = std::copysign(floor, v == 0.0 ? 1.0 : v);
    }

    void solve(std::vector<double>& b) const {
        const std::size_t n = d_.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (ipiv_[i] == i) {
                b[i + 1] -= dl_[i] * b[i];
            } else {
                const double temp = b[i] - dl_[i] * b[i + 1];
                b[i] = b[i + 1];
                b[i + 1] = temp;
            }
        }
        b[n - 1] /= d_[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
        for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }

private:
    std::vector<double> dl_, d_, du_, du2_;
    std::vector<std::size_t> ipiv_;
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void scale_to_unit(std::vector<double>& v) {
    const double n = std::sqrt(dot(v, v));
    for (auto& x : v) x /= n;
}

}  // namespace

std::size_t count_levels_below(const Potential& potential, double energy) {
    return sturm_count(discretize(potential), energy);
}

double rayleigh_quotient(const Potential& potential, std::span<const double> state) {
    const auto t = discretize(potential);
    require(state.size() == t.diag.size(), "state length does not match grid size");
    const std::size_t n = state.size();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double h = t.diag[i] * state[i];
        if (i > 0) h += t.off * state[i - 1];
        if (i + 1 < n) h += t.off * state[i + 1];
        num += state[i] * h;
        den += state[i] * state[i];
    }
    return num / den;
}

EigenSet solve_bound_states(const Potential& potential, std::size_t n_levels, const EigenOptions& options) {
    require(n_levels >= 1, "n_levels must be at least 1");
    const Grid& grid = potential.grid();
    require(n_levels <= grid.size(), "n_levels exceeds the number of grid points");
    const auto t = discretize(potential);
    const std::size_t n = t.diag.size();

    if (options.require_bound) {
        const std::size_t negative = sturm_count(t, 0.0);
        if (negative < n_levels) {
            std::ostringstream msg;
            msg << "requested " << n_levels << " bound states but only " << negative
                << " negative-energy states exist on this grid";
            throw RuntimeFailure(msg.str());
        }
    }

    // Gershgorin bounds.
    double lo = std::numeric_limits<double>::max(), hi = std::numeric_limits<double>::lowest();
    for (double d : t.diag) {
        lo = std::min(lo, d - 2.0 * std::abs(t.off));
        hi = std::max(hi, d + 2.0 * std::abs(t.off));
    }
    lo -= 1.0;
    hi += 1.0;

    EigenSet out{grid, {}, {}, {}, {}, 0.0, {}};
    out.energies.resize(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
        out.energies[k] = bisect_eigenvalue(t, k, k == 0 ? lo : out.energies[k - 1], hi);
    }

    const double spread = hi - lo;
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> dl(n - 1, t.off), du(n - 1, t.off), shifted(n);

    for (std::size_t k = 0; k < n_levels; ++k) {
        const double lambda = out.energies[k];
        for (std::size_t i = 0; i < n; ++i) shifted[i] = t.diag[i] - lambda;
        TridiagLU lu(dl, shifted, du);

        // States whose eigenvalues sit within the cluster gap must be re-orthogonalized.
        std::vector<std::size_t> cluster;
        for (std::size_t j = 0; j < k; ++j)
            if (std::abs(out.energies[j] - lambda) < 1e-3 * spread) cluster.push_back(j);

        std::vector<double> v(n);
        for (auto& x : v) x = 1.0 + 0.1 * uni(rng);
        scale_to_unit(v);
        for (std::size_t it = 0; it < options.inverse_iterations; ++it) {
            lu.solve(v);
            for (std::size_t j : cluster) {
                const double p = dot(v, out.states[j]);
                for (std::size_t i = 0; i < n; ++i) v[i] -= p * out.states[j][i];
            }
            scale_to_unit(v);
        }
        out.states.push_back(std::move(v));
    }

    const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
    for (auto& s : out.states) {
        double peak = 0.0;
        for (double x : s) peak = std::max(peak, std::abs(x));
        // Phase convention: leftmost significant lobe positive.
        auto first = std::find_if(s.begin(), s.end(), [&](double x) { return std::abs(x) > 1e-3 * peak; });
        const double sign = (first != s.end() && *first < 0.0) ? -1.0 : 1.0;
        for (auto& x : s) x *= sign * inv_sqrt_dx;
    }

    out.bound.resize(n_levels);
    for (std::size_t k = 0; k < n_levels; ++k) {
        out.bound[k] = out.energies[k] < 0.0;
        const auto& s = out.states[k];
        const double edge = std::max(std::abs(s.front()), std::abs(s.back()));
        if (edge > options.boundary_tolerance) {
            std::ostringstream msg;
            msg << "level " << k << " has edge amplitude " << edge << " > " << options.boundary_tolerance
                << "; widen the grid";
            out.warnings.push_back(msg.str());
        }
    }

    out.dipoles.assign(n_levels, std::vector<double>(n_levels, 0.0));
    for (std::size_t j = 0; j < n_levels; ++j) {
        for (std::size_t k = j; k < n_levels; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += grid.x(i) * out.states[j][i] * out.states[k][i];
            out.dipoles[j][k] = out.dipoles[k][j] = s * grid.dx();
        }
    }
    out.ionization_threshold = -out.energies[0];
    return out;
}

Transition transition(const EigenSet& eigenset, std::size_t j, std::size_t k) {
    require(j < k, "transition requires j < k");
    require(k < eigenset.size(), "transition index out of range");
    return {eigenset.energies[k] - eigenset.energies[j], eigenset.dipoles[j][k]};
}

double tune_well_separation(std::size_t count, double a, double b, double target_splitting, const Grid& grid,
                            double sep_lo, double sep_hi) {
    require(count >= 2, "separation tuning needs at least two wells");
    require(target_splitting > 0.0, "target splitting must be positive");
    // Keep the outer wells well inside the box.
    sep_hi = std::min(sep_hi, 0.7 * (grid.x_max() - grid.x_min()) / static_cast<double>(count - 1));
    require(sep_hi > sep_lo, "grid too small for the separation search interval");
    auto splitting = [&](double sep) {
        const auto wells = equally_spaced_wells(count, a, b, sep);
        EigenOptions opts;
        opts.require_bound = false;
        opts.inverse_iterations = 1;
        const auto set = solve_bound_states(build_potential(wells, grid), 2, opts);
        return set.energies[1] - set.energies[0] - target_splitting;
    };
    double f_lo = splitting(sep_lo), f_hi = splitting(sep_hi);
    if (f_lo * f_hi > 0.0)
        throw RuntimeFailure("target splitting is not bracketed by the separation interval");
    for (int it = 0; it < 100 && sep_hi - sep_lo > 1e-12 * sep_hi; ++it) {
        const double mid = 0.5 * (sep_lo + sep_hi);
        const double f_mid = splitting(mid);
        if ((f_mid > 0.0) == (f_lo > 0.0)) {
            sep_lo = mid;
            f_lo = f_mid;
        } else {
            sep_hi = mid;
        }
    }
    return 0.5 * (sep_lo + sep_hi);
}

}  // namespace hhg
