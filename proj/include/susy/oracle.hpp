#pragma once

/// \file oracle.hpp
///
/// Finite-difference and quadrature checks that depend only on parameter
/// records and sampled values, never on the symbolic hierarchy construction.

#include <array>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "susy/params.hpp"

namespace susy::oracle {

using Complex = std::complex<double>;

/// rho_min as a fraction of rho_max for eigenvalue problems (Dirichlet at rho_min).
inline constexpr double eigen_rho_min_fraction = 1e-4;
/// rho_min as a fraction of rho_max for stencil residuals; keeps the stencil out of
/// the region where rho^(a+1) with non-integer a has large high derivatives.
inline constexpr double residual_rho_min_fraction = 1e-3;
inline constexpr int default_points = 8192;
/// rho_min fraction for the squared Dirac scan. Components behaving like rho^1 at the
/// origin shift by O(rho_min) under a Dirichlet wall there, so the wall sits almost at 0
/// (only interior points are ever evaluated).
inline constexpr double scan_rho_min_fraction = 1e-10;
inline constexpr int scan_points = 16384;

/// Uniform grid on [rho_min, rho_max].
class RadialGrid {
public:
    /// Requires 0 < rho_min <= 1e-3 rho_max and n_points >= 64.
    RadialGrid(double rho_min, double rho_max, int n_points);

    static RadialGrid with_fraction(double rho_max, int n_points, double rho_min_fraction);

    double rho_min() const { return rho_min_; }
    double rho_max() const { return rho_max_; }
    int n_points() const { return n_points_; }
    double spacing() const { return (rho_max_ - rho_min_) / (n_points_ - 1); }
    double point(int i) const { return rho_min_ + i * spacing(); }
    std::vector<double> points() const;

    /// Same interval with half the spacing (2 n_points - 1 points).
    RadialGrid refined() const;

    bool operator==(const RadialGrid&) const = default;

private:
    double rho_min_;
    double rho_max_;
    int n_points_;
};

struct ResidualReport {
    std::string op;
    double eigenvalue = 0.0;
    RadialGrid grid;
    double max_pointwise_residual = 0.0;
    double l2_residual = 0.0;
    /// Discrete L2 norm of the sampled function over the whole grid.
    double reference_norm = 0.0;
    /// |residual| at every grid point; zero where the stencil does not fit.
    std::vector<double> pointwise;

    double relative_l2() const { return reference_norm > 0.0 ? l2_residual / reference_norm : l2_residual; }
};

/// Lowest `count` eigenvalues of -1/2 second-difference + diag(V_0) with Dirichlet ends.
/// With `richardson_check`, the lowest eigenvalue is recomputed on a grid with twice the
/// points and GridTooCoarse is thrown when it moves by more than 1e-4.
std::vector<double> fd_schrodinger_eigs(const NRParams& params, int count, const RadialGrid& grid,
                                        bool richardson_check = true);

/// Pointwise (-f''/2 + V_0 f - E f) with a 5-point second-derivative stencil.
ResidualReport residual_scalar(std::span<const double> f, double energy, const NRParams& params,
                               const RadialGrid& grid);

using SampledSpinor = std::array<std::vector<Complex>, 4>;

/// Pointwise (H_0 Phi - E Phi) with 5-point first-derivative stencils per component.
ResidualReport residual_dirac(const SampledSpinor& phi, double energy, const DiracParams& params,
                              const RadialGrid& grid);

/// Ratio of the coarse residual L2 norm to the fine one on the coarse grid points.
/// Requires fine.grid == coarse.grid.refined().
double refinement_ratio(const ResidualReport& coarse, const ResidualReport& fine);

/// Eigenvalues of H_0 inside the open window (lo, hi), found by solving the
/// discretized squared operator H_0^2 (Dirichlet ends) and taking square roots.
/// One entry per state, sorted ascending. The window must lie within
/// +-1.5 (mbar + |d_3|). GridTooCoarse when the first value moves by more than
/// 1e-4 (or the count changes) between n_points and 2 n_points.
std::vector<double> dirac_spectrum_scan(const DiracParams& params, std::pair<double, double> window,
                                        const RadialGrid& grid, bool richardson_check = true);

/// Composite Simpson approximation of sum conj(f) g over the grid.
/// Throws TailNotDecayed when |f g| at rho_max exceeds 1e-16 of its maximum.
Complex quad_inner(std::span<const Complex> f, std::span<const Complex> g, const RadialGrid& grid);

/// Composite trapezoid rule, same contract as quad_inner.
Complex quad_inner_trapezoid(std::span<const Complex> f, std::span<const Complex> g, const RadialGrid& grid);

} // namespace susy::oracle
