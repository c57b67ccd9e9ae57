#include "susy/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "susy/errors.hpp"
#include "susy/pauli.hpp"

namespace susy::oracle {

namespace {

constexpr double richardson_tol = 1e-4;

struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;
};

/// -1/2 d^2 + V on the interior points, Dirichlet at both ends.
Tridiagonal schrodinger_matrix(const NRParams& params, const RadialGrid& grid)
{
    const int n = grid.n_points() - 2;
    const double h = grid.spacing();
    Tridiagonal t{std::vector<double>(n), std::vector<double>(n - 1, -0.5 / (h * h))};
    const double centrifugal = params.a * (params.a + 1.0) / 2.0;
    for (int i = 0; i < n; ++i) {
        const double rho = grid.point(i + 1);
        t.diag[i] = 1.0 / (h * h) + centrifugal / (rho * rho) - params.b / rho;
    }
    return t;
}

std::vector<double> lowest_eigenvalues(Tridiagonal t, int count)
{
    const auto n = static_cast<lapack_int>(t.diag.size());
    std::vector<double> w(n);
    std::vector<lapack_int> ifail(n);
    double z = 0.0;
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'N', 'I', n, t.diag.data(), t.off.data(), 0.0, 0.0,
                                           1, count, 0.0, &found, w.data(), &z, 1, ifail.data());
    if (info != 0) {
        throw Error("dstevx failed with info = " + std::to_string(info));
    }
    w.resize(found);
    return w;
}

double dirac_d3(const DiracParams& p)
{
    const double a3 = p.a + 3.0;
    return std::sqrt(p.d0 * p.d0 + 3.0 * (2.0 * p.a + 3.0) * p.b * p.b / (p.a * p.a * a3 * a3));
}

/// Eigenvalues of -D^2 + diag(potential) (Dirichlet ends) inside [lo, hi].
std::vector<double> scalar_levels_in(const std::vector<double>& potential, double h, double lo, double hi)
{
    const auto n = static_cast<lapack_int>(potential.size());
    std::vector<double> diag(potential.size());
    std::vector<double> off(potential.size() - 1, -1.0 / (h * h));
    for (std::size_t k = 0; k < potential.size(); ++k) {
        diag[k] = potential[k] + 2.0 / (h * h);
    }
    std::vector<double> w(n);
    std::vector<lapack_int> ifail(n);
    double z = 0.0;
    lapack_int found = 0;
    const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'N', 'V', n, diag.data(), off.data(), lo, hi, 0, 0,
                                           0.0, &found, w.data(), &z, 1, ifail.data());
    if (info != 0) {
        throw Error("dstevx failed with info = " + std::to_string(info));
    }
    w.resize(found);
    return w;
}

/// General path: the whole 4-component operator as one Hermitian band matrix.
std::vector<double> banded_levels_in(const std::vector<pauli::Mat4>& pointwise, double h, double lo, double hi)
{
    const int points = static_cast<int>(pointwise.size());
    const int n = 4 * points;
    const int kd = 4;
    const int ldab = kd + 1;
    std::vector<lapack_complex_double> ab(static_cast<std::size_t>(ldab) * n, lapack_complex_double{0.0, 0.0});
    auto at = [&](int row, int col) -> lapack_complex_double& { return ab[(kd + row - col) + col * ldab]; };
    for (int k = 0; k < points; ++k) {
        for (int c = 0; c < 4; ++c) {
            for (int r = 0; r <= c; ++r) {
                pauli::Complex value = pointwise[k](r, c);
                if (r == c) {
                    value += 2.0 / (h * h);
                }
                at(4 * k + r, 4 * k + c) = value;
            }
            if (k + 1 < points) {
                at(4 * k + c, 4 * (k + 1) + c) = lapack_complex_double{-1.0 / (h * h), 0.0};
            }
        }
    }
    std::vector<double> w(n);
    std::vector<lapack_int> ifail(n);
    lapack_complex_double q{0.0, 0.0};
    lapack_complex_double z{0.0, 0.0};
    lapack_int found = 0;
    const lapack_int info = LAPACKE_zhbevx(LAPACK_COL_MAJOR, 'N', 'V', 'U', n, kd, ab.data(), ldab, &q, 1, lo, hi,
                                           0, 0, 0.0, &found, w.data(), &z, 1, ifail.data());
    if (info != 0) {
        throw Error("zhbevx failed with info = " + std::to_string(info));
    }
    w.resize(found);
    return w;
}

/// Eigenvalues of the discretized H_0^2 with squared magnitudes in [lo2, hi2], merged in pairs.
std::vector<double> squared_operator_levels(const DiracParams& p, double lo2, double hi2, const RadialGrid& grid)
{
    using pauli::Mat4;
    const Mat4 alpha1 = pauli::alpha(pauli::sigma1());
    const Mat4 alpha2 = pauli::alpha(pauli::sigma2());
    const Mat4 alpha3 = pauli::alpha(pauli::sigma3());
    const Mat4 beta = pauli::beta();
    const pauli::Complex i(0.0, 1.0);

    // H_0 = -i alpha1 D + V(rho)
    // H_0^2 = -D^2 - i {alpha1, V} D - i alpha1 V' + V^2; the middle term vanishes here
    const int points = grid.n_points() - 2;
    const double h = grid.spacing();
    std::vector<Mat4> pointwise(points);
    bool diagonal = true;
    for (int k = 0; k < points; ++k) {
        const double rho = grid.point(k + 1);
        const Mat4 v = (p.a / rho - p.b / p.a) * alpha2 + p.d0 * alpha3 + p.mbar * beta;
        const Mat4 dv = (-p.a / (rho * rho)) * alpha2;
        const Mat4 anti = alpha1 * v + v * alpha1;
        if (anti.norm() > 1e-12 * (1.0 + v.norm())) {
            throw Error("squared Dirac operator has a first-derivative term; not supported");
        }
        pointwise[k] = v * v - i * alpha1 * dv;
        const Mat4 off = pointwise[k] - Mat4(pointwise[k].diagonal().asDiagonal());
        diagonal = diagonal && off.norm() <= 1e-13 * pointwise[k].norm();
    }

    std::vector<double> w;
    if (diagonal) {
        // uncoupled components: one tridiagonal problem per distinct diagonal potential,
        // counted once per component that carries it
        std::vector<std::vector<double>> potentials(4, std::vector<double>(points));
        for (int k = 0; k < points; ++k) {
            for (int c = 0; c < 4; ++c) {
                potentials[c][k] = pointwise[k](c, c).real();
            }
        }
        std::vector<bool> done(4, false);
        for (int c = 0; c < 4; ++c) {
            if (done[c]) {
                continue;
            }
            int copies = 0;
            for (int other = c; other < 4; ++other) {
                if (!done[other] && potentials[other] == potentials[c]) {
                    done[other] = true;
                    ++copies;
                }
            }
            for (const double s : scalar_levels_in(potentials[c], h, lo2, hi2)) {
                w.insert(w.end(), copies, s);
            }
        }
    } else {
        w = banded_levels_in(pointwise, h, lo2, hi2);
    }
    std::sort(w.begin(), w.end());

    // Gamma = alpha1 alpha2 alpha3 beta anticommutes with H_0, so every level of H_0^2
    // is shared by +E and -E: merge the pairs
    std::vector<double> merged;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (k + 1 < w.size() && std::abs(w[k + 1] - w[k]) <= 1e-8 * std::max(1.0, std::abs(w[k]))) {
            merged.push_back(0.5 * (w[k] + w[k + 1]));
            ++k;
        } else {
            merged.push_back(w[k]);
        }
    }
    return merged;
}

std::vector<double> scan_once(const DiracParams& p, std::pair<double, double> window, const RadialGrid& grid)
{
    const auto [lo, hi] = window;
    double lo2 = 0.0;
    double hi2 = 0.0;
    if (lo >= 0.0) {
        lo2 = lo * lo;
        hi2 = hi * hi;
    } else if (hi <= 0.0) {
        lo2 = hi * hi;
        hi2 = lo * lo;
    } else {
        hi2 = std::max(lo * lo, hi * hi);
    }
    std::vector<double> out;
    for (const double s : squared_operator_levels(p, lo2, hi2, grid)) {
        const double e = std::sqrt(std::max(s, 0.0));
        if (lo < -e && -e < hi) {
            out.push_back(-e);
        }
        if (lo < e && e < hi) {
            out.push_back(e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void check_same_size(std::size_t samples, const RadialGrid& grid)
{
    if (samples != static_cast<std::size_t>(grid.n_points())) {
        throw InvalidParameters("sample count " + std::to_string(samples) + " does not match grid with " +
                                std::to_string(grid.n_points()) + " points");
    }
}

std::vector<Complex> products(std::span<const Complex> f, std::span<const Complex> g, const RadialGrid& grid)
{
    check_same_size(f.size(), grid);
    check_same_size(g.size(), grid);
    std::vector<Complex> fg(f.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        fg[i] = std::conj(f[i]) * g[i];
        peak = std::max(peak, std::abs(fg[i]));
    }
    if (std::abs(fg.back()) > 1e-16 * peak) {
        throw TailNotDecayed("integrand has not decayed at rho_max = " + std::to_string(grid.rho_max()));
    }
    return fg;
}

} // namespace

// ---- grid -----------------------------------------------------------------

RadialGrid::RadialGrid(double rho_min, double rho_max, int n_points)
    : rho_min_(rho_min), rho_max_(rho_max), n_points_(n_points)
{
    if (!(rho_min > 0.0) || !(rho_max > rho_min) || !std::isfinite(rho_max)) {
        throw InvalidParameters("grid needs 0 < rho_min < rho_max");
    }
    if (rho_min > 1e-3 * rho_max * (1.0 + 1e-12)) {
        throw InvalidParameters("grid rho_min must not exceed 1e-3 rho_max");
    }
    if (n_points < 64) {
        throw InvalidParameters("grid needs at least 64 points");
    }
}

RadialGrid RadialGrid::with_fraction(double rho_max, int n_points, double rho_min_fraction)
{
    return RadialGrid(rho_min_fraction * rho_max, rho_max, n_points);
}

std::vector<double> RadialGrid::points() const
{
    std::vector<double> pts(n_points_);
    for (int i = 0; i < n_points_; ++i) {
        pts[i] = point(i);
    }
    return pts;
}

RadialGrid RadialGrid::refined() const { return RadialGrid(rho_min_, rho_max_, 2 * n_points_ - 1); }

// ---- eigenvalues ----------------------------------------------------------

std::vector<double> fd_schrodinger_eigs(const NRParams& params, int count, const RadialGrid& grid,
                                        bool richardson_check)
{
    params.require_bound_states();
    if (count < 1 || count > grid.n_points() - 2) {
        throw InvalidParameters("requested eigenvalue count out of range");
    }
    const double needed = 40.0 * (params.a + count + 1) / params.b;
    if (grid.rho_max() < needed * (1.0 - 1e-12)) {
        throw InvalidParameters("grid rho_max " + std::to_string(grid.rho_max()) +
                                " does not cover the tail; need " + std::to_string(needed));
    }
    auto eigs = lowest_eigenvalues(schrodinger_matrix(params, grid), count);
    if (richardson_check) {
        const RadialGrid doubled(grid.rho_min(), grid.rho_max(), 2 * grid.n_points());
        const auto fine = lowest_eigenvalues(schrodinger_matrix(params, doubled), 1);
        if (std::abs(fine.front() - eigs.front()) > richardson_tol) {
            throw GridTooCoarse("lowest eigenvalue moved by " + std::to_string(std::abs(fine.front() - eigs.front())) +
                                " under refinement");
        }
    }
    return eigs;
}

std::vector<double> dirac_spectrum_scan(const DiracParams& params, std::pair<double, double> window,
                                        const RadialGrid& grid, bool richardson_check)
{
    params.validate();
    const double limit = 1.5 * (params.mbar + dirac_d3(params));
    if (!(window.first < window.second) || window.first < -limit || window.second > limit) {
        throw InvalidParameters("scan window must be ordered and within +-" + std::to_string(limit));
    }
    auto levels = scan_once(params, window, grid);
    if (richardson_check) {
        const RadialGrid doubled(grid.rho_min(), grid.rho_max(), 2 * grid.n_points());
        const auto fine = scan_once(params, window, doubled);
        if (fine.size() != levels.size()) {
            throw GridTooCoarse("number of levels in the window changed under refinement");
        }
        if (!levels.empty() && std::abs(fine.front() - levels.front()) > richardson_tol) {
            throw GridTooCoarse("first level in the window moved by " +
                                std::to_string(std::abs(fine.front() - levels.front())));
        }
    }
    return levels;
}

// ---- residuals ------------------------------------------------------------

ResidualReport residual_scalar(std::span<const double> f, double energy, const NRParams& params,
                               const RadialGrid& grid)
{
    check_same_size(f.size(), grid);
    params.validate();
    const int n = grid.n_points();
    const double h = grid.spacing();
    ResidualReport report{"schrodinger", energy, grid, 0.0, 0.0, 0.0, {}};
    report.pointwise.assign(n, 0.0);

    double sum2 = 0.0;
    double ref2 = 0.0;
    for (int i = 0; i < n; ++i) {
        ref2 += f[i] * f[i];
    }
    const double centrifugal = params.a * (params.a + 1.0) / 2.0;
    for (int i = 2; i < n - 2; ++i) {
        const double rho = grid.point(i);
        const double f2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
        const double potential = centrifugal / (rho * rho) - params.b / rho;
        const double r = std::abs(-0.5 * f2 + (potential - energy) * f[i]);
        report.pointwise[i] = r;
        report.max_pointwise_residual = std::max(report.max_pointwise_residual, r);
        sum2 += r * r;
    }
    report.l2_residual = std::sqrt(sum2 * h);
    report.reference_norm = std::sqrt(ref2 * h);
    return report;
}

ResidualReport residual_dirac(const SampledSpinor& phi, double energy, const DiracParams& params,
                              const RadialGrid& grid)
{
    for (const auto& component : phi) {
        check_same_size(component.size(), grid);
    }
    params.validate();
    using pauli::Mat4;
    const Mat4 alpha1 = pauli::alpha(pauli::sigma1());
    const Mat4 alpha2 = pauli::alpha(pauli::sigma2());
    const Mat4 alpha3 = pauli::alpha(pauli::sigma3());
    const Mat4 beta = pauli::beta();
    const pauli::Complex i(0.0, 1.0);

    const int n = grid.n_points();
    const double h = grid.spacing();
    ResidualReport report{"dirac", energy, grid, 0.0, 0.0, 0.0, {}};
    report.pointwise.assign(n, 0.0);

    double ref2 = 0.0;
    for (const auto& component : phi) {
        for (const auto& v : component) {
            ref2 += std::norm(v);
        }
    }
    double sum2 = 0.0;
    for (int k = 2; k < n - 2; ++k) {
        const double rho = grid.point(k);
        Eigen::Vector4cd value;
        Eigen::Vector4cd derivative;
        for (int c = 0; c < 4; ++c) {
            const auto& s = phi[c];
            value(c) = s[k];
            derivative(c) = (s[k - 2] - 8.0 * s[k - 1] + 8.0 * s[k + 1] - s[k + 2]) / (12.0 * h);
        }
        const Mat4 v = (params.a / rho - params.b / params.a) * alpha2 + params.d0 * alpha3 + params.mbar * beta;
        const Eigen::Vector4cd r = -i * (alpha1 * derivative) + v * value - energy * value;
        const double mag = r.norm();
        report.pointwise[k] = mag;
        report.max_pointwise_residual = std::max(report.max_pointwise_residual, mag);
        sum2 += mag * mag;
    }
    report.l2_residual = std::sqrt(sum2 * h);
    report.reference_norm = std::sqrt(ref2 * h);
    return report;
}

double refinement_ratio(const ResidualReport& coarse, const ResidualReport& fine)
{
    if (!(fine.grid == coarse.grid.refined())) {
        throw InvalidParameters("refinement_ratio needs the fine grid to halve the coarse spacing");
    }
    double coarse2 = 0.0;
    double fine2 = 0.0;
    for (std::size_t i = 0; i < coarse.pointwise.size(); ++i) {
        if (coarse.pointwise[i] == 0.0) {
            continue; // stencil did not fit on the coarse grid
        }
        coarse2 += coarse.pointwise[i] * coarse.pointwise[i];
        fine2 += fine.pointwise[2 * i] * fine.pointwise[2 * i];
    }
    return std::sqrt(coarse2 / fine2);
}

// ---- quadrature -----------------------------------------------------------

Complex quad_inner(std::span<const Complex> f, std::span<const Complex> g, const RadialGrid& grid)
{
    const auto fg = products(f, g, grid);
    const double h = grid.spacing();
    const std::size_t intervals = fg.size() - 1;
    // Simpson needs an even interval count; an odd one closes with the 3/8 rule
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    Complex sum = fg[0] + fg[simpson_end];
    for (std::size_t i = 1; i < simpson_end; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * fg[i];
    }
    sum *= h / 3.0;
    if (simpson_end != intervals) {
        const std::size_t j = simpson_end;
        sum += 3.0 * h / 8.0 * (fg[j] + 3.0 * fg[j + 1] + 3.0 * fg[j + 2] + fg[j + 3]);
    }
    return sum;
}

Complex quad_inner_trapezoid(std::span<const Complex> f, std::span<const Complex> g, const RadialGrid& grid)
{
    const auto fg = products(f, g, grid);
    Complex sum = 0.5 * (fg.front() + fg.back());
    for (std::size_t i = 1; i + 1 < fg.size(); ++i) {
        sum += fg[i];
    }
    return sum * grid.spacing();
}

} // namespace susy::oracle
