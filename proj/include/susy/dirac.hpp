#pragma once

/// \file dirac.hpp
///
/// Intertwining hierarchy of the rotated radial Dirac Hamiltonian
///
///     H_n = [[mbar s0, h_n], [h_n, -mbar s0]],
///     h_n = -i s1 d/drho + ((a+n)/rho - b/(a+n)) s2 + d_n s3,
///
/// linked by A+_{n+1} = diag(B+_{n+1}, B+_{n+1}) with H_{n+1} A+_{n+1} = A+_{n+1} H_n.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "susy/expalg.hpp"
#include "susy/params.hpp"

namespace susy::dirac {

using expalg::Complex;
using expalg::ExpoPoly;

expalg::Context context(const DiracParams& params);

/// Two- or four-component function with exponential-polynomial entries over one context.
struct SpinorFn {
    std::vector<ExpoPoly> components;

    std::size_t size() const { return components.size(); }
    const expalg::Context& context() const { return components.front().context(); }
};

SpinorFn zero_spinor(const expalg::Context& ctx, std::size_t size);
SpinorFn add(const SpinorFn& f, const SpinorFn& g);
SpinorFn subtract(const SpinorFn& f, const SpinorFn& g);
SpinorFn scale(Complex c, const SpinorFn& f);
SpinorFn differentiate(const SpinorFn& f);
/// Stacks two spinors (upper over lower).
SpinorFn stack(const SpinorFn& upper, const SpinorFn& lower);
bool is_zero(const SpinorFn& f, double tol);
Eigen::VectorXcd eval(const SpinorFn& f, double rho);
/// Sum of the component inner products, int_0^inf f^dagger g d rho.
Complex inner_product(const SpinorFn& f, const SpinorFn& g);

/// First-order matrix operator  dcoef d/drho + potential(rho)  with a constant
/// derivative matrix and Laurent-monomial potential entries.
class MatrixOp {
public:
    /// `potential` is row-major, size*size entries, all zero-decay.
    MatrixOp(Eigen::MatrixXcd dcoef, std::vector<ExpoPoly> potential);

    int size() const { return static_cast<int>(dcoef_.rows()); }
    const Eigen::MatrixXcd& dcoef() const { return dcoef_; }
    const ExpoPoly& potential(int row, int col) const { return potential_[row * size() + col]; }
    Eigen::MatrixXcd potential_at(double rho) const;

    SpinorFn apply(const SpinorFn& f) const;

    /// Formal adjoint on (0, inf) with measure d rho, boundary terms dropped:
    /// (D d/drho + Q)^dagger = -D^dagger d/drho + Q^dagger.
    MatrixOp adjoint() const;

private:
    Eigen::MatrixXcd dcoef_;
    std::vector<ExpoPoly> potential_;
};

/// U1 = cos(theta/2) 1 - i sin(theta/2) Sigma1 with theta = atan2(-k, ell).
Eigen::Matrix4cd rotation_matrix(const PhysicalParams& phys);

/// Non-derivative part of the unrotated radial operator
/// (ell/(hbar rho)) alpha2 - (k/(hbar rho) - pz/hbar) alpha3 + (m c/hbar) beta.
Eigen::Matrix4cd radial_potential_matrix(const PhysicalParams& phys, double rho);

/// d_n^2 = d0^2 + n(2a+n) b^2 / (a^2 (a+n)^2)
double dn_squared(const DiracParams& params, int n);
/// sign(d0) sqrt(d_n^2), with sign(0) = +1.
double dn(const DiracParams& params, int n);

MatrixOp h_operator(const DiracParams& params, int n);
MatrixOp big_hamiltonian(const DiracParams& params, int n);
/// B+_{n+1}, intertwining h_{n+1} with h_n.
MatrixOp b_dagger(const DiracParams& params, int n);
/// A+_{n+1} = diag(B+_{n+1}, B+_{n+1}).
MatrixOp a_dagger(const DiracParams& params, int n);
/// A_{n+1}, the formal adjoint of a_dagger(n).
MatrixOp a_op(const DiracParams& params, int n);

/// chi_n = (1, 0)^T rho^(a+n) exp(-b rho/(a+n))
SpinorFn kernel_chi(const DiracParams& params, int n);
/// xi_n = (i K (1 - c rho), rho)^T rho^(a+n) exp(-b rho/(a+n+1)),
/// c = b/((a+n)(a+n+1)), K = (d_{n+1} - d_n)/c^2.
SpinorFn kernel_xi(const DiracParams& params, int n);

enum class Family { a, b, c, d };

char to_char(Family fam);
/// Throws InvalidParameters for anything but a, b, c, d.
Family family_from_char(char c);
inline constexpr std::array<Family, 4> all_families{Family::a, Family::b, Family::c, Family::d};

/// +-sqrt(mbar^2 + d^2) with d = d_n (families a, b) or d_{n+1} (c, d).
double eigenvalue(const DiracParams& params, int n, Family fam);

struct Eigenvector {
    SpinorFn spinor;
    double eigenvalue = 0.0;
};

/// phi_{fam,n}: annihilated by a_dagger(n) and an eigenvector of H_n.
/// Throws DegenerateDenominator when the lower-block ratio is 0/0.
Eigenvector eigenvector(const DiracParams& params, int n, Family fam);

/// Phi_{fam,n} = A_1 ... A_n phi_{fam,n}, an eigenvector of H_0 with eigenvalue(params, n, fam).
SpinorFn eigenfunction_chain(const DiracParams& params, int n, Family fam);

/// eigenfunction_chain scaled to unit norm.
SpinorFn normalized_chain(const DiracParams& params, int n, Family fam);

enum class SingularPolicy { skip, fail };

struct XiResidual {
    double max_residual = 0.0;
    std::vector<double> skipped; ///< radii where Xi was singular (SingularPolicy::skip)
};

/// max over samples of || W+_{n+1}(rho) - Xi'(rho) Xi(rho)^{-1} ||_F, where the
/// columns of Xi are phi_{a n}, phi_{b n}, phi_{c n}, phi_{d n} times `column_scale`
/// and W+ is the potential part of a_dagger(n).
XiResidual superpotential_matrix_residual(const DiracParams& params, int n, std::span<const double> samples,
                                          SingularPolicy policy = SingularPolicy::fail,
                                          const std::array<Complex, 4>& column_scale = {1.0, 1.0, 1.0, 1.0});

/// Closed-form physical energy +-m c^2 sqrt(1 + pz^2/(m c)^2 - pz^2 k^2/(hbar^2 m^2 c^2 (lambda/hbar + n)^2)).
double spectrum_dirac(const PhysicalParams& phys, int n, int sign);

/// sign * c hbar sqrt(mbar^2 + d_n^2) with the dimensionless parameters of `phys`.
double spectrum_dirac_via_params(const PhysicalParams& phys, int n, int sign);

/// Radius capturing the exponential tail of level n: 40 (a+n+1)/b.
double default_rho_max(const DiracParams& params, int n);

/// Psi(rho, phi, z) = C exp(i pz z/hbar) exp(i (ell/hbar - Sigma3/2) phi) U1 rho^(-1/2) Phi(rho),
/// with C fixing int_0^inf Phi^dagger Phi d rho = 1.
class FullSpinor {
public:
    FullSpinor(const PhysicalParams& phys, Family fam, int n);

    Eigen::Vector4cd operator()(double rho, double phi, double z) const;
    double energy() const { return energy_; }

private:
    PhysicalParams phys_;
    Eigen::Matrix4cd rotation_;
    SpinorFn chain_;
    double energy_;
};

Eigen::Vector4cd assemble_full_spinor(const PhysicalParams& phys, Family fam, int n, double rho, double phi,
                                      double z);

} // namespace susy::dirac
