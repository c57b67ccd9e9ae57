#pragma once

/// \file nr.hpp
///
/// Shape-invariant hierarchy of the radial equation
///
///     [-1/2 d^2/drho^2 + a(a+1)/(2 rho^2) - b/rho] G = d G
///
/// with H_n = -1/2 d^2 + V_n, V_n = (a+n)(a+n+1)/(2 rho^2) - b/rho and the
/// ladder operators A_n = (d/drho + W_n)/sqrt2, A+_n = (-d/drho + W_n)/sqrt2.

#include <vector>

#include "susy/expalg.hpp"
#include "susy/params.hpp"

namespace susy::nr {

using expalg::ExpoPoly;

expalg::Context context(const NRParams& params);

enum class LadderDirection { creation, annihilation };

/// A+_n (creation) or A_n (annihilation), carrying W_n and the 1/sqrt2 factor.
struct ScalarLadder {
    LadderDirection direction = LadderDirection::creation;
    int level = 1;
    ExpoPoly superpotential;
};

ScalarLadder creation(const NRParams& params, int n);
ScalarLadder annihilation(const NRParams& params, int n);

/// W_n = (a+n)/rho - b/(a+n), n >= 1.
ExpoPoly superpotential(const NRParams& params, int n);

/// epsilon_n = -b^2 / (2 (a+n)^2), n >= 1.
double factorization_energy(const NRParams& params, int n);

/// V_n, n >= 0.
ExpoPoly potential(const NRParams& params, int n);

/// Ground state of H_n: rho^(a+n+1) exp(-b rho/(a+n+1)), eigenvalue epsilon_{n+1}.
ExpoPoly ground_state(const NRParams& params, int n);

ExpoPoly apply_ladder(const ScalarLadder& op, const ExpoPoly& f);

/// -f''/2 + V_n f
ExpoPoly apply_hamiltonian(const NRParams& params, int n, const ExpoPoly& f);

/// W_n' + W_n^2 - 2 (V_{n-1} - epsilon_n); identically zero.
ExpoPoly riccati_residual(const NRParams& params, int n);

/// m-th eigenfunction of H_level: A_{level+1} ... A_{level+m} phi_{level+m+1},
/// eigenvalue epsilon_{level+m+1}. Unnormalized.
ExpoPoly hierarchy_eigenfunction(const NRParams& params, int level, int m);

/// G_n of H_0 (unnormalized), eigenvalue spectrum_radial(n).
ExpoPoly eigenfunction(const NRParams& params, int n);

/// f / sqrt(<f, f>)
ExpoPoly normalize(const ExpoPoly& f);

/// n-th bound state energy of H_0: epsilon_{n+1}.
double spectrum_radial(const NRParams& params, int n);

/// Physical energy E_n = pz^2/(2m) [1 - k^2/(hbar^2 (lambda/hbar + n + 1/2)^2)].
double spectrum_physical(const PhysicalParams& phys, int n);

/// Same energy through d = m E/hbar^2 - pz^2/(2 hbar^2) and spectrum_radial.
double spectrum_physical_via_radial(const PhysicalParams& phys, int n);

/// |B| = |c k / (e rho^2)| for A = (c k/(e rho)) e_z.
double field_magnitude(const PhysicalParams& phys, double rho);

/// Radius capturing the exponential tail of eigenfunction n: 40 (a+n+1)/b.
double default_rho_max(const NRParams& params, int n);

/// Interior sign changes of the real part of f on (0, rho_max]: sampled at
/// rho_max/samples, each bracket refined by bisection to `tol`.
std::vector<double> find_nodes(const ExpoPoly& f, double rho_max, int samples = 4096, double tol = 1e-10);

} // namespace susy::nr
