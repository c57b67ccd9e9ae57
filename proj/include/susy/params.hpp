#pragma once

namespace susy {

/// Physical inputs: charge in the field A = (ck/(e rho)) e_z with longitudinal
/// momentum pz and angular momentum eigenvalue ell.
struct PhysicalParams {
    double hbar = 1.0;
    double m = 1.0;
    double c = 1.0;
    double e = 1.0;
    double k = 1.0;
    double pz = 1.0;
    double ell = 0.0;

    /// lambda = sqrt(ell^2 + k^2)
    double lambda() const;

    /// Positivity of hbar, m, c, e and lambda > 0. Does not require bound states.
    void validate() const;
    bool has_bound_states() const { return pz * k > 0.0; }
};

/// Dimensionless parameters of the radial Schrodinger hierarchy.
struct NRParams {
    double a = 1.0; ///< a(a+1) = lambda^2/hbar^2 - 1/4, positive root
    double b = 1.0; ///< pz k / hbar^2

    void validate() const;
    /// Throws NoBoundStates unless b > 0.
    void require_bound_states() const;

    /// Throws NoBoundStates when pz k <= 0 and InvalidParameters when lambda/hbar <= 1/2.
    static NRParams from_physical(const PhysicalParams& phys);
};

/// Dimensionless parameters of the rotated radial Dirac hierarchy.
struct DiracParams {
    double a = 1.0;    ///< lambda / hbar
    double b = 1.0;    ///< pz k / hbar^2
    double d0 = 0.0;   ///< pz ell / (hbar lambda)
    double mbar = 0.0; ///< m c / hbar

    void validate() const;
    static DiracParams from_physical(const PhysicalParams& phys);
};

} // namespace susy
