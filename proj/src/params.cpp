#include "susy/params.hpp"

#include <cmath>
#include <string>

#include "susy/errors.hpp"

namespace susy {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

} // namespace

double PhysicalParams::lambda() const { return std::hypot(ell, k); }

void PhysicalParams::validate() const
{
    if (!positive(hbar) || !positive(m) || !positive(c) || !positive(e)) {
        throw InvalidParameters("hbar, m, c and e must be positive and finite");
    }
    if (!std::isfinite(k) || !std::isfinite(pz) || !std::isfinite(ell)) {
        throw InvalidParameters("k, pz and ell must be finite");
    }
    if (!(lambda() > 0.0)) {
        throw InvalidParameters("lambda = sqrt(ell^2 + k^2) must be positive");
    }
}

void NRParams::validate() const
{
    if (!positive(a)) {
        throw InvalidParameters("a must be positive, got " + std::to_string(a));
    }
    if (!std::isfinite(b) || b < 0.0) {
        throw InvalidParameters("b must be nonnegative, got " + std::to_string(b));
    }
}

void NRParams::require_bound_states() const
{
    validate();
    if (!(b > 0.0)) {
        throw NoBoundStates("b = pz k / hbar^2 must be positive for bound states");
    }
}

NRParams NRParams::from_physical(const PhysicalParams& phys)
{
    phys.validate();
    if (!phys.has_bound_states()) {
        throw NoBoundStates("pz k must be positive for bound states");
    }
    // positive root of a(a+1) = lambda^2/hbar^2 - 1/4
    NRParams p{phys.lambda() / phys.hbar - 0.5, phys.pz * phys.k / (phys.hbar * phys.hbar)};
    if (!(p.a > 0.0)) {
        throw InvalidParameters("lambda/hbar must exceed 1/2 so that a > 0");
    }
    return p;
}

void DiracParams::validate() const
{
    if (!positive(a)) {
        throw InvalidParameters("a must be positive, got " + std::to_string(a));
    }
    if (!positive(b)) {
        throw InvalidParameters("b must be positive, got " + std::to_string(b));
    }
    if (!std::isfinite(d0)) {
        throw InvalidParameters("d0 must be finite");
    }
    if (!std::isfinite(mbar) || mbar < 0.0) {
        throw InvalidParameters("mbar must be nonnegative");
    }
}

DiracParams DiracParams::from_physical(const PhysicalParams& phys)
{
    phys.validate();
    if (!phys.has_bound_states()) {
        throw NoBoundStates("pz k must be positive for bound states");
    }
    const double lam = phys.lambda();
    return DiracParams{lam / phys.hbar,
                       phys.pz * phys.k / (phys.hbar * phys.hbar),
                       phys.pz * phys.ell / (phys.hbar * lam),
                       phys.m * phys.c / phys.hbar};
}

} // namespace susy
