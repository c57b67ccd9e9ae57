#include "susy/nr.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "susy/errors.hpp"

namespace susy::nr {

using expalg::DecayIndex;
using expalg::Exponent;
using expalg::ExpoTerm;

namespace {

void require_level(int n, int min, const char* what)
{
    if (n < min) {
        throw InvalidParameters(std::string(what) + ": level " + std::to_string(n) + " below " +
                                std::to_string(min));
    }
}

} // namespace

expalg::Context context(const NRParams& params)
{
    params.validate();
    return {params.a, params.b};
}

ScalarLadder creation(const NRParams& params, int n)
{
    return {LadderDirection::creation, n, superpotential(params, n)};
}

ScalarLadder annihilation(const NRParams& params, int n)
{
    return {LadderDirection::annihilation, n, superpotential(params, n)};
}

ExpoPoly superpotential(const NRParams& params, int n)
{
    require_level(n, 1, "superpotential");
    const double an = params.a + n;
    return ExpoPoly(context(params), {ExpoTerm{an, Exponent{0, -1}}, ExpoTerm{-params.b / an, Exponent{0, 0}}});
}

double factorization_energy(const NRParams& params, int n)
{
    require_level(n, 1, "factorization_energy");
    params.validate();
    const double an = params.a + n;
    return -params.b * params.b / (2.0 * an * an);
}

ExpoPoly potential(const NRParams& params, int n)
{
    require_level(n, 0, "potential");
    const double an = params.a + n;
    return ExpoPoly(context(params),
                    {ExpoTerm{an * (an + 1.0) / 2.0, Exponent{0, -2}}, ExpoTerm{-params.b, Exponent{0, -1}}});
}

ExpoPoly ground_state(const NRParams& params, int n)
{
    require_level(n, 0, "ground_state");
    params.require_bound_states();
    return ExpoPoly::monomial(context(params), 1.0, Exponent{1, n + 1}, DecayIndex::indexed(n + 1));
}

ExpoPoly apply_ladder(const ScalarLadder& op, const ExpoPoly& f)
{
    const double sign = op.direction == LadderDirection::annihilation ? 1.0 : -1.0;
    const auto image = sign * differentiate(f) + multiply(op.superpotential, f);
    return (1.0 / std::numbers::sqrt2) * image;
}

ExpoPoly apply_hamiltonian(const NRParams& params, int n, const ExpoPoly& f)
{
    return -0.5 * differentiate(differentiate(f)) + multiply(potential(params, n), f);
}

ExpoPoly riccati_residual(const NRParams& params, int n)
{
    const auto w = superpotential(params, n);
    const auto target = 2.0 * (potential(params, n - 1) -
                               ExpoPoly::constant(context(params), factorization_energy(params, n)));
    return differentiate(w) + multiply(w, w) - target;
}

ExpoPoly hierarchy_eigenfunction(const NRParams& params, int level, int m)
{
    require_level(level, 0, "hierarchy_eigenfunction");
    require_level(m, 0, "hierarchy_eigenfunction");
    auto f = ground_state(params, level + m);
    for (int k = level + m; k > level; --k) {
        f = apply_ladder(annihilation(params, k), f);
    }
    return f;
}

ExpoPoly eigenfunction(const NRParams& params, int n) { return hierarchy_eigenfunction(params, 0, n); }

ExpoPoly normalize(const ExpoPoly& f)
{
    const double norm2 = expalg::inner_product(f, f).real();
    if (!(norm2 > 0.0)) {
        throw DomainError("cannot normalize a function of zero norm");
    }
    return (1.0 / std::sqrt(norm2)) * f;
}

double spectrum_radial(const NRParams& params, int n)
{
    require_level(n, 0, "spectrum_radial");
    params.require_bound_states();
    return factorization_energy(params, n + 1);
}

double spectrum_physical(const PhysicalParams& phys, int n)
{
    require_level(n, 0, "spectrum_physical");
    phys.validate();
    if (!phys.has_bound_states()) {
        throw NoBoundStates("pz k must be positive for bound states");
    }
    const double shifted = phys.lambda() / phys.hbar + n + 0.5;
    const double ratio = phys.k * phys.k / (phys.hbar * phys.hbar * shifted * shifted);
    return phys.pz * phys.pz / (2.0 * phys.m) * (1.0 - ratio);
}

double spectrum_physical_via_radial(const PhysicalParams& phys, int n)
{
    const auto params = NRParams::from_physical(phys);
    const double d = spectrum_radial(params, n);
    return phys.hbar * phys.hbar / phys.m * d + phys.pz * phys.pz / (2.0 * phys.m);
}

double field_magnitude(const PhysicalParams& phys, double rho)
{
    if (!(rho > 0.0)) {
        throw DomainError("field_magnitude requires rho > 0");
    }
    return std::abs(phys.c * phys.k / (phys.e * rho * rho));
}

double default_rho_max(const NRParams& params, int n)
{
    params.require_bound_states();
    return 40.0 * (params.a + n + 1) / params.b;
}

std::vector<double> find_nodes(const ExpoPoly& f, double rho_max, int samples, double tol)
{
    if (!(rho_max > 0.0) || samples < 2) {
        throw DomainError("find_nodes needs rho_max > 0 and at least two samples");
    }
    const double step = rho_max / samples;
    auto value = [&f](double rho) { return expalg::eval(f, rho).real(); };

    std::vector<double> nodes;
    double lo = step;
    double f_lo = value(lo);
    for (int i = 2; i <= samples; ++i) {
        const double hi = step * i;
        const double f_hi = value(hi);
        if ((f_lo < 0.0 && f_hi > 0.0) || (f_lo > 0.0 && f_hi < 0.0)) {
            double left = lo;
            double right = hi;
            double f_left = f_lo;
            while (right - left > tol) {
                const double mid = 0.5 * (left + right);
                const double f_mid = value(mid);
                if ((f_mid < 0.0) == (f_left < 0.0)) {
                    left = mid;
                    f_left = f_mid;
                } else {
                    right = mid;
                }
            }
            nodes.push_back(0.5 * (left + right));
        }
        // an exact zero sample keeps the previous sign so the crossing is still seen
        if (f_hi != 0.0) {
            lo = hi;
            f_lo = f_hi;
        }
    }
    return nodes;
}

} // namespace susy::nr
