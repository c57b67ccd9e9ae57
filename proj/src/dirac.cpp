#include "susy/dirac.hpp"

#include <cmath>
#include <initializer_list>
#include <string>
#include <utility>

#include "susy/errors.hpp"
#include "susy/pauli.hpp"

namespace susy::dirac {

using expalg::DecayIndex;
using expalg::Exponent;
using expalg::ExpoTerm;
using pauli::Mat2;
using pauli::Mat4;

namespace {

const Complex I(0.0, 1.0);

void require_level(int n, const char* what)
{
    if (n < 0) {
        throw InvalidParameters(std::string(what) + ": negative level " + std::to_string(n));
    }
}

/// Row-major entries of sum_k coeff_k rho^power_k.
std::vector<ExpoPoly> laurent_matrix(const expalg::Context& ctx,
                                     std::initializer_list<std::pair<Eigen::MatrixXcd, int>> parts)
{
    const Eigen::Index size = parts.begin()->first.rows();
    std::vector<ExpoPoly> entries;
    entries.reserve(size * size);
    for (Eigen::Index r = 0; r < size; ++r) {
        for (Eigen::Index c = 0; c < size; ++c) {
            std::vector<ExpoTerm> terms;
            for (const auto& [coeff, power] : parts) {
                terms.push_back(ExpoTerm{coeff(r, c), Exponent{0, power}});
            }
            entries.emplace_back(ctx, std::move(terms));
        }
    }
    return entries;
}

Eigen::MatrixXcd block_diag(const Mat2& m)
{
    return pauli::blocks(m, Mat2::Zero(), Mat2::Zero(), m);
}

/// Lower-block ratio r of phi = (k, r k) for the given family, with d = d_n or d_{n+1}.
double lower_ratio(double d, double mbar, Family fam)
{
    const double energy = std::hypot(mbar, d);
    switch (fam) {
    case Family::a:
    case Family::c:
        if (energy + mbar == 0.0) {
            throw DegenerateDenominator("massless level with d = 0: lower block ratio is 0/0");
        }
        return (fam == Family::a ? d : -d) / (energy + mbar);
    case Family::b:
    case Family::d:
        // d/(E - m) rewritten as (E + m)/d, identical for d != 0
        if (d == 0.0) {
            throw DegenerateDenominator("d = 0: the family b/d lower block ratio is 0/0");
        }
        return (fam == Family::b ? -1.0 : 1.0) * (energy + mbar) / d;
    }
    return 0.0;
}

} // namespace

expalg::Context context(const DiracParams& params)
{
    params.validate();
    return {params.a, params.b};
}

// ---- spinor arithmetic ----------------------------------------------------

SpinorFn zero_spinor(const expalg::Context& ctx, std::size_t size)
{
    return SpinorFn{std::vector<ExpoPoly>(size, ExpoPoly(ctx))};
}

SpinorFn add(const SpinorFn& f, const SpinorFn& g)
{
    if (f.size() != g.size()) {
        throw InvalidParameters("spinor sizes differ");
    }
    SpinorFn out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        out.components.push_back(f.components[i] + g.components[i]);
    }
    return out;
}

SpinorFn subtract(const SpinorFn& f, const SpinorFn& g) { return add(f, scale(-1.0, g)); }

SpinorFn scale(Complex c, const SpinorFn& f)
{
    SpinorFn out;
    for (const auto& x : f.components) {
        out.components.push_back(c * x);
    }
    return out;
}

SpinorFn differentiate(const SpinorFn& f)
{
    SpinorFn out;
    for (const auto& x : f.components) {
        out.components.push_back(expalg::differentiate(x));
    }
    return out;
}

SpinorFn stack(const SpinorFn& upper, const SpinorFn& lower)
{
    SpinorFn out = upper;
    out.components.insert(out.components.end(), lower.components.begin(), lower.components.end());
    return out;
}

bool is_zero(const SpinorFn& f, double tol)
{
    for (const auto& x : f.components) {
        if (!expalg::is_zero(x, tol)) {
            return false;
        }
    }
    return true;
}

Eigen::VectorXcd eval(const SpinorFn& f, double rho)
{
    Eigen::VectorXcd v(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        v(i) = expalg::eval(f.components[i], rho);
    }
    return v;
}

Complex inner_product(const SpinorFn& f, const SpinorFn& g)
{
    if (f.size() != g.size()) {
        throw InvalidParameters("spinor sizes differ");
    }
    Complex sum{};
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum += expalg::inner_product(f.components[i], g.components[i]);
    }
    return sum;
}

// ---- MatrixOp -------------------------------------------------------------

MatrixOp::MatrixOp(Eigen::MatrixXcd dcoef, std::vector<ExpoPoly> potential)
    : dcoef_(std::move(dcoef)), potential_(std::move(potential))
{
    const auto n = static_cast<std::size_t>(dcoef_.rows());
    if (dcoef_.rows() != dcoef_.cols() || potential_.size() != n * n) {
        throw InvalidParameters("MatrixOp needs a square derivative matrix and size^2 potential entries");
    }
    for (const auto& entry : potential_) {
        if (!(entry.context() == potential_.front().context())) {
            throw ContextMismatch("MatrixOp potential entries over different contexts");
        }
        for (const auto& t : entry.terms()) {
            if (!t.decay.is_zero()) {
                throw ClosureError("MatrixOp potential entries must not decay");
            }
        }
    }
}

Eigen::MatrixXcd MatrixOp::potential_at(double rho) const
{
    const int n = size();
    Eigen::MatrixXcd m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            m(r, c) = expalg::eval(potential(r, c), rho);
        }
    }
    return m;
}

SpinorFn MatrixOp::apply(const SpinorFn& f) const
{
    const int n = size();
    if (static_cast<int>(f.size()) != n) {
        throw InvalidParameters("operator of size " + std::to_string(n) + " applied to spinor of size " +
                                std::to_string(f.size()));
    }
    const SpinorFn df = differentiate(f);
    SpinorFn out = zero_spinor(f.context(), f.size());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (dcoef_(r, c) != Complex{}) {
                out.components[r] = out.components[r] + dcoef_(r, c) * df.components[c];
            }
            if (!potential(r, c).empty()) {
                out.components[r] = out.components[r] + expalg::multiply(potential(r, c), f.components[c]);
            }
        }
    }
    return out;
}

MatrixOp MatrixOp::adjoint() const
{
    const int n = size();
    std::vector<ExpoPoly> adj;
    adj.reserve(potential_.size());
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            adj.push_back(expalg::conj(potential(c, r)));
        }
    }
    return MatrixOp(-dcoef_.adjoint(), std::move(adj));
}

// ---- rotation -------------------------------------------------------------

Eigen::Matrix4cd rotation_matrix(const PhysicalParams& phys)
{
    phys.validate();
    // atan2 keeps cos(theta) = ell/lambda, so the rotated 1/rho coefficient is +lambda/hbar
    const double theta = std::atan2(-phys.k, phys.ell);
    return std::cos(theta / 2.0) * Mat4::Identity() -
           I * std::sin(theta / 2.0) * pauli::big_sigma(pauli::sigma1());
}

Eigen::Matrix4cd radial_potential_matrix(const PhysicalParams& phys, double rho)
{
    if (!(rho > 0.0)) {
        throw DomainError("radial_potential_matrix requires rho > 0");
    }
    const double h = phys.hbar;
    return (phys.ell / (h * rho)) * pauli::alpha(pauli::sigma2()) -
           (phys.k / (h * rho) - phys.pz / h) * pauli::alpha(pauli::sigma3()) +
           (phys.m * phys.c / h) * pauli::beta();
}

// ---- hierarchy ------------------------------------------------------------

double dn_squared(const DiracParams& params, int n)
{
    require_level(n, "dn");
    params.validate();
    const double a = params.a;
    const double an = a + n;
    return params.d0 * params.d0 + n * (2.0 * a + n) * params.b * params.b / (a * a * an * an);
}

double dn(const DiracParams& params, int n)
{
    if (n == 0) {
        params.validate();
        return params.d0;
    }
    const double sign = params.d0 < 0.0 ? -1.0 : 1.0;
    return sign * std::sqrt(dn_squared(params, n));
}

MatrixOp h_operator(const DiracParams& params, int n)
{
    require_level(n, "h_operator");
    const auto ctx = context(params);
    const double an = params.a + n;
    const Mat2 inv_rho = an * pauli::sigma2();
    const Mat2 constant = -params.b / an * pauli::sigma2() + dn(params, n) * pauli::sigma3();
    return MatrixOp(-I * pauli::sigma1(), laurent_matrix(ctx, {{inv_rho, -1}, {constant, 0}}));
}

MatrixOp big_hamiltonian(const DiracParams& params, int n)
{
    require_level(n, "big_hamiltonian");
    const auto ctx = context(params);
    const double an = params.a + n;
    const Mat2 zero = Mat2::Zero();
    const Mat2 h_inv_rho = an * pauli::sigma2();
    const Mat2 h_const = -params.b / an * pauli::sigma2() + dn(params, n) * pauli::sigma3();
    const Mat2 mass = params.mbar * pauli::sigma0();
    const Mat2 dh = -I * pauli::sigma1();
    return MatrixOp(pauli::blocks(zero, dh, dh, zero),
                    laurent_matrix(ctx, {{pauli::blocks(zero, h_inv_rho, h_inv_rho, zero), -1},
                                         {pauli::blocks(mass, h_const, h_const, -mass), 0}}));
}

MatrixOp b_dagger(const DiracParams& params, int n)
{
    require_level(n, "b_dagger");
    const auto ctx = context(params);
    const double an = params.a + n;
    const double c = params.b / (an * (an + 1.0));
    const double half_width = (2.0 * an + 1.0) / 2.0;
    const double delta_d = dn(params, n + 1) - dn(params, n);

    const Mat2 inv_rho = half_width * pauli::sigma0() - 0.5 * pauli::sigma3();
    const Mat2 constant = -half_width * c * pauli::sigma0() -
                          (delta_d / 2.0) * (I * pauli::sigma1() - pauli::sigma2()) - 0.5 * c * pauli::sigma3();
    return MatrixOp(-pauli::sigma0(), laurent_matrix(ctx, {{inv_rho, -1}, {constant, 0}}));
}

MatrixOp a_dagger(const DiracParams& params, int n)
{
    const MatrixOp b = b_dagger(params, n);
    std::vector<ExpoPoly> entries;
    entries.reserve(16);
    const ExpoPoly zero(b.potential(0, 0).context());
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            entries.push_back(r / 2 == c / 2 ? b.potential(r % 2, c % 2) : zero);
        }
    }
    return MatrixOp(block_diag(b.dcoef()), std::move(entries));
}

MatrixOp a_op(const DiracParams& params, int n) { return a_dagger(params, n).adjoint(); }

SpinorFn kernel_chi(const DiracParams& params, int n)
{
    require_level(n, "kernel_chi");
    const auto ctx = context(params);
    return SpinorFn{{ExpoPoly::monomial(ctx, 1.0, Exponent{1, n}, DecayIndex::indexed(n)), ExpoPoly(ctx)}};
}

SpinorFn kernel_xi(const DiracParams& params, int n)
{
    require_level(n, "kernel_xi");
    const auto ctx = context(params);
    const double an = params.a + n;
    const double c = params.b / (an * (an + 1.0));
    const double k = an * an * (an + 1.0) * (an + 1.0) * (dn(params, n + 1) - dn(params, n)) /
                     (params.b * params.b);
    const auto decay = DecayIndex::indexed(n + 1);
    ExpoPoly upper(ctx, {ExpoTerm{I * k, Exponent{1, n}, decay}, ExpoTerm{-I * k * c, Exponent{1, n + 1}, decay}});
    return SpinorFn{{std::move(upper), ExpoPoly::monomial(ctx, 1.0, Exponent{1, n + 1}, decay)}};
}

char to_char(Family fam)
{
    switch (fam) {
    case Family::a: return 'a';
    case Family::b: return 'b';
    case Family::c: return 'c';
    case Family::d: return 'd';
    }
    return '?';
}

Family family_from_char(char c)
{
    switch (c) {
    case 'a': return Family::a;
    case 'b': return Family::b;
    case 'c': return Family::c;
    case 'd': return Family::d;
    default: throw InvalidParameters(std::string("unknown family '") + c + "'");
    }
}

double eigenvalue(const DiracParams& params, int n, Family fam)
{
    require_level(n, "eigenvalue");
    const bool from_xi = fam == Family::c || fam == Family::d;
    const bool negative = fam == Family::b || fam == Family::d;
    const double energy = std::sqrt(params.mbar * params.mbar + dn_squared(params, from_xi ? n + 1 : n));
    return negative ? -energy : energy;
}

Eigenvector eigenvector(const DiracParams& params, int n, Family fam)
{
    const bool from_xi = fam == Family::c || fam == Family::d;
    const double d = dn(params, from_xi ? n + 1 : n);
    const double ratio = lower_ratio(d, params.mbar, fam);
    const SpinorFn kernel = from_xi ? kernel_xi(params, n) : kernel_chi(params, n);
    return Eigenvector{stack(kernel, scale(ratio, kernel)), eigenvalue(params, n, fam)};
}

SpinorFn eigenfunction_chain(const DiracParams& params, int n, Family fam)
{
    SpinorFn f = eigenvector(params, n, fam).spinor;
    // A_1 ... A_n phi: apply A_n first
    for (int k = n; k >= 1; --k) {
        f = a_op(params, k - 1).apply(f);
    }
    return f;
}

SpinorFn normalized_chain(const DiracParams& params, int n, Family fam)
{
    const SpinorFn f = eigenfunction_chain(params, n, fam);
    const double norm2 = inner_product(f, f).real();
    if (!(norm2 > 0.0)) {
        throw DomainError("eigenfunction chain has zero norm");
    }
    return scale(1.0 / std::sqrt(norm2), f);
}

XiResidual superpotential_matrix_residual(const DiracParams& params, int n, std::span<const double> samples,
                                          SingularPolicy policy, const std::array<Complex, 4>& column_scale)
{
    std::array<SpinorFn, 4> columns;
    std::array<SpinorFn, 4> derivatives;
    for (std::size_t i = 0; i < 4; ++i) {
        columns[i] = scale(column_scale[i], eigenvector(params, n, all_families[i]).spinor);
        derivatives[i] = differentiate(columns[i]);
    }
    const MatrixOp adag = a_dagger(params, n);

    XiResidual result;
    for (const double rho : samples) {
        Mat4 xi;
        Mat4 dxi;
        for (int i = 0; i < 4; ++i) {
            xi.col(i) = eval(columns[i], rho);
            dxi.col(i) = eval(derivatives[i], rho);
        }
        const Eigen::JacobiSVD<Mat4> svd(xi);
        const auto& sv = svd.singularValues();
        if (!(sv(3) > 1e-12 * sv(0))) {
            if (policy == SingularPolicy::fail) {
                throw SingularXi("Xi is singular at rho = " + std::to_string(rho));
            }
            result.skipped.push_back(rho);
            continue;
        }
        // X = Xi' Xi^{-1}  <=>  Xi^T X^T = Xi'^T
        const Mat4 x = xi.transpose().fullPivLu().solve(dxi.transpose()).transpose();
        const Mat4 w = adag.potential_at(rho);
        result.max_residual = std::max(result.max_residual, (w - x).norm());
    }
    return result;
}

double spectrum_dirac(const PhysicalParams& phys, int n, int sign)
{
    require_level(n, "spectrum_dirac");
    if (sign != 1 && sign != -1) {
        throw InvalidParameters("sign must be +1 or -1");
    }
    phys.validate();
    if (!phys.has_bound_states()) {
        throw NoBoundStates("pz k must be positive for bound states");
    }
    const double mc = phys.m * phys.c;
    const double shifted = phys.lambda() / phys.hbar + n;
    const double radicand = 1.0 + phys.pz * phys.pz / (mc * mc) -
                            phys.pz * phys.pz * phys.k * phys.k /
                                (phys.hbar * phys.hbar * mc * mc * shifted * shifted);
    if (radicand < 0.0) {
        throw NegativeRadicand("negative radicand in the Dirac energy");
    }
    return sign * mc * phys.c * std::sqrt(radicand);
}

double spectrum_dirac_via_params(const PhysicalParams& phys, int n, int sign)
{
    if (sign != 1 && sign != -1) {
        throw InvalidParameters("sign must be +1 or -1");
    }
    const auto params = DiracParams::from_physical(phys);
    return sign * phys.c * phys.hbar * eigenvalue(params, n, Family::a);
}

double default_rho_max(const DiracParams& params, int n)
{
    params.validate();
    return 40.0 * (params.a + n + 1) / params.b;
}

FullSpinor::FullSpinor(const PhysicalParams& phys, Family fam, int n)
    : phys_(phys),
      rotation_(rotation_matrix(phys)),
      chain_(normalized_chain(DiracParams::from_physical(phys), n, fam)),
      energy_(phys.c * phys.hbar * eigenvalue(DiracParams::from_physical(phys), n, fam))
{
}

Eigen::Vector4cd FullSpinor::operator()(double rho, double phi, double z) const
{
    if (!(rho > 0.0)) {
        throw DomainError("full spinor requires rho > 0");
    }
    const Eigen::Vector4cd radial = eval(chain_, rho) / std::sqrt(rho);
    const double spin[4] = {1.0, -1.0, 1.0, -1.0};
    Eigen::Vector4cd phases;
    for (int i = 0; i < 4; ++i) {
        phases(i) = std::exp(I * (phys_.ell / phys_.hbar - spin[i] / 2.0) * phi);
    }
    return std::exp(I * phys_.pz * z / phys_.hbar) * phases.asDiagonal() * (rotation_ * radial);
}

Eigen::Vector4cd assemble_full_spinor(const PhysicalParams& phys, Family fam, int n, double rho, double phi,
                                      double z)
{
    return FullSpinor(phys, fam, n)(rho, phi, z);
}

} // namespace susy::dirac
