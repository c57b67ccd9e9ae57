#pragma once

/// \file expalg.hpp
///
/// Exact algebra of exponential-polynomial functions on (0, inf):
///
///     f(rho) = sum_t c_t rho^(mu_t a + j_t) exp(-beta_t rho)
///
/// Powers and decay rates are stored as integer keys relative to a context
/// (a, b), so that like terms merge exactly even when a is irrational. The
/// decay rates are restricted to beta = 0 or beta = b / (a + k).

#include <compare>
#include <complex>
#include <span>
#include <vector>

namespace susy::expalg {

using Complex = std::complex<double>;

/// Coefficients below rel_tol times the operation scale are dropped on canonicalization.
inline constexpr double rel_tol = 1e-13;

struct Context {
    double a = 1.0;
    double b = 1.0;

    bool operator==(const Context&) const = default;
};

/// Realized power p = mu * a + j.
struct Exponent {
    int mu = 0;
    int j = 0;

    double realized(const Context& ctx) const { return mu * ctx.a + j; }
    auto operator<=>(const Exponent&) const = default;
};

/// beta = 0 (Zero) or beta = b / (a + k) (Indexed).
class DecayIndex {
public:
    static constexpr DecayIndex zero() { return DecayIndex(false, 0); }
    static constexpr DecayIndex indexed(int k) { return DecayIndex(true, k); }

    bool is_zero() const { return !indexed_; }
    int k() const { return k_; }
    double rate(const Context& ctx) const;

    auto operator<=>(const DecayIndex&) const = default;

private:
    constexpr DecayIndex(bool indexed, int k) : indexed_(indexed), k_(indexed ? k : 0) {}

    bool indexed_;
    int k_;
};

struct ExpoTerm {
    Complex coeff;
    Exponent exp;
    DecayIndex decay = DecayIndex::zero();
};

/// Immutable canonical exponential polynomial. Terms are sorted by
/// (decay, exponent), keys are unique and coefficients nonzero.
class ExpoPoly {
public:
    /// Zero element of the given context.
    explicit ExpoPoly(Context ctx);

    /// Canonicalizes `terms`. `scale` is the magnitude of the inputs the terms
    /// were computed from; it sets the dropping threshold and is remembered for
    /// is_zero. The raw term magnitudes always contribute.
    ExpoPoly(Context ctx, std::vector<ExpoTerm> terms, double scale = 0.0);

    static ExpoPoly monomial(Context ctx, Complex coeff, Exponent exp,
                             DecayIndex decay = DecayIndex::zero());
    static ExpoPoly constant(Context ctx, Complex coeff);

    const Context& context() const { return ctx_; }
    std::span<const ExpoTerm> terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    /// Largest coefficient magnitude seen while building this value.
    double scale() const { return scale_; }

    /// Coefficient of the given key, zero when absent.
    Complex coefficient(Exponent exp, DecayIndex decay) const;

private:
    Context ctx_;
    std::vector<ExpoTerm> terms_;
    double scale_ = 0.0;
};

ExpoPoly add(const ExpoPoly& p, const ExpoPoly& q);
ExpoPoly subtract(const ExpoPoly& p, const ExpoPoly& q);
ExpoPoly scale(Complex c, const ExpoPoly& p);
/// Multiplies by rho^s.
ExpoPoly mul_power(const ExpoPoly& p, int s);
ExpoPoly differentiate(const ExpoPoly& p);
/// Product of two polynomials. Throws ClosureError when the result would leave
/// the algebra (two nonzero decays, or a combined mu above 1).
ExpoPoly multiply(const ExpoPoly& p, const ExpoPoly& q);
/// Complex conjugate of every coefficient.
ExpoPoly conj(const ExpoPoly& p);

/// Throws DomainError for rho <= 0.
Complex eval(const ExpoPoly& p, double rho);

/// Exact  int_0^inf conj(p) q d rho  via Gamma functions. Throws DivergentIntegral.
Complex inner_product(const ExpoPoly& p, const ExpoPoly& q);

/// True iff every coefficient magnitude is at most tol * max(1, p.scale()).
bool is_zero(const ExpoPoly& p, double tol);

inline ExpoPoly operator+(const ExpoPoly& p, const ExpoPoly& q) { return add(p, q); }
inline ExpoPoly operator-(const ExpoPoly& p, const ExpoPoly& q) { return subtract(p, q); }
inline ExpoPoly operator*(Complex c, const ExpoPoly& p) { return scale(c, p); }
inline ExpoPoly operator*(double c, const ExpoPoly& p) { return scale(Complex(c), p); }

/// Structural equality of canonical forms (exact coefficient comparison).
bool operator==(const ExpoPoly& p, const ExpoPoly& q);

} // namespace susy::expalg
