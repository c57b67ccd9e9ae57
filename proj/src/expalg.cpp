#include "susy/expalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "susy/errors.hpp"

namespace susy::expalg {

namespace {

void check_context(const Context& ctx)
{
    if (!std::isfinite(ctx.a) || !(ctx.a > 0.0) || !std::isfinite(ctx.b) || ctx.b < 0.0) {
        throw InvalidParameters("expalg context requires a > 0 and b >= 0");
    }
}

void check_same(const ExpoPoly& p, const ExpoPoly& q)
{
    if (!(p.context() == q.context())) {
        throw ContextMismatch("exponential polynomials built over different (a, b) contexts");
    }
}

bool key_less(const ExpoTerm& x, const ExpoTerm& y)
{
    if (x.decay != y.decay) {
        return x.decay < y.decay;
    }
    return x.exp < y.exp;
}

bool same_key(const ExpoTerm& x, const ExpoTerm& y) { return x.decay == y.decay && x.exp == y.exp; }

double gamma_ratio(double s, double gamma)
{
    // int_0^inf rho^s exp(-gamma rho) = Gamma(s+1) / gamma^(s+1)
    if (s + 1.0 < 160.0) {
        const double v = std::tgamma(s + 1.0) / std::pow(gamma, s + 1.0);
        if (std::isfinite(v) && v != 0.0) {
            return v;
        }
    }
    return std::exp(std::lgamma(s + 1.0) - (s + 1.0) * std::log(gamma));
}

} // namespace

double DecayIndex::rate(const Context& ctx) const
{
    return indexed_ ? ctx.b / (ctx.a + k_) : 0.0;
}

ExpoPoly::ExpoPoly(Context ctx) : ctx_(ctx) { check_context(ctx_); }

ExpoPoly::ExpoPoly(Context ctx, std::vector<ExpoTerm> terms, double scale)
    : ctx_(ctx), terms_(std::move(terms)), scale_(scale)
{
    check_context(ctx_);
    for (const auto& t : terms_) {
        if (t.exp.mu != 0 && t.exp.mu != 1) {
            throw ClosureError("exponent multiplier mu must be 0 or 1, got " + std::to_string(t.exp.mu));
        }
        if (!t.decay.is_zero() && !(ctx_.a + t.decay.k() > 0.0)) {
            throw DomainError("decay index k = " + std::to_string(t.decay.k()) + " needs a + k > 0");
        }
        scale_ = std::max(scale_, std::abs(t.coeff));
    }

    std::sort(terms_.begin(), terms_.end(), key_less);
    std::vector<ExpoTerm> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
        if (!merged.empty() && same_key(merged.back(), t)) {
            merged.back().coeff += t.coeff;
        } else {
            merged.push_back(t);
        }
    }
    const double cut = rel_tol * scale_;
    std::erase_if(merged, [cut](const ExpoTerm& t) { return std::abs(t.coeff) <= cut; });
    terms_ = std::move(merged);
}

ExpoPoly ExpoPoly::monomial(Context ctx, Complex coeff, Exponent exp, DecayIndex decay)
{
    return ExpoPoly(ctx, {ExpoTerm{coeff, exp, decay}});
}

ExpoPoly ExpoPoly::constant(Context ctx, Complex coeff)
{
    return monomial(ctx, coeff, Exponent{0, 0});
}

Complex ExpoPoly::coefficient(Exponent exp, DecayIndex decay) const
{
    for (const auto& t : terms_) {
        if (t.exp == exp && t.decay == decay) {
            return t.coeff;
        }
    }
    return {};
}

ExpoPoly add(const ExpoPoly& p, const ExpoPoly& q)
{
    check_same(p, q);
    std::vector<ExpoTerm> raw(p.terms().begin(), p.terms().end());
    raw.insert(raw.end(), q.terms().begin(), q.terms().end());
    return ExpoPoly(p.context(), std::move(raw), std::max(p.scale(), q.scale()));
}

ExpoPoly subtract(const ExpoPoly& p, const ExpoPoly& q) { return add(p, scale(-1.0, q)); }

ExpoPoly scale(Complex c, const ExpoPoly& p)
{
    std::vector<ExpoTerm> raw(p.terms().begin(), p.terms().end());
    for (auto& t : raw) {
        t.coeff *= c;
    }
    return ExpoPoly(p.context(), std::move(raw), std::abs(c) * p.scale());
}

ExpoPoly mul_power(const ExpoPoly& p, int s)
{
    std::vector<ExpoTerm> raw(p.terms().begin(), p.terms().end());
    for (auto& t : raw) {
        t.exp.j += s;
    }
    return ExpoPoly(p.context(), std::move(raw), p.scale());
}

ExpoPoly differentiate(const ExpoPoly& p)
{
    const Context& ctx = p.context();
    std::vector<ExpoTerm> raw;
    raw.reserve(2 * p.size());
    for (const auto& t : p.terms()) {
        const double power = t.exp.realized(ctx);
        if (power != 0.0) {
            raw.push_back({t.coeff * power, Exponent{t.exp.mu, t.exp.j - 1}, t.decay});
        }
        const double beta = t.decay.rate(ctx);
        if (beta != 0.0) {
            raw.push_back({-t.coeff * beta, t.exp, t.decay});
        }
    }
    return ExpoPoly(ctx, std::move(raw));
}

ExpoPoly multiply(const ExpoPoly& p, const ExpoPoly& q)
{
    check_same(p, q);
    std::vector<ExpoTerm> raw;
    raw.reserve(p.size() * q.size());
    for (const auto& x : p.terms()) {
        for (const auto& y : q.terms()) {
            if (!x.decay.is_zero() && !y.decay.is_zero()) {
                throw ClosureError("product of two decaying terms leaves the rate set");
            }
            const DecayIndex decay = x.decay.is_zero() ? y.decay : x.decay;
            raw.push_back({x.coeff * y.coeff, Exponent{x.exp.mu + y.exp.mu, x.exp.j + y.exp.j}, decay});
        }
    }
    return ExpoPoly(p.context(), std::move(raw));
}

ExpoPoly conj(const ExpoPoly& p)
{
    std::vector<ExpoTerm> raw(p.terms().begin(), p.terms().end());
    for (auto& t : raw) {
        t.coeff = std::conj(t.coeff);
    }
    return ExpoPoly(p.context(), std::move(raw), p.scale());
}

Complex eval(const ExpoPoly& p, double rho)
{
    if (!(rho > 0.0)) {
        throw DomainError("eval requires rho > 0, got " + std::to_string(rho));
    }
    const Context& ctx = p.context();
    Complex sum{};
    const auto terms = p.terms();
    // terms are grouped by decay, so each exponential is computed once
    std::size_t i = 0;
    while (i < terms.size()) {
        const DecayIndex decay = terms[i].decay;
        Complex group{};
        for (; i < terms.size() && terms[i].decay == decay; ++i) {
            group += terms[i].coeff * std::pow(rho, terms[i].exp.realized(ctx));
        }
        sum += group * std::exp(-decay.rate(ctx) * rho);
    }
    return sum;
}

Complex inner_product(const ExpoPoly& p, const ExpoPoly& q)
{
    check_same(p, q);
    const Context& ctx = p.context();
    Complex sum{};
    for (const auto& x : p.terms()) {
        for (const auto& y : q.terms()) {
            const double s = x.exp.realized(ctx) + y.exp.realized(ctx);
            const double gamma = x.decay.rate(ctx) + y.decay.rate(ctx);
            if (!(s > -1.0) || !(gamma > 0.0)) {
                throw DivergentIntegral("term product rho^" + std::to_string(s) + " exp(-" +
                                        std::to_string(gamma) + " rho) is not integrable on (0, inf)");
            }
            sum += std::conj(x.coeff) * y.coeff * gamma_ratio(s, gamma);
        }
    }
    return sum;
}

bool is_zero(const ExpoPoly& p, double tol)
{
    const double bound = tol * std::max(1.0, p.scale());
    return std::all_of(p.terms().begin(), p.terms().end(),
                       [bound](const ExpoTerm& t) { return std::abs(t.coeff) <= bound; });
}

bool operator==(const ExpoPoly& p, const ExpoPoly& q)
{
    if (!(p.context() == q.context()) || p.size() != q.size()) {
        return false;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& x = p.terms()[i];
        const auto& y = q.terms()[i];
        if (!same_key(x, y) || x.coeff != y.coeff) {
            return false;
        }
    }
    return true;
}

} // namespace susy::expalg
