#include <doctest.h>

#include <cmath>

#include "susy/errors.hpp"
#include "susy/expalg.hpp"
#include "test_support.hpp"

using namespace susy;
using namespace susy::expalg;
using susy::testing::Generator;

namespace {

const Context fig2{1.5, 0.5};

ExpoPoly rho_a_decay(const Context& ctx, int k) { return ExpoPoly::monomial(ctx, 1.0, Exponent{1, 0}, DecayIndex::indexed(k)); }

} // namespace

TEST_CASE("add: identity, inverse and like-term merge")
{
    Generator gen(1);
    const auto p = gen.poly(fig2);
    CHECK(add(p, ExpoPoly(fig2)) == p);
    CHECK(add(p, scale(-1.0, p)).empty());

    const auto x = rho_a_decay(fig2, 1);
    const auto sum = x + 2.0 * x;
    REQUIRE(sum.size() == 1);
    CHECK(sum.terms()[0].coeff == Complex(3.0));
    CHECK(sum.terms()[0].exp == Exponent{1, 0});
}

TEST_CASE("add rejects mixed contexts")
{
    const auto p = ExpoPoly::constant(Context{1.0, 1.0}, 1.0);
    const auto q = ExpoPoly::constant(Context{1.0, 2.0}, 1.0);
    CHECK_THROWS_AS(add(p, q), ContextMismatch);
    CHECK_THROWS_AS(inner_product(p, q), ContextMismatch);
    CHECK_THROWS_AS(multiply(p, q), ContextMismatch);
}

TEST_CASE("scale")
{
    Generator gen(2);
    const auto p = gen.poly(fig2);
    CHECK(scale(1.0, p) == p);
    CHECK(scale(0.0, p).empty());

    const Complex i(0.0, 1.0);
    const auto x = ExpoPoly::monomial(fig2, 1.0, Exponent{1, 0});
    const auto twice = scale(i, scale(i, x));
    REQUIRE(twice.size() == 1);
    CHECK(twice.terms()[0].coeff == Complex(-1.0, 0.0));
}

TEST_CASE("mul_power shifts offsets")
{
    const auto x = ExpoPoly::monomial(fig2, 1.0, Exponent{1, 1}, DecayIndex::indexed(1));
    const auto shifted = mul_power(x, -1);
    REQUIRE(shifted.size() == 1);
    CHECK(shifted.terms()[0].exp == Exponent{1, 0});
    CHECK(shifted.terms()[0].decay == DecayIndex::indexed(1));

    Generator gen(3);
    const auto p = gen.poly(fig2);
    CHECK(mul_power(p, 0) == p);
    CHECK(mul_power(mul_power(p, 2), -2) == p);
}

TEST_CASE("differentiate: product rule, constants, plain powers")
{
    const Context ctx{1.5, 0.5};
    const auto x = rho_a_decay(ctx, 1); // rho^1.5 exp(-0.2 rho)
    const auto dx = differentiate(x);
    const double beta = 0.5 / 2.5;
    CHECK(dx.coefficient(Exponent{1, -1}, DecayIndex::indexed(1)) == Complex(1.5));
    CHECK(dx.coefficient(Exponent{1, 0}, DecayIndex::indexed(1)) == Complex(-beta));
    CHECK(dx.size() == 2);

    CHECK(differentiate(ExpoPoly::constant(ctx, 4.0)).empty());

    const auto sq = ExpoPoly::monomial(ctx, 1.0, Exponent{0, 2});
    const auto dsq = differentiate(sq);
    REQUIRE(dsq.size() == 1);
    CHECK(dsq.terms()[0].exp == Exponent{0, 1});
    CHECK(dsq.terms()[0].coeff == Complex(2.0));
}

TEST_CASE("eval")
{
    const Context ctx{1.5, 0.5};
    CHECK(eval(ExpoPoly::monomial(ctx, 1.0, Exponent{1, 0}), 1.0) == Complex(1.0));
    CHECK(eval(ExpoPoly::monomial(ctx, 2.0, Exponent{0, 1}), 3.5).real() == doctest::Approx(7.0));

    // rho^1.5 exp(-0.2 rho) at rho = 2, checked against plain scalar arithmetic
    const double expected = std::pow(2.0, 1.5) * std::exp(-0.4);
    CHECK(eval(rho_a_decay(ctx, 1), 2.0).real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(1.8959514004683).epsilon(1e-12));

    CHECK_THROWS_AS(eval(rho_a_decay(ctx, 1), 0.0), DomainError);
    CHECK_THROWS_AS(eval(rho_a_decay(ctx, 1), -1.0), DomainError);
}

TEST_CASE("inner_product via Gamma functions")
{
    // rho e^{-rho/2}: a = 1, b = 1, k = 1 gives beta = 1/2
    const Context one{1.0, 1.0};
    const auto f = ExpoPoly::monomial(one, 1.0, Exponent{0, 1}, DecayIndex::indexed(1));
    CHECK(inner_product(f, f).real() == doctest::Approx(2.0).epsilon(1e-14));

    const auto g = ExpoPoly::monomial(one, 1.0, Exponent{0, 0}, DecayIndex::indexed(0));
    CHECK(inner_product(g, g).real() == doctest::Approx(0.5).epsilon(1e-14));

    const auto x = rho_a_decay(fig2, 1);
    CHECK(inner_product(x, x).real() == doctest::Approx(std::tgamma(4.0) / std::pow(0.4, 4.0)).epsilon(1e-13));
    CHECK(inner_product(x, x).real() == doctest::Approx(234.375).epsilon(1e-13));
}

TEST_CASE("inner_product divergences")
{
    const Context ctx{1.0, 1.0};
    const auto no_decay = ExpoPoly::monomial(ctx, 1.0, Exponent{0, 1});
    CHECK_THROWS_AS(inner_product(no_decay, no_decay), DivergentIntegral);
    const auto singular = ExpoPoly::monomial(ctx, 1.0, Exponent{0, -1}, DecayIndex::indexed(0));
    CHECK_THROWS_AS(inner_product(singular, singular), DivergentIntegral);
}

TEST_CASE("is_zero")
{
    Generator gen(4);
    const auto p = gen.poly(fig2);
    CHECK(is_zero(p - p, 1e-12));
    CHECK_FALSE(is_zero(ExpoPoly::monomial(fig2, 1.0, Exponent{1, 0}), 1e-12));
    CHECK(is_zero(ExpoPoly(fig2), 1e-12));
}

TEST_CASE("construction validates keys")
{
    CHECK_THROWS_AS(ExpoPoly::monomial(fig2, 1.0, Exponent{2, 0}), ClosureError);
    CHECK_THROWS_AS(ExpoPoly::monomial(fig2, 1.0, Exponent{1, 0}, DecayIndex::indexed(-2)), DomainError);
    CHECK_THROWS_AS(ExpoPoly(Context{0.0, 1.0}), InvalidParameters);

    const auto decaying = rho_a_decay(fig2, 1);
    CHECK_THROWS_AS(multiply(decaying, decaying), ClosureError);
    const auto rho_a = ExpoPoly::monomial(fig2, 1.0, Exponent{1, 0});
    CHECK_THROWS_AS(multiply(rho_a, rho_a), ClosureError);
}

TEST_CASE("property: closure and linearity of differentiate")
{
    Generator gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const Context ctx{gen.uniform(0.3, 3.0), gen.uniform(0.2, 3.0)};
        const auto p = gen.poly(ctx);
        const auto q = gen.poly(ctx);
        const auto lhs = differentiate(p + q);
        const auto rhs = differentiate(p) + differentiate(q);
        CHECK(is_zero(lhs - rhs, 1e-13));
        for (const auto& t : lhs.terms()) {
            CHECK((t.exp.mu == 0 || t.exp.mu == 1));
            CHECK((t.decay.is_zero() || ctx.a + t.decay.k() > 0.0));
        }
    }
}

TEST_CASE("property: eval matches central differences of differentiate")
{
    Generator gen(6);
    const double h = 1e-5;
    for (int trial = 0; trial < 200; ++trial) {
        const Context ctx{gen.uniform(0.3, 3.0), gen.uniform(0.2, 3.0)};
        const auto p = gen.poly(ctx);
        const double rho = gen.uniform(0.5, 5.0);
        const Complex numeric = (eval(p, rho + h) - eval(p, rho - h)) / (2.0 * h);
        const Complex exact = eval(differentiate(p), rho);
        double magnitude = 1.0;
        for (const auto& t : p.terms()) {
            magnitude += std::abs(eval(ExpoPoly(ctx, {t}), rho));
        }
        CHECK(std::abs(numeric - exact) <= 1e-7 * std::max(magnitude, std::abs(exact)));
    }
}

TEST_CASE("property: <p, p> is real and nonnegative")
{
    Generator gen(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Context ctx{gen.uniform(0.3, 3.0), gen.uniform(0.2, 3.0)};
        const auto p = gen.integrable_poly(ctx);
        const Complex norm2 = inner_product(p, p);
        CHECK(std::abs(norm2.imag()) <= 1e-12 * std::abs(norm2.real()));
        CHECK(norm2.real() >= 0.0);
    }
}

TEST_CASE("property: Gamma inner product agrees with adaptive quadrature")
{
    Generator gen(8);
    for (int trial = 0; trial < 40; ++trial) {
        const Context ctx{gen.uniform(0.3, 3.0), gen.uniform(0.5, 3.0)};
        const auto p = gen.integrable_poly(ctx);
        const auto q = gen.integrable_poly(ctx);
        const double gamma = susy::testing::slowest_rate(p) + susy::testing::slowest_rate(q);
        const double rho_max = 80.0 / gamma;
        const Complex exact = inner_product(p, q);
        const Complex numeric = susy::testing::quadrature_inner(p, q, rho_max);
        // compare against the size of the integral of |p q|, which bounds cancellation
        const Complex scale_pp = inner_product(p, p);
        const Complex scale_qq = inner_product(q, q);
        const double bound = std::sqrt(scale_pp.real() * scale_qq.real());
        CHECK(std::abs(exact - numeric) <= 1e-8 * bound);
    }
}
