#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "autf/errors.hpp"
#include "autf/expr.hpp"

#include "helpers.hpp"

#include <cmath>

using namespace autf;
using testutil::close;
using testutil::cplx;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("parse builds the documented structures") {
    CHECK(structurally_equal(
        parse("z^2 + 1"),
        make_sum({make_power(make_variable(), 2),
                  make_constant(GaussianRational::from_int(1))})));
    CHECK(structurally_equal(
        parse("exp(z)*sin(z)"),
        make_product({make_primitive(PrimitiveKind::Exp, make_variable()),
                      make_primitive(PrimitiveKind::Sin, make_variable())})));
    // Division by a constant folds into multiplication by the reciprocal.
    CHECK(structurally_equal(
        parse("z/2"),
        make_product({make_variable(),
                      make_constant(GaussianRational::from_ratio(1, 2))})));
    // Constant subexpressions fold; "pi" stays symbolic.
    CHECK(structurally_equal(parse("(1+i)^2"),
                             make_constant(cplx(0, 2))));
    CHECK(format(parse("pi")) == "pi");
    CHECK(format(parse("2*pi*z")) == "2*pi*z");
}

TEST_CASE("parse rejects non-entire expressions") {
    CHECK_THROWS_AS(parse("1/z"), NotEntireError);
    CHECK_THROWS_AS(parse("z/(z+1)"), NotEntireError);
    CHECK_THROWS_AS(parse("z/0"), NotEntireError);
    CHECK_THROWS_AS(parse("z/(1-1)"), NotEntireError);
    CHECK_THROWS_AS(parse("log(z)"), NotEntireError);
    CHECK_THROWS_AS(parse("sqrt(z)"), NotEntireError);
    CHECK_THROWS_AS(parse("tan(z)"), NotEntireError);
    CHECK_THROWS_AS(parse("z^-1"), NotEntireError);
    CHECK_THROWS_AS(parse("z^1.5"), NotEntireError);
}

TEST_CASE("syntax errors carry positions") {
    try {
        parse("z + ");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 4);
    }
    try {
        parse("z^(2)");
        FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
        CHECK(e.position == 2);
        CHECK(e.expected.find("integer") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("w"), SyntaxError);
    CHECK_THROWS_AS(parse("sin z"), SyntaxError);
    CHECK_THROWS_AS(parse("(z"), SyntaxError);
    CHECK_THROWS_AS(parse("z z"), SyntaxError);
}

TEST_CASE("format/parse round-trip is structurally stable") {
    for (const auto& text : testutil::corpus()) {
        ExprPtr f = parse(text);
        ExprPtr g = parse(format(f));
        CAPTURE(text);
        CAPTURE(format(f));
        CHECK(structurally_equal(f, g));
        // And formatting is a fixed point after one round.
        CHECK(format(g) == format(f));
    }
}

TEST_CASE("evaluate matches closed forms") {
    CHECK(evaluate(parse("z^2"), {3, 0}) == cplx(9, 0));
    CHECK(close(evaluate(parse("cos(z)"), {kPi, 0}), {-1, 0}, 1e-12));
    // (i/sqrt2)^4 + (i/sqrt2)^2 = 1/4 - 1/2
    cplx anchor(0, 0.7071067811865476);
    CHECK(close(evaluate(parse("z^4+z^2"), anchor), {-0.25, 0}, 1e-12));
    CHECK(close(evaluate(parse("sinh(z)+cosh(z)"), {1, 0}),
                {std::exp(1.0), 0}, 1e-12));
}

TEST_CASE("evaluate reports overflow instead of saturating") {
    CHECK_THROWS_AS(evaluate(parse("exp(z)"), {1000, 0}), OverflowError);
    CHECK_THROWS_AS(evaluate(parse("exp(exp(z))"), {10, 0}), OverflowError);
}

TEST_CASE("differentiate produces the expected trees") {
    CHECK(structurally_equal(differentiate(parse("z^2")), parse("2*z")));
    CHECK(structurally_equal(differentiate(parse("cos(z)")),
                             parse("-sin(z)")));
    CHECK(structurally_equal(differentiate(parse("z^4 + z^2")),
                             parse("4*z^3 + 2*z")));
}

TEST_CASE("derivative agrees with the finite-difference oracle") {
    testutil::Rng rng(11);
    for (const auto& text : testutil::corpus()) {
        ExprPtr f = parse(text);
        ExprPtr df = differentiate(f);
        for (int k = 0; k < 100; ++k) {
            cplx z = rng.in_disk({0, 0}, 2.0);
            cplx expected = testutil::central_diff(f, z, 1e-5);
            cplx got = evaluate(df, z);
            CAPTURE(text);
            CAPTURE(z);
            CHECK(std::abs(got - expected) <= 1e-5 * (1.0 + std::abs(got)));
        }
    }
}

TEST_CASE("entire corpus evaluates everywhere sampled") {
    testutil::Rng rng(12);
    for (const auto& text : testutil::corpus()) {
        ExprPtr f = parse(text);
        for (int k = 0; k < 50; ++k)
            CHECK_NOTHROW(evaluate(f, rng.in_disk({0, 0}, 2.0)));
    }
}

TEST_CASE("to_polynomial expands and tracks exactness") {
    auto p = to_polynomial(parse("z^4 + z^2"));
    REQUIRE(p.has_value());
    CHECK(p->is_exact());
    REQUIRE(p->coeffs.size() == 5);
    CHECK(p->coeffs[0] == cplx(0, 0));
    CHECK(p->coeffs[2] == cplx(1, 0));
    CHECK(p->coeffs[3] == cplx(0, 0));
    CHECK(p->coeffs[4] == cplx(1, 0));

    CHECK_FALSE(to_polynomial(parse("exp(z)")).has_value());
    CHECK_FALSE(to_polynomial(parse("z + cos(z)")).has_value());

    // Binomial oracle for (z+1)^2: coefficients C(2,k).
    auto q = to_polynomial(parse("(z+1)^2"));
    REQUIRE(q.has_value());
    CHECK(q->is_exact());
    REQUIRE(q->coeffs.size() == 3);
    long long binom[3] = {1, 2, 1};
    for (int k = 0; k < 3; ++k)
        CHECK(q->coeffs[k] == cplx(static_cast<double>(binom[k]), 0));

    // pi clears the exactness flag; plain decimals keep it.
    auto r = to_polynomial(parse("pi*z^2"));
    REQUIRE(r.has_value());
    CHECK_FALSE(r->is_exact());
    auto s = to_polynomial(parse("0.5*z^2 + 1/3"));
    REQUIRE(s.has_value());
    CHECK(s->is_exact());
}

TEST_CASE("to_polynomial cancels exactly") {
    // (z+1)*(z-1) - z^2 = -1: the z^2 coefficient cancels exactly and the
    // degree drops.
    auto p = to_polynomial(parse("(z+1)*(z-1) - z^2"));
    REQUIRE(p.has_value());
    CHECK(p->degree() == 0);
    CHECK(p->coeffs[0] == cplx(-1, 0));
}

TEST_CASE("polynomial faithfulness against Horner") {
    testutil::Rng rng(13);
    for (const auto& text : testutil::corpus()) {
        ExprPtr f = parse(text);
        auto p = to_polynomial(f);
        if (!p) continue;
        for (int k = 0; k < 100; ++k) {
            cplx z = rng.in_disk({0, 0}, 2.0);
            cplx direct = evaluate(f, z);
            cplx horner = p->horner(z);
            CAPTURE(text);
            CHECK(std::abs(direct - horner) <=
                  1e-10 * (1.0 + std::abs(direct)));
        }
    }
}
