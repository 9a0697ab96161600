#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "finsler/expr.hpp"
#include "support.hpp"

using namespace finsler;
using namespace finsler::test;

TEST_CASE("parsing: precedence and associativity") {
    CHECK(Expression::parse("2+3*4").eval_value({0, 0}) == 14.0);
    CHECK(Expression::parse("x1^2 + x2^2").eval_value({1, 2}) == 5.0);
    CHECK(Expression::parse("2^3^2").eval_value({0, 0}) == 512.0);   // right associative
    CHECK(Expression::parse("-x1^2").eval_value({2, 0}) == -4.0);    // ^ binds tighter than unary -
    CHECK(Expression::parse("(2+3)*4").eval_value({0, 0}) == 20.0);
    CHECK(Expression::parse("6/3/2").eval_value({0, 0}) == 1.0);     // left associative
    CHECK(Expression::parse("2*pi").eval_value({0, 0}) == doctest::Approx(2 * M_PI));
    CHECK(Expression::parse("log(e)").eval_value({0, 0}) == doctest::Approx(1.0));
    CHECK(Expression::parse("x1^-2").eval_value({2, 0}) == doctest::Approx(0.25));
    CHECK(Expression::parse("1.5e2").eval_value({0, 0}) == 150.0);
}

TEST_CASE("parsing: errors carry position and identifier context") {
    CHECK_THROWS_AS(Expression::parse("sin(q)"), UnknownIdentifier);
    try {
        Expression::parse("sin(q)");
    } catch (const UnknownIdentifier& e) {
        CHECK(e.name() == "q");
    }
    CHECK_THROWS_AS(Expression::parse("sinh(x1)"), UnknownIdentifier);
    CHECK_THROWS_AS(Expression::parse(""), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("1+"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("(x1"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("x1 x2"), SyntaxError);
    CHECK_THROWS_AS(Expression::parse("2."), SyntaxError);
    try {
        Expression::parse("1+*2");
    } catch (const SyntaxError& e) {
        CHECK(e.position() == 2);
    }
}

TEST_CASE("evaluation: jets carry the exact field partials") {
    JetSpace space(2, 0);

    Jet f = Expression::parse("x1^2+x2^2").eval(space, {1.0, 2.0});
    CHECK(f.value() == 5.0);
    CHECK(f.partial({1, 0, 0, 0}) == 2.0);
    CHECK(f.partial({2, 0, 0, 0}) == 2.0);
    CHECK(f.partial({1, 1, 0, 0}) == 0.0);

    Jet g = Expression::parse("-x2").eval(space, {0.3, 0.7});
    CHECK(g.value() == -0.7);
    CHECK(g.partial({0, 1, 0, 0}) == -1.0);
    CHECK(g.partial({1, 0, 0, 0}) == 0.0);
}

TEST_CASE("evaluation: derivative agreement with finite differences") {
    JetSpace space(2, 0);
    Expression f = Expression::parse("exp(x1*x2)");
    const Vec2 x0 = {1.0, 1.0};
    Jet j = f.eval(space, x0);
    ScalarFn fs = [&](const Point4& p) { return f.eval_value({p[0], p[1]}); };
    for (const auto& idx : all_indices(2, 0)) {
        const double want = fd_partial(fs, {x0[0], x0[1], 0, 0}, idx);
        CHECK_MESSAGE(rel_err(j.partial(idx), want) <= 1e-6, "partial(", idx[0], ",", idx[1], ")");
    }
}

TEST_CASE("evaluation: parsed polynomials match direct evaluation") {
    Rng rng(5150);
    Expression p = Expression::parse("2*x1^2*x2 - 0.5*x2^2 + 3*x1 - 7");
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        const double direct = 2 * a * a * b - 0.5 * b * b + 3 * a - 7;
        CHECK(std::abs(p.eval_value({a, b}) - direct) <= 1e-13 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("evaluation: domain errors name the offending subexpression") {
    JetSpace space(1, 0);
    CHECK_THROWS_AS(Expression::parse("log(x1-2)").eval(space, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Expression::parse("x1^0.5").eval(space, {-1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(Expression::parse("1/(x1-1)").eval(space, {1.0, 0.0}), DomainError);
    try {
        Expression::parse("log(x1-2)").eval(space, {1.0, 0.0});
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("log") != std::string::npos);
    }
    // integer powers of negative bases are fine
    CHECK(Expression::parse("x1^2").eval(space, {-3.0, 0.0}).value() == 9.0);
    CHECK(Expression::parse("x1^3").eval_value({-2.0, 0.0}) == -8.0);
}

TEST_CASE("round trip: parse(print(parse(t))) is structurally parse(t)") {
    const std::vector<std::string> corpus = {
        "x1^2 + x2^2",
        "-x2",
        "sin(x1)*cos(x2) - exp(x1/x2)",
        "sqrt(1 + x1^2)",
        "2^3^2",
        "-x1^2",
        "atan(x1*x2)/(1+x2^2)",
        "1.5e-3*x1 + pi",
        "log(2 + x1)^2",
    };
    for (const auto& t : corpus) {
        Expression e = Expression::parse(t);
        Expression e2 = Expression::parse(e.print());
        CHECK_MESSAGE(e == e2, "round trip failed for: ", t, " printed as ", e.print());
    }
}

TEST_CASE("fuzz: the parser never crashes, it throws or returns an AST") {
    Rng rng(0xfeedbeef);
    const std::string alphabet = "x12+-*/^().e sincoatqrlgp_3507";
    int parsed = 0, rejected = 0;
    for (int trial = 0; trial < 800; ++trial) {
        const int len = 1 + static_cast<int>(rng.uniform() * 24.0);
        std::string s;
        for (int i = 0; i < len; ++i)
            s.push_back(alphabet[static_cast<std::size_t>(rng.uniform() * alphabet.size())]);
        try {
            Expression e = Expression::parse(s);
            ++parsed;
            (void)e.print();
        } catch (const SyntaxError&) {
            ++rejected;
        } catch (const UnknownIdentifier&) {
            ++rejected;
        }
    }
    CHECK(parsed + rejected == 800);
    CHECK(parsed > 0); // the alphabet is chosen so some strings are valid
}

TEST_CASE("scalar fields: constants and jets share the evaluation path") {
    ScalarField c = ScalarField::constant(2.5);
    CHECK(c.value({1, 2}) == 2.5);
    JetSpace space(2, 0);
    CHECK(c.eval(space, {1, 2}).partial({1, 0, 0, 0}) == 0.0);

    ScalarField f("x1*x2");
    CHECK(eval_field(f, space, {3, 4}).value() == 12.0);
}
