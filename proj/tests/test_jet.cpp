#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "finsler/jet.hpp"
#include "finsler/series.hpp"
#include "support.hpp"

using namespace finsler;
using namespace finsler::test;

TEST_CASE("seeding: linear coordinate functions") {
    JetSpace space(2, 4);
    auto seeds = seed_point(space, {3.0, 2.0, 0.5, 0.5}, {true, false, false, false});
    CHECK(seeds[VarX1].value() == 3.0);
    CHECK(seeds[VarX1].partial({1, 0, 0, 0}) == 1.0);
    CHECK(seeds[VarX1].partial({2, 0, 0, 0}) == 0.0);
    CHECK(seeds[VarX1].partial({1, 0, 1, 0}) == 0.0);
    // inactive variables are constants
    CHECK(seeds[VarX2].value() == 2.0);
    CHECK(seeds[VarX2].partial({0, 1, 0, 0}) == 0.0);
}

TEST_CASE("seeding: all four active") {
    JetSpace space(2, 4);
    auto seeds = seed_point(space, {1.0, 2.0, 0.5, 0.5});
    for (int v = 0; v < 4; ++v) {
        MultiIndex e = {0, 0, 0, 0};
        e[static_cast<std::size_t>(v)] = 1;
        CHECK(seeds[static_cast<std::size_t>(v)].partial(e) == 1.0);
    }
    // bilinear identity: d2(x1 x2)/dx1 dx2 = 1, value = 6 at (2,3)
    auto s2 = seed_point(space, {2.0, 3.0, 0.0, 0.0});
    Jet prod = s2[VarX1] * s2[VarX2];
    CHECK(prod.value() == 6.0);
    CHECK(prod.partial({1, 1, 0, 0}) == 1.0);
}

TEST_CASE("seeding rejects non-finite values") {
    JetSpace space(1, 1);
    CHECK_THROWS_AS(seed_point(space, {1.0, HUGE_VAL, 0.0, 0.0}), DomainError);
}

TEST_CASE("arithmetic: exp of zero jet, polynomial partials") {
    JetSpace space(2, 4);
    Jet zero = Jet::constant(space, 0.0);
    Jet e = exp(zero);
    CHECK(e.value() == 1.0);
    for (const auto& idx : all_indices(2, 4)) {
        if (idx == MultiIndex{0, 0, 0, 0}) continue;
        CHECK(e.partial(idx) == 0.0);
    }

    // f = (x1)^2 x2 at (2,3): d2 f/(dx1 dx2) = 2 x1 = 4
    auto s = seed_point(space, {2.0, 3.0, 0.0, 0.0});
    Jet f = s[VarX1] * s[VarX1] * s[VarX2];
    CHECK(f.partial({1, 1, 0, 0}) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("partial extraction: factorial convention") {
    JetSpace space(2, 4);
    CHECK(Jet::constant(space, 7.0).partial({0, 0, 0, 0}) == 7.0);
    auto s = seed_point(space, {0.0, 5.0, 0.0, 0.0});
    CHECK(s[VarX2].partial({0, 1, 0, 0}) == 1.0);

    // f = x1 (y1)^3: d^4 f / dx1 dy1^3 = 3! = 6
    auto s2 = seed_point(space, {0.7, 0.0, 0.3, 0.0});
    Jet f = s2[VarX1] * s2[VarY1] * s2[VarY1] * s2[VarY1];
    CHECK(f.partial({1, 0, 3, 0}) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("partial outside truncation orders raises OrderExceeded") {
    JetSpace space(2, 4);
    Jet c = Jet::constant(space, 1.0);
    CHECK_THROWS_AS(c.partial({3, 0, 0, 0}), OrderExceeded);
    CHECK_THROWS_AS(c.partial({0, 0, 5, 0}), OrderExceeded);
    // derivative extraction shrinks the valid region
    Jet d = c.derivative(VarX1);
    CHECK_THROWS_AS(d.partial({2, 0, 0, 0}), OrderExceeded);
}

TEST_CASE("space mismatch is rejected") {
    JetSpace a(2, 4), b(1, 2);
    CHECK_THROWS_AS(Jet::constant(a, 1.0) + Jet::constant(b, 1.0), SpaceMismatch);
}

TEST_CASE("division by zero-valued jet raises DomainError") {
    JetSpace space(1, 1);
    CHECK_THROWS_AS(Jet::constant(space, 1.0) / Jet::constant(space, 0.0), DomainError);
    CHECK_THROWS_AS(sqrt(Jet::constant(space, -1.0)), DomainError);
    CHECK_THROWS_AS(log(Jet::constant(space, 0.0)), DomainError);
    CHECK_THROWS_AS(pow(Jet::constant(space, -2.0), 0.25), DomainError);
}

namespace {

Jet random_jet(const JetSpace& space, Rng& rng, double value_floor = 0.0) {
    std::vector<double> c(static_cast<std::size_t>(space.size()));
    for (auto& x : c) x = rng.uniform(-1.0, 1.0);
    if (value_floor > 0.0 && std::abs(c[0]) < value_floor) c[0] = value_floor + rng.uniform();
    return Jet::with_coefficients(space, std::move(c));
}

void check_coeffs_close(const Jet& a, const Jet& b, double tol) {
    auto ca = a.coefficients(), cb = b.coefficients();
    REQUIRE(ca.size() == cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const double scale = std::max(1.0, std::abs(cb[i]));
        CHECK(std::abs(ca[i] - cb[i]) / scale <= tol);
    }
}

} // namespace

TEST_CASE("ring laws: distributivity and division inverse, coefficient-wise") {
    JetSpace space(2, 4);
    Rng rng(20240817);
    for (int trial = 0; trial < 25; ++trial) {
        Jet a = random_jet(space, rng);
        Jet b = random_jet(space, rng);
        Jet c = random_jet(space, rng);
        check_coeffs_close(a * (b + c), a * b + a * c, 1e-12);
        Jet d = random_jet(space, rng, 0.5);
        check_coeffs_close((a * d) / d, a, 1e-12);
    }
}

TEST_CASE("exactness on polynomials within truncation orders") {
    JetSpace space(2, 4);
    auto s = seed_point(space, {1.3, -0.7, 0.4, 1.1});
    // p = 2 x1^2 y1^3 y2 - 3 x1 x2 y2^2 + 5
    Jet p = 2.0 * s[VarX1] * s[VarX1] * s[VarY1] * s[VarY1] * s[VarY1] * s[VarY2] -
            3.0 * s[VarX1] * s[VarX2] * s[VarY2] * s[VarY2] + 5.0;
    const double x1 = 1.3, x2 = -0.7, y1 = 0.4, y2 = 1.1;
    CHECK(rel_err(p.value(), 2 * x1 * x1 * y1 * y1 * y1 * y2 - 3 * x1 * x2 * y2 * y2 + 5) <= 1e-13);
    CHECK(rel_err(p.partial({2, 0, 3, 1}), 2.0 * 2.0 * 6.0) <= 1e-13);      // 2 * 2! * 3!
    CHECK(rel_err(p.partial({1, 1, 0, 2}), -6.0) <= 1e-13);                 // -3 * 2!
    CHECK(rel_err(p.partial({1, 0, 3, 1}), 2.0 * 2.0 * x1 * 6.0) <= 1e-13);
    CHECK(p.partial({2, 0, 0, 2}) == 0.0);
}

TEST_CASE("finite-difference agreement on the worked composition") {
    // f = exp(sin(x1 + y1^2)). Successive derivatives of this one grow ~30x
    // per order, which pushes double-precision finite differences past their
    // truncation/rounding crossover around total order 5; orders <= 4 are
    // checked here, the damped random corpus below covers every stored index.
    JetSpace space(2, 4);
    const Point4 x0 = {0.3, -0.2, 0.45, 0.8};
    auto s = seed_point(space, x0);
    Jet f = exp(sin(s[VarX1] + s[VarY1] * s[VarY1]));
    ScalarFn fs = [](const Point4& p) { return std::exp(std::sin(p[0] + p[2] * p[2])); };
    for (const auto& idx : all_indices(2, 4)) {
        if (idx[0] + idx[1] + idx[2] + idx[3] > 4) continue;
        const double want = fd_partial(fs, x0, idx);
        CHECK_MESSAGE(rel_err(f.partial(idx), want) <= 1e-5,
                      "partial (", idx[0], ",", idx[1], ",", idx[2], ",", idx[3], "): jet ",
                      f.partial(idx), " vs fd ", want);
    }
}

TEST_CASE("finite-difference agreement on random compositions") {
    JetSpace space(2, 4);
    Rng rng(987654321);
    int done = 0;
    while (done < 20) {
        Composition comp = random_composition(rng);
        const Point4 x0 = {rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8),
                           rng.uniform(-0.8, 0.8)};
        auto s = seed_point(space, x0);
        Jet j = comp.jet(s);
        ++done;
        for (const auto& idx : all_indices(2, 4)) {
            const double want = fd_partial(comp.scalar, x0, idx);
            CHECK_MESSAGE(rel_err(j.partial(idx), want) <= 1e-5, "composition ", done, " partial (",
                          idx[0], ",", idx[1], ",", idx[2], ",", idx[3], "): jet ", j.partial(idx),
                          " vs fd ", want);
        }
    }
}

TEST_CASE("elementary functions match closed forms through compositions") {
    JetSpace space(2, 2);
    const Point4 x0 = {0.4, 0.3, 0.2, 0.6};
    auto s = seed_point(space, x0);

    // atan(x1 * y2): scalar closed form for a couple of derivatives
    Jet f = atan(s[VarX1] * s[VarY2]);
    const double u = 0.4 * 0.6;
    CHECK(rel_err(f.value(), std::atan(u)) <= 1e-14);
    CHECK(rel_err(f.partial({1, 0, 0, 0}), 0.6 / (1 + u * u)) <= 1e-12);

    // asinh via its logarithmic form
    Jet g = asinh(s[VarX2]);
    CHECK(rel_err(g.value(), std::log(0.3 + std::sqrt(1.09))) <= 1e-13);
    CHECK(rel_err(g.partial({0, 1, 0, 0}), 1.0 / std::sqrt(1.09)) <= 1e-12);

    // powi handles negative bases and negative exponents
    Jet h = powi(s[VarX1] - 1.0, 3);
    CHECK(rel_err(h.value(), std::pow(-0.6, 3)) <= 1e-13);
    Jet hinv = powi(s[VarX1] - 1.0, -2);
    CHECK(rel_err(hinv.value(), std::pow(-0.6, -2)) <= 1e-13);
}

TEST_CASE("antiderivative series composed into a jet (value from elsewhere, slope from the series)") {
    // Build log(1+s) as the antiderivative of 1/(1+s): the value coefficient
    // is supplied separately, all derivative coefficients shift over from the
    // integrand's series.
    JetSpace space(2, 2);
    const double s0 = 0.37;
    auto seeds = seed_point(space, {s0, 0.1, -0.2, 0.5});
    Jet inner = seeds[VarX1] + 0.5 * seeds[VarY1] * seeds[VarY2]; // inner argument

    Series integrand = 1.0 / (1.0 + Series::variable(5, inner.value()));
    Series lg = integrand.antiderivative(std::log(1.0 + inner.value()));
    std::vector<double> table(static_cast<std::size_t>(lg.order()) + 1);
    for (int k = 0; k <= lg.order(); ++k) table[static_cast<std::size_t>(k)] = lg[k];

    Jet composed = compose(inner, table);
    Jet direct = log(1.0 + inner);
    auto ca = composed.coefficients(), cb = direct.coefficients();
    for (std::size_t i = 0; i < ca.size(); ++i)
        CHECK(std::abs(ca[i] - cb[i]) <= 1e-14 * std::max(1.0, std::abs(cb[i])));
}

TEST_CASE("series: arithmetic and elementary recurrences against closed forms") {
    // g(s) = exp(s) / (1 + s^2) at s0 = 0.3, derivatives vs finite differences
    const double s0 = 0.3;
    Series s = Series::variable(6, s0);
    Series g = exp(s) / (1.0 + s * s);
    auto gs = [](double z) { return std::exp(z) / (1.0 + z * z); };
    const double h = 1e-2;
    double d1 = (gs(s0 + h) - gs(s0 - h)) / (2 * h);
    double d1b = (gs(s0 + h / 2) - gs(s0 - h / 2)) / h;
    CHECK(rel_err(g.derivative(1), (4 * d1b - d1) / 3) <= 1e-7);
    CHECK(rel_err(g.value(), gs(s0)) <= 1e-15);

    Series root = sqrt(1.0 + s * s);
    CHECK(rel_err(root.derivative(1), s0 / std::sqrt(1 + s0 * s0)) <= 1e-12);
    Series lg = log(2.0 + s);
    CHECK(rel_err(lg.derivative(2), -1.0 / ((2 + s0) * (2 + s0))) <= 1e-12);
    Series pw = pow(1.0 + s * s, 0.25);
    const double want = 0.25 * std::pow(1 + s0 * s0, -0.75) * 2 * s0;
    CHECK(rel_err(pw.derivative(1), want) <= 1e-12);
}
