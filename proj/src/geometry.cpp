#include "finsler/geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace finsler {

namespace {

void check_domain(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    if (F.domain && !F.domain(x, y))
        throw DomainError("point (" + std::to_string(x[0]) + "," + std::to_string(x[1]) +
                          ") direction (" + std::to_string(y[0]) + "," + std::to_string(y[1]) +
                          ") outside the declared domain");
}

struct Pipeline {
    Jet F2;
    M2<Jet> g;
    M2<Jet> ginv;
    V2<Jet> G;
};

M2<Jet> invert(const M2<Jet>& g) {
    Jet det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    double scale = 0.0;
    for (const auto& row : g)
        for (const auto& e : row) scale = std::max(scale, std::abs(e.value()));
    if (std::abs(det.value()) <= 1e-12 * scale * scale)
        throw SingularMetric("metric determinant " + std::to_string(det.value()) +
                             " vanishes (scale " + std::to_string(scale) + ")");
    return {{{g[1][1] / det, -g[0][1] / det}, {-g[1][0] / det, g[0][0] / det}}};
}

// F^2, fundamental tensor and spray coefficients as jets. Validity:
// F (2,4) -> g (2,2), G (1,2), exactly enough for the curvature formula.
Pipeline spray_pipeline(const FinslerFunction& F, const JetSpace& space, const Vec2& x, const Vec2& y) {
    Pipeline p;
    Jet f = F.eval(space, x, y);
    if (f.value() <= 0.0)
        throw DomainError("F = " + std::to_string(f.value()) + " is not positive at the evaluation point");
    p.F2 = f * f;

    V2<Jet> dF2dy = {p.F2.derivative(VarY1), p.F2.derivative(VarY2)};
    p.g[0][0] = 0.5 * dF2dy[0].derivative(VarY1);
    p.g[0][1] = 0.5 * dF2dy[0].derivative(VarY2);
    p.g[1][0] = p.g[0][1];
    p.g[1][1] = 0.5 * dF2dy[1].derivative(VarY2);
    p.ginv = invert(p.g);

    const auto seeds = seed_point(space, {x[0], x[1], y[0], y[1]},
                                  {space.x_order() > 0, space.x_order() > 0,
                                   space.y_order() > 0, space.y_order() > 0});
    V2<Jet> dF2dx = {p.F2.derivative(VarX1), p.F2.derivative(VarX2)};
    for (int i = 0; i < 2; ++i) {
        Jet acc = Jet::constant(space, 0.0);
        for (int l = 0; l < 2; ++l) {
            Jet bracket = dF2dx[static_cast<std::size_t>(l)].derivative(VarY1) * seeds[VarY1] +
                          dF2dx[static_cast<std::size_t>(l)].derivative(VarY2) * seeds[VarY2] -
                          dF2dx[static_cast<std::size_t>(l)];
            acc += p.ginv[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] * bracket;
        }
        p.G[static_cast<std::size_t>(i)] = 0.25 * acc;
    }
    return p;
}

} // namespace

FinslerFunction euclidean_finsler() {
    FinslerFunction F;
    F.eval = [](const JetSpace& s, const Vec2& x, const Vec2& y) {
        const bool ax = s.x_order() > 0, ay = s.y_order() > 0;
        const auto seeds = seed_point(s, {x[0], x[1], y[0], y[1]}, {ax, ax, ay, ay});
        return sqrt(seeds[VarY1] * seeds[VarY1] + seeds[VarY2] * seeds[VarY2]);
    };
    F.domain = [](const Vec2&, const Vec2& y) { return y[0] != 0.0 || y[1] != 0.0; };
    return F;
}

FinslerFunction riemannian_finsler(MetricField a) {
    FinslerFunction F;
    F.eval = [a](const JetSpace& s, const Vec2& x, const Vec2& y) {
        const bool ax = s.x_order() > 0, ay = s.y_order() > 0;
        const auto seeds = seed_point(s, {x[0], x[1], y[0], y[1]}, {ax, ax, ay, ay});
        M2<Jet> aj = a.eval(s, x);
        Jet q = Jet::constant(s, 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                q += aj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                     seeds[static_cast<std::size_t>(VarY1 + i)] * seeds[static_cast<std::size_t>(VarY1 + j)];
        return sqrt(q);
    };
    F.domain = [](const Vec2&, const Vec2& y) { return y[0] != 0.0 || y[1] != 0.0; };
    return F;
}

M2<double> fundamental_tensor(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    check_domain(F, x, y);
    JetSpace space(0, 2);
    Jet f = F.eval(space, x, y);
    Jet F2 = f * f;
    M2<double> g;
    g[0][0] = 0.5 * F2.partial({0, 0, 2, 0});
    g[0][1] = 0.5 * F2.partial({0, 0, 1, 1});
    g[1][0] = g[0][1];
    g[1][1] = 0.5 * F2.partial({0, 0, 0, 2});
    const double scale = std::max({std::abs(g[0][0]), std::abs(g[0][1]), std::abs(g[1][1])});
    if (g[0][0] * g[1][1] - g[0][1] * g[0][1] <= 1e-12 * scale * scale)
        throw SingularMetric("fundamental tensor determinant " +
                             std::to_string(g[0][0] * g[1][1] - g[0][1] * g[0][1]) + " is not positive");
    return g;
}

V2<double> spray_coefficients(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    check_domain(F, x, y);
    JetSpace space(1, 2);
    auto p = spray_pipeline(F, space, x, y);
    return {p.G[0].value(), p.G[1].value()};
}

namespace {

struct CurvatureCore {
    M2<double> g;
    M2<double> R;
    double F2val;
    double Ric;
    V2<double> Gval;
};

CurvatureCore curvature_core(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    JetSpace space(2, 4);
    auto p = spray_pipeline(F, space, x, y);

    double dGdx[2][2], dGdy[2][2], d2Gdxdy[2][2][2], d2Gdydy[2][2][2];
    for (int i = 0; i < 2; ++i) {
        const Jet& Gi = p.G[static_cast<std::size_t>(i)];
        dGdx[i][0] = Gi.partial({1, 0, 0, 0});
        dGdx[i][1] = Gi.partial({0, 1, 0, 0});
        dGdy[i][0] = Gi.partial({0, 0, 1, 0});
        dGdy[i][1] = Gi.partial({0, 0, 0, 1});
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) {
                MultiIndex mx = {0, 0, 0, 0};
                mx[static_cast<std::size_t>(j)] += 1;     // x^j
                mx[static_cast<std::size_t>(2 + k)] += 1; // y^k
                d2Gdxdy[i][j][k] = Gi.partial(mx);
                MultiIndex my = {0, 0, 0, 0};
                my[static_cast<std::size_t>(2 + j)] += 1;
                my[static_cast<std::size_t>(2 + k)] += 1;
                d2Gdydy[i][j][k] = Gi.partial(my);
            }
    }

    CurvatureCore c;
    c.F2val = p.F2.value();
    c.Gval = {p.G[0].value(), p.G[1].value()};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            p.g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].value();
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            double r = 2.0 * dGdx[i][k];
            for (int j = 0; j < 2; ++j) {
                r -= y[static_cast<std::size_t>(j)] * d2Gdxdy[i][j][k];
                r += 2.0 * c.Gval[static_cast<std::size_t>(j)] * d2Gdydy[i][j][k];
                r -= dGdy[i][j] * dGdy[j][k];
            }
            c.R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = r;
        }
    }
    c.Ric = c.R[0][0] + c.R[1][1];
    return c;
}

} // namespace

RiemannResult riemann_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    check_domain(F, x, y);
    auto c = curvature_core(F, x, y);
    return {c.R, c.Ric};
}

FlagResult flag_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    check_domain(F, x, y);
    auto c = curvature_core(F, x, y);
    const double K = c.Ric / c.F2val;
    V2<double> ylow = {c.g[0][0] * y[0] + c.g[0][1] * y[1], c.g[1][0] * y[0] + c.g[1][1] * y[1]};
    double res = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const double expect = K * (c.F2val * (i == k ? 1.0 : 0.0) -
                                       y[static_cast<std::size_t>(i)] * ylow[static_cast<std::size_t>(k)]);
            res = std::max(res, std::abs(c.R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] - expect));
        }
    return {K, res};
}

BHVolume bh_volume_factor(const FinslerFunction& F, const Vec2& x, double rel_tol, int max_nodes) {
    JetSpace space(1, 0);

    // integrand F(x, e(t))^{-2} and its two x-derivatives from one jet
    auto node = [&](double t, double out[3]) {
        const Vec2 dir = {std::cos(t), std::sin(t)};
        check_domain(F, x, dir);
        Jet f = F.eval(space, x, dir);
        if (f.value() <= 0.0)
            throw DomainError("F not positive on the unit circle at angle " + std::to_string(t));
        Jet h = 1.0 / (f * f);
        out[0] = h.value();
        out[1] = h.partial({1, 0, 0, 0});
        out[2] = h.partial({0, 1, 0, 0});
    };

    int n = 32;
    double acc[3] = {0.0, 0.0, 0.0};
    double v[3];
    for (int i = 0; i < n; ++i) {
        node(2.0 * M_PI * i / n, v);
        for (int j = 0; j < 3; ++j) acc[j] += v[j];
    }
    double integral[3], prev[3];
    for (int j = 0; j < 3; ++j) integral[j] = acc[j] * (2.0 * M_PI / n);

    while (true) {
        for (int j = 0; j < 3; ++j) prev[j] = integral[j];
        // midpoints of the current grid double the resolution
        for (int i = 0; i < n; ++i) {
            node(2.0 * M_PI * (i + 0.5) / n, v);
            for (int j = 0; j < 3; ++j) acc[j] += v[j];
        }
        n *= 2;
        for (int j = 0; j < 3; ++j) integral[j] = acc[j] * (2.0 * M_PI / n);
        bool converged = true;
        for (int j = 0; j < 3; ++j)
            if (std::abs(integral[j] - prev[j]) > rel_tol * std::abs(integral[j]) + 1e-14)
                converged = false;
        if (converged) break;
        if (n >= max_nodes)
            throw QuadratureNonConvergence("unit-ball quadrature did not converge at " +
                                           std::to_string(n) + " nodes");
    }

    const double area = 0.5 * integral[0];
    BHVolume bh;
    bh.sigma = M_PI / area;
    bh.dln = {-0.5 * integral[1] / area, -0.5 * integral[2] / area};
    bh.nodes = n;
    return bh;
}

double s_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y, const BHVolume& bh) {
    check_domain(F, x, y);
    JetSpace space(1, 3); // dG/dy needs one more y-order than the spray itself
    auto p = spray_pipeline(F, space, x, y);
    const double divG = p.G[0].partial({0, 0, 1, 0}) + p.G[1].partial({0, 0, 0, 1});
    return divG - y[0] * bh.dln[0] - y[1] * bh.dln[1];
}

double s_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y) {
    return s_curvature(F, x, y, bh_volume_factor(F, x));
}

CurvatureSample curvature_sample(const FinslerFunction& F, const Vec2& x, const Vec2& y,
                                 const BHVolume* bh) {
    check_domain(F, x, y);
    CurvatureSample s;
    s.x = x;
    s.y = y;
    auto c = curvature_core(F, x, y);
    s.g = c.g;
    s.R = c.R;
    s.Ric = c.Ric;
    s.F = std::sqrt(c.F2val);
    s.K = c.Ric / c.F2val;
    s.G = c.Gval;
    V2<double> ylow = {c.g[0][0] * y[0] + c.g[0][1] * y[1], c.g[1][0] * y[0] + c.g[1][1] * y[1]};
    s.flag_residual = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            const double expect = s.K * (c.F2val * (i == k ? 1.0 : 0.0) -
                                         y[static_cast<std::size_t>(i)] * ylow[static_cast<std::size_t>(k)]);
            s.flag_residual = std::max(
                s.flag_residual,
                std::abs(c.R[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] - expect));
        }
    BHVolume local;
    if (bh == nullptr) {
        local = bh_volume_factor(F, x);
        bh = &local;
    }
    s.S = s_curvature(F, x, y, *bh);
    return s;
}

} // namespace finsler
