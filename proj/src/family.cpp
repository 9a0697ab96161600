#include "finsler/family.hpp"

#include <cmath>
#include <string>

namespace finsler {

double phi_exponent(const FamilyParams& p, double s) {
    const double d1 = 1.0 + p.k1 * s * s, d2 = 1.0 + p.k2 * s * s;
    if (d1 <= 0.0 || d2 <= 0.0)
        throw DomainError("profile exponent undefined at s = " + std::to_string(s));
    return adaptive_simpson([&](double z) { return tau(p, z); }, 0.0, s, 1e-12);
}

Series phi_series(const FamilyParams& p, double s0, int order) {
    const double d1 = 1.0 + p.k1 * s0 * s0, d2 = 1.0 + p.k2 * s0 * s0;
    if (d1 <= 0.0 || d2 <= 0.0)
        throw DomainError("profile undefined at s = " + std::to_string(s0));
    Series s = Series::variable(order, s0);
    Series radicand = (1.0 + p.k1 * s * s) * (1.0 + p.k2 * s * s);
    Series tau_s = tau(p, Series::variable(std::max(0, order - 1), s0));
    Series big_phi = tau_s.antiderivative(phi_exponent(p, s0));
    // antiderivative adds one order; trim back by rebuilding at the target order
    Series big_phi_t(order);
    for (int k = 0; k <= order; ++k) big_phi_t.at(k) = big_phi[k];
    return pow(radicand, 0.25) * exp(big_phi_t);
}

double phi_value(const FamilyParams& p, double s) {
    const double d1 = 1.0 + p.k1 * s * s, d2 = 1.0 + p.k2 * s * s;
    if (d1 <= 0.0 || d2 <= 0.0)
        throw DomainError("profile undefined at s = " + std::to_string(s));
    return std::pow(d1 * d2, 0.25) * std::exp(phi_exponent(p, s));
}

Jet phi_jet(const FamilyParams& p, const Jet& s) {
    const int order = s.valid_x() + s.valid_y();
    Series tab = phi_series(p, s.value(), order);
    std::vector<double> t(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) t[static_cast<std::size_t>(k)] = tab[k];
    return compose(s, t);
}

StructureResiduals structure_residuals(const StructureData& d, const Vec2& x) {
    JetSpace space(1, 0);
    Jet u = d.u.eval(space, x);
    Jet v = d.v.eval(space, x);
    Jet B = d.B.eval(space, x);
    const double u1 = u.partial({1, 0, 0, 0}), u2 = u.partial({0, 1, 0, 0});
    const double v1 = v.partial({1, 0, 0, 0}), v2 = v.partial({0, 1, 0, 0});
    const double B1 = B.partial({1, 0, 0, 0}), B2 = B.partial({0, 1, 0, 0});
    auto nres = [](double r, double scale) { return std::abs(r) / (1.0 + std::abs(scale)); };
    StructureResiduals res;
    res.cr1 = nres(u1 - v2, std::max(std::abs(u1), std::abs(v2)));
    res.cr2 = nres(u2 + v1, std::max(std::abs(u2), std::abs(v1)));
    res.transport = nres(u.value() * B1 + v.value() * B2,
                         std::max(std::abs(u.value() * B1), std::abs(v.value() * B2)));
    return res;
}

namespace {

void enforce_structure(const StructureData& d, double tol, int grid_n) {
    const auto& box = d.domain.box;
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            const Vec2 x = {box[0] + (box[1] - box[0]) * (i + 0.5) / grid_n,
                            box[2] + (box[3] - box[2]) * (j + 0.5) / grid_n};
            if (!d.domain.contains(x)) continue;
            StructureResiduals r = structure_residuals(d, x);
            const char* which = nullptr;
            double val = 0.0;
            if (r.cr1 > tol) { which = "u_1 = v_2"; val = r.cr1; }
            else if (r.cr2 > tol) { which = "u_2 = -v_1"; val = r.cr2; }
            else if (r.transport > tol) { which = "u B_1 + v B_2 = 0"; val = r.transport; }
            if (which != nullptr)
                throw StructureViolation(std::string("structure equation ") + which +
                                         " violated at (" + std::to_string(x[0]) + "," +
                                         std::to_string(x[1]) + "), residual " + std::to_string(val));
        }
    }
}

} // namespace

StructureData build_structure(ScalarField u, ScalarField v, ScalarField B, Domain domain,
                              bool enforce, double tol, int grid_n) {
    StructureData d{std::move(u), std::move(v), std::move(B), std::move(domain)};
    if (d.u.empty() || d.v.empty() || d.B.empty()) throw ConfigError("structure fields must be non-empty");
    if (enforce) enforce_structure(d, tol, grid_n);
    return d;
}

StructureData build_structure_poly(const std::vector<std::complex<double>>& f_coeffs, ScalarField B,
                                   Domain domain, bool enforce, double tol, int grid_n) {
    if (f_coeffs.empty()) throw ConfigError("polynomial coefficient list is empty");
    // Horner in z = x1 + i x2 over expression trees:
    //   (re, im) -> (c_re + x1 re - x2 im, c_im + x1 im + x2 re)
    Expression re = Expression::number(f_coeffs.back().real());
    Expression im = Expression::number(f_coeffs.back().imag());
    Expression X1 = Expression::variable(0);
    Expression X2 = Expression::variable(1);
    for (auto it = f_coeffs.rbegin() + 1; it != f_coeffs.rend(); ++it) {
        Expression nre = Expression::binary(
            BinaryFn::Add, Expression::number(it->real()),
            Expression::binary(BinaryFn::Sub, Expression::binary(BinaryFn::Mul, X1, re),
                               Expression::binary(BinaryFn::Mul, X2, im)));
        Expression nim = Expression::binary(
            BinaryFn::Add, Expression::number(it->imag()),
            Expression::binary(BinaryFn::Add, Expression::binary(BinaryFn::Mul, X1, im),
                               Expression::binary(BinaryFn::Mul, X2, re)));
        re = nre;
        im = nim;
    }
    return build_structure(ScalarField(re), ScalarField(im), std::move(B), std::move(domain),
                           enforce, tol, grid_n);
}

bool admissible(const FamilyParams& p, const StructureData& d, const Vec2& x,
                const AdmissibilityMargins& m) {
    if (!d.domain.contains(x)) return false;
    double B, u, v;
    try {
        B = d.B.value(x);
        u = d.u.value(x);
        v = d.v.value(x);
    } catch (const DomainError&) {
        return false;
    }
    if (!(B > m.b_min)) return false;
    if (!(u * u + v * v > m.uv_min)) return false;
    if (!(1.0 + p.k1 * B > m.pd_min)) return false;
    if (!(1.0 + p.k2 * B > m.pd_min)) return false;
    return true;
}

namespace {

struct AlphaBetaJets {
    Jet e2s;        // conformal factor of a
    V2<Jet> b;      // b_i
};

AlphaBetaJets alpha_beta_jets(const FamilyParams& p, const StructureData& d, const JetSpace& space,
                              const Vec2& x) {
    Jet u = d.u.eval(space, x);
    Jet v = d.v.eval(space, x);
    Jet B = d.B.eval(space, x);
    const double Bv = B.value(), uv2 = u.value() * u.value() + v.value() * v.value();
    if (Bv <= 0.0 || uv2 <= 0.0 || 1.0 + p.k1 * Bv <= 0.0 || 1.0 + p.k2 * Bv <= 0.0)
        throw DomainError("structure fields inadmissible at (" + std::to_string(x[0]) + "," +
                          std::to_string(x[1]) + "): B = " + std::to_string(Bv) +
                          ", u^2+v^2 = " + std::to_string(uv2) +
                          ", 1+k1B = " + std::to_string(1.0 + p.k1 * Bv));
    Jet uv = u * u + v * v;
    Jet pd1 = 1.0 + p.k1 * B;
    Jet pd2 = 1.0 + p.k2 * B;
    AlphaBetaJets out;
    out.e2s = B / (uv * pow(pd1, 1.5) * sqrt(pd2));
    Jet den = uv * pow(pd1, 0.75) * pow(pd2, 0.25);
    out.b = {B * u / den, B * v / den};
    return out;
}

} // namespace

std::pair<MetricField, OneFormField> construct_alpha_beta(const FamilyParams& p,
                                                          const StructureData& d) {
    MetricField a{[p, d](const JetSpace& s, const Vec2& x) -> M2<Jet> {
        auto j = alpha_beta_jets(p, d, s, x);
        Jet zero = Jet::constant(s, 0.0);
        return {{{j.e2s, zero}, {zero, j.e2s}}};
    }};
    OneFormField b{[p, d](const JetSpace& s, const Vec2& x) -> V2<Jet> {
        return alpha_beta_jets(p, d, s, x).b;
    }};
    return {std::move(a), std::move(b)};
}

FinslerFunction assemble_finsler_from_fields(const FamilyParams& p, MetricField a, OneFormField b,
                                             std::function<bool(const Vec2&, const Vec2&)> domain) {
    FinslerFunction F;
    F.eval = [p, a, b](const JetSpace& space, const Vec2& x, const Vec2& y) -> Jet {
        const bool ax = space.x_order() > 0, ay = space.y_order() > 0;
        const auto seeds = seed_point(space, {x[0], x[1], y[0], y[1]}, {ax, ax, ay, ay});
        M2<Jet> aj = a.eval(space, x);
        V2<Jet> bj = b.eval(space, x);
        Jet alpha2 = Jet::constant(space, 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                alpha2 += aj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                          seeds[static_cast<std::size_t>(VarY1 + i)] *
                          seeds[static_cast<std::size_t>(VarY1 + j)];
        Jet beta = bj[0] * seeds[VarY1] + bj[1] * seeds[VarY2];
        Jet alpha = sqrt(alpha2);
        Jet s = beta / alpha;
        return alpha * phi_jet(p, s);
    };
    if (domain) F.domain = std::move(domain);
    else F.domain = [](const Vec2&, const Vec2& y) { return y[0] != 0.0 || y[1] != 0.0; };
    return F;
}

FinslerFunction assemble_finsler(const FamilyParams& p, const StructureData& d) {
    auto [a, b] = construct_alpha_beta(p, d);
    auto dom = [p, d](const Vec2& x, const Vec2& y) {
        return (y[0] != 0.0 || y[1] != 0.0) && admissible(p, d, x);
    };
    return assemble_finsler_from_fields(p, std::move(a), std::move(b), dom);
}

PositivityVerdict positivity_check(const FamilyParams& p, double b) {
    if (b < 0.0) throw DomainError("norm b must be non-negative");
    PositivityVerdict verdict;
    verdict.condition_value = 1.0 + p.k1 * b * b;
    verdict.pd = verdict.condition_value > 0.0;

    // clip the sample range to the profile's own domain
    double smax = b;
    if (p.k1 < 0.0) smax = std::min(smax, (1.0 - 1e-3) / std::sqrt(-p.k1));
    if (p.k2 < 0.0) smax = std::min(smax, (1.0 - 1e-3) / std::sqrt(-p.k2));

    verdict.y11_minima = {HUGE_VAL, HUGE_VAL, HUGE_VAL};
    const int nodes = 201;
    for (int i = 0; i < nodes; ++i) {
        const double s = nodes == 1 ? 0.0 : -smax + 2.0 * smax * i / (nodes - 1);
        Series ph = phi_series(p, s, 2);
        const double phi = ph[0], dphi = ph[1], d2phi = 2.0 * ph[2];
        verdict.y11_minima[0] = std::min(verdict.y11_minima[0], phi);
        verdict.y11_minima[1] = std::min(verdict.y11_minima[1], phi - s * dphi);
        verdict.y11_minima[2] =
            std::min(verdict.y11_minima[2], phi - s * dphi + (b * b - s * s) * d2phi);
    }

    // proof quadratics on t in [0, b^2]
    const double k1 = p.k1, k2 = p.k2, b2 = b * b;
    const double fA = 2.0 * k1 * k2 * (k1 + k2) * b2 + 3.0 * k1 * k1 + 2.0 * k2 * k2 - k1 * k2;
    const double fB = k1 * (9.0 * k2 - k1) * b2 + 3.0 * k2 + 5.0 * k1;
    const double fC = (3.0 * k2 + k1) * b2 + 4.0;
    const double hA = 4.0 * k1 * k2 * k2 * (3.0 * k2 + k1) * b2 * b2 +
                      4.0 * k2 * (3.0 * k2 * k2 + 3.0 * k1 * k1 + 2.0 * k1 * k2) * b2 -
                      6.0 * k1 * k2 + 9.0 * k1 * k1 + 13.0 * k2 * k2;
    const double hB = 4.0 * k1 * k2 * (9.0 * k2 - k1) * b2 * b2 +
                      2.0 * (9.0 * k2 - k1) * (3.0 * k1 + k2) * b2 + 12.0 * k1 + 20.0 * k2;
    const double hC = (4.0 + k1 * b2 + 3.0 * k2 * b2) * (4.0 + k1 * b2 + 3.0 * k2 * b2);
    auto quad_min = [b2](double A, double Bq, double C) {
        double m = std::min(C, A * b2 * b2 + Bq * b2 + C);
        if (A != 0.0) {
            const double tv = -Bq / (2.0 * A);
            if (tv > 0.0 && tv < b2) m = std::min(m, A * tv * tv + Bq * tv + C);
        }
        return m;
    };
    verdict.fh_minima = {quad_min(fA, fB, fC), quad_min(hA, hB, hC)};
    return verdict;
}

double closed_form_K(const FamilyParams& p, const StructureData& d, const Vec2& x) {
    JetSpace space(2, 0);
    Jet B = d.B.eval(space, x);
    const double u = d.u.value(x), v = d.v.value(x);
    const double Bv = B.value();
    const double uv2 = u * u + v * v;
    if (std::max(std::abs(u), std::abs(v)) <= 1e-9)
        throw DomainError("closed-form curvature needs max(|u|,|v|) > 0");
    if (Bv <= 0.0 || 1.0 + p.k1 * Bv <= 0.0 || 1.0 + p.k2 * Bv <= 0.0)
        throw DomainError("closed-form curvature outside the admissible region");
    const double B1 = B.partial({1, 0, 0, 0});
    const double B2 = B.partial({0, 1, 0, 0});
    const double B11 = B.partial({2, 0, 0, 0});
    const double B22 = B.partial({0, 2, 0, 0});
    const double quot = std::abs(v) >= std::abs(u) ? (B1 / v) * (B1 / v) : (B2 / u) * (B2 / u);
    const double pd1 = 1.0 + p.k1 * Bv, pd2 = 1.0 + p.k2 * Bv;
    return -uv2 * std::sqrt(pd2) / (4.0 * Bv * Bv) *
           (2.0 * std::sqrt(pd1) * (B11 + B22) -
            uv2 * (2.0 + 3.0 * p.k1 * Bv) / (Bv * std::sqrt(pd1)) * quot);
}

OneFormField deform_one_form(const FamilyParams& p, const MetricField& a, const OneFormField& b) {
    return {[p, a, b](const JetSpace& space, const Vec2& x) -> V2<Jet> {
        M2<Jet> aj = a.eval(space, x);
        V2<Jet> bj = b.eval(space, x);
        Jet det = aj[0][0] * aj[1][1] - aj[0][1] * aj[1][0];
        if (det.value() <= 0.0) throw SingularMetric("deformation on a degenerate metric");
        M2<Jet> ainv = {{{aj[1][1] / det, -aj[0][1] / det}, {-aj[1][0] / det, aj[0][0] / det}}};
        Jet b2 = Jet::constant(space, 0.0);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                b2 += ainv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                      bj[static_cast<std::size_t>(i)] * bj[static_cast<std::size_t>(j)];
        const double b2v = b2.value();
        if (1.0 + p.k1 * b2v <= 0.0 || 1.0 + p.k2 * b2v <= 0.0)
            throw DomainError("deformation undefined: 1 + k b^2 not positive");
        Jet factor = pow(1.0 + p.k1 * b2, -0.75) * pow(1.0 + p.k2 * b2, -0.25);
        return {factor * bj[0], factor * bj[1]};
    }};
}

DeformResult deform_and_killing(const FamilyParams& p, const MetricField& a, const OneFormField& b,
                                const Vec2& x) {
    DeformResult out{deform_one_form(p, a, b), 0.0};
    ABTensorSet set = ab_tensors(a, out.deformed, x);
    double res = 0.0, scale = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            res = std::max(res, std::abs(set.r[i][j]));
            scale = std::max(scale, std::abs(set.bij[i][j]));
        }
    out.killing_residual = res / (1.0 + scale);
    return out;
}

RigidityResult constant_B_rigidity(const FamilyParams& p, const StructureData& d, const Vec2& x,
                                   double grad_tol) {
    JetSpace space(1, 0);
    Jet B = d.B.eval(space, x);
    const double gradB = std::max(std::abs(B.partial({1, 0, 0, 0})), std::abs(B.partial({0, 1, 0, 0})));
    if (gradB > grad_tol)
        throw PreconditionFailed("B is not constant: |grad B| = " + std::to_string(gradB));
    auto [a, b] = construct_alpha_beta(p, d);
    AlphaCurvature curv = alpha_curvature(a, x);
    ABTensorSet set = ab_tensors(a, b, x);
    double par = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) par = std::max(par, std::abs(set.bij[i][j]));
    return {std::abs(curv.lambda), par};
}

} // namespace finsler
