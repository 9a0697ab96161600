#pragma once

// The two-parameter metric family: profile function
//
//   phi(s) = ((1+k1 s^2)(1+k2 s^2))^{1/4} exp( Phi(s) ),
//   Phi(s) = integral_0^s tau,   tau(s) = eps sqrt(k2-k1) / (2 (1+k1 s^2) sqrt(1+k2 s^2)),
//
// the induced (alpha, beta) structure built from scalar fields (B, u, v)
// subject to u_1 = v_2, u_2 = -v_1, u B_1 + v B_2 = 0:
//
//   e^{2 sigma} = B / ((u^2+v^2) (1+k1 B)^{3/2} sqrt(1+k2 B)),   a_ij = e^{2 sigma} delta_ij,
//   b_i = B (u, v)_i / ((u^2+v^2) (1+k1 B)^{3/4} (1+k2 B)^{1/4}),
//
// Finsler assembly F = alpha phi(beta/alpha), positivity of the assembled
// metric, a closed-form expression for its flag curvature, the Killing
// deformation of beta, and the constant-B rigidity check.

#include <complex>
#include <optional>
#include <vector>

#include "finsler/ab.hpp"
#include "finsler/expr.hpp"
#include "finsler/fields.hpp"
#include "finsler/geometry.hpp"
#include "finsler/series.hpp"

namespace finsler {

struct FamilyParams {
    double k1 = 0.0;
    double k2 = 0.0;
    int eps = +1; // sign of tau

    FamilyParams() = default;
    FamilyParams(double k1_, double k2_, int eps_) : k1(k1_), k2(k2_), eps(eps_) {
        if (!(k2 > k1)) throw DomainError("family requires k2 > k1 strictly");
        if (eps != 1 && eps != -1) throw DomainError("eps must be +1 or -1");
    }
};

// tau works on anything with arithmetic and sqrt (double, Series, Jet).
template <class T>
T tau(const FamilyParams& p, const T& s) {
    using std::sqrt;
    const double c = 0.5 * p.eps * std::sqrt(p.k2 - p.k1);
    T s2 = s * s;
    return c / ((1.0 + p.k1 * s2) * sqrt(1.0 + p.k2 * s2));
}

inline double tau(const FamilyParams& p, double s) {
    const double d1 = 1.0 + p.k1 * s * s, d2 = 1.0 + p.k2 * s * s;
    if (d1 <= 0.0 || d2 <= 0.0)
        throw DomainError("tau undefined at s = " + std::to_string(s));
    return 0.5 * p.eps * std::sqrt(p.k2 - p.k1) / (d1 * std::sqrt(d2));
}

// Phi(s) = integral of tau from 0 to s (adaptive quadrature, |error| <= 1e-12).
double phi_exponent(const FamilyParams& p, double s);

// Taylor series of phi at s0: the quadrature supplies only the value
// coefficient of Phi; all derivative coefficients come from tau's series.
Series phi_series(const FamilyParams& p, double s0, int order);

double phi_value(const FamilyParams& p, double s);

// phi composed with a jet-valued ratio s = beta/alpha.
Jet phi_jet(const FamilyParams& p, const Jet& s);

// Admissible domain: a coordinate box minus exclusion discs (or the outside
// of a bounding disc).
struct Exclusion {
    enum class Kind { Disc, Outside } kind;
    Vec2 center;
    double radius;
};

struct Domain {
    std::array<double, 4> box; // x1min, x1max, x2min, x2max
    std::vector<Exclusion> exclusions;

    bool contains(const Vec2& x) const {
        if (x[0] < box[0] || x[0] > box[1] || x[1] < box[2] || x[1] > box[3]) return false;
        for (const auto& e : exclusions) {
            const double d = std::hypot(x[0] - e.center[0], x[1] - e.center[1]);
            if (e.kind == Exclusion::Kind::Disc && d < e.radius) return false;
            if (e.kind == Exclusion::Kind::Outside && d > e.radius) return false;
        }
        return true;
    }
};

struct StructureData {
    ScalarField u, v, B;
    Domain domain;
};

struct StructureResiduals {
    double cr1; // u_1 - v_2
    double cr2; // u_2 + v_1
    double transport; // u B_1 + v B_2
    double max() const { return std::max(std::max(cr1, cr2), transport); }
};

// normalized residuals of the three structure equations at x
StructureResiduals structure_residuals(const StructureData& d, const Vec2& x);

// Build and (optionally) validate a structure triple. With enforce = true the
// equations are sampled on a grid over the domain and StructureViolation
// names the first offending equation, point and residual.
StructureData build_structure(ScalarField u, ScalarField v, ScalarField B, Domain domain,
                              bool enforce = true, double tol = 1e-8, int grid_n = 9);

// u + i v = f(x1 + i x2) for a polynomial f given by complex coefficients
// (lowest degree first); expanded into expression trees via a Horner scheme.
StructureData build_structure_poly(const std::vector<std::complex<double>>& f_coeffs, ScalarField B,
                                   Domain domain, bool enforce = true, double tol = 1e-8,
                                   int grid_n = 9);

// margins below which a point is treated as inadmissible rather than an error
struct AdmissibilityMargins {
    double b_min = 1e-6;      // B > b_min
    double uv_min = 1e-6;     // u^2 + v^2 > uv_min
    double pd_min = 1e-6;     // 1 + k1 B > pd_min (and 1 + k2 B likewise)
};

bool admissible(const FamilyParams& p, const StructureData& d, const Vec2& x,
                const AdmissibilityMargins& m = {});

// (alpha, beta) as jet-valued fields; evaluation throws DomainError outside
// the admissible region.
std::pair<MetricField, OneFormField> construct_alpha_beta(const FamilyParams& p,
                                                          const StructureData& d);

// F = alpha phi(beta/alpha) for the structure fields, or for an arbitrary
// (alpha, beta) pair sharing the same profile function.
FinslerFunction assemble_finsler(const FamilyParams& p, const StructureData& d);
FinslerFunction assemble_finsler_from_fields(const FamilyParams& p, MetricField a, OneFormField b,
                                             std::function<bool(const Vec2&, const Vec2&)> domain = {});

// Positivity of the assembled metric for 1-form norm b: the sharp criterion
// is 1 + k1 b^2 > 0. The verdict cross-checks it against direct sampling of
// the three classical positivity quantities
//   phi > 0,  phi - s phi' > 0,  phi - s phi' + (b^2 - s^2) phi'' > 0
// on |s| <= b (201 nodes, clipped to the profile's domain), and against the
// two proof quadratics f(t), h(t) on t in [0, b^2].
struct PositivityVerdict {
    bool pd;
    double condition_value;           // 1 + k1 b^2
    std::array<double, 3> y11_minima; // sampled minima of the three quantities
    std::array<double, 2> fh_minima;  // minima of f and h over [0, b^2]
};

PositivityVerdict positivity_check(const FamilyParams& p, double b);

// Closed-form flag curvature of the assembled family at x. Uses the quotient
// (B_1/v)^2 when |v| >= |u| and (B_2/u)^2 otherwise (equal by the structure
// equations).
double closed_form_K(const FamilyParams& p, const StructureData& d, const Vec2& x);

// beta -> (1+k1 b^2)^{-3/4} (1+k2 b^2)^{-1/4} beta. For a pair satisfying the
// vanishing-S condition the deformed form is Killing: r~_ij = 0.
OneFormField deform_one_form(const FamilyParams& p, const MetricField& a, const OneFormField& b);

struct DeformResult {
    OneFormField deformed;
    double killing_residual; // max |r~_ij| at x, normalized
};

DeformResult deform_and_killing(const FamilyParams& p, const MetricField& a, const OneFormField& b,
                                const Vec2& x);

// With B constant on the domain, alpha must be flat and beta parallel.
struct RigidityResult {
    double flatness_residual; // |lambda|
    double parallel_residual; // max |b_{i|j}|
};

RigidityResult constant_B_rigidity(const FamilyParams& p, const StructureData& d, const Vec2& x,
                                   double grad_tol = 1e-9);

} // namespace finsler
