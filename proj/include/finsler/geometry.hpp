#pragma once

// Finsler invariants for a 2D metric F(x, y), all derived from jets of F:
// fundamental tensor, geodesic spray, Riemann curvature of the spray, Ricci
// and flag curvature, the unit-ball volume factor of the coordinate volume
// form, and the S-curvature.

#include <functional>

#include "finsler/fields.hpp"
#include "finsler/jet.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

// Evaluator contract: return the jet of F at (x, y) in the given space.
// Seeding convention: a variable group is active iff its order is positive,
// so a y_order = 0 space gives the x-jet of F at fixed y. The domain
// predicate declares admissibility of (x, y); geometry operations check it
// and raise DomainError instead of evaluating outside.
struct FinslerFunction {
    std::function<Jet(const JetSpace&, const Vec2& x, const Vec2& y)> eval;
    std::function<bool(const Vec2& x, const Vec2& y)> domain = [](const Vec2&, const Vec2&) { return true; };
};

FinslerFunction euclidean_finsler();
FinslerFunction riemannian_finsler(MetricField a);

struct RiemannResult {
    M2<double> R; // R^i_k
    double Ric;
};

struct FlagResult {
    double K;
    double flag_residual; // max |R^i_k - K F^2 (delta^i_k - y^i y_k / F^2)|
};

struct BHVolume {
    double sigma;   // pi / area of the coordinate unit ball {F < 1}
    Vec2 dln;       // d/dx^m of log sigma
    int nodes;      // quadrature resolution that met the tolerance
};

struct CurvatureSample {
    Vec2 x, y;
    M2<double> g;
    V2<double> G;
    M2<double> R;
    double F = 0.0, Ric = 0.0, K = 0.0, S = 0.0, flag_residual = 0.0;
};

// g_ij = 1/2 [F^2]_{y^i y^j}; SingularMetric if the determinant vanishes.
M2<double> fundamental_tensor(const FinslerFunction& F, const Vec2& x, const Vec2& y);

// G^i = 1/4 g^{il} ( [F^2]_{x^k y^l} y^k - [F^2]_{x^l} )
V2<double> spray_coefficients(const FinslerFunction& F, const Vec2& x, const Vec2& y);

// R^i_k = 2 dG^i/dx^k - y^j d2G^i/dx^j dy^k + 2 G^j d2G^i/dy^j dy^k
//         - dG^i/dy^j dG^j/dy^k ;   Ric = R^k_k
RiemannResult riemann_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y);

// K = Ric / F^2 together with the rank-one structure residual.
FlagResult flag_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y);

// Unit-ball volume factor by periodic trapezoid quadrature with resolution
// doubling; derivative taken under the integral from x-jets of F.
BHVolume bh_volume_factor(const FinslerFunction& F, const Vec2& x,
                          double rel_tol = 1e-11, int max_nodes = 1 << 14);

// S = dG^m/dy^m - y^m d(log sigma)/dx^m
double s_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y);
double s_curvature(const FinslerFunction& F, const Vec2& x, const Vec2& y, const BHVolume& bh);

// One-pass bundle of everything above at a point/direction. Pass a
// precomputed volume factor when evaluating many directions at one x.
CurvatureSample curvature_sample(const FinslerFunction& F, const Vec2& x, const Vec2& y,
                                 const BHVolume* bh = nullptr);

} // namespace finsler
