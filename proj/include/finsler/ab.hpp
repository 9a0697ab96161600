#pragma once

// Riemannian machinery for a pair (a_ij, b_i): Levi-Civita covariant
// derivatives, the derived tensor family r/s/q/t with contractions against b,
// curvature of a with the 2D space-form decomposition, the universal
// curvature identities for second covariant derivatives of b, the pointwise
// theta decomposition valid in dimension 2, the symmetrized-derivative
// condition characterizing vanishing S-curvature for the metric family, and
// the conformal-Killing criterion for conformally flat metrics.
//
// Index conventions (all indices lowered/raised with a):
//   b_{i|j} = d_j b_i - Gamma^m_{ij} b_m
//   r_ij = (b_{i|j} + b_{j|i})/2,   s_ij = (b_{i|j} - b_{j|i})/2
//   r_j = b^i r_ij,  s_j = b^i s_ij,  q_ij = r_im s^m_j,  t_ij = s_im s^m_j
//   R^m_{kij} = d_i Gamma^m_{kj} - d_j Gamma^m_{ki}
//             + Gamma^m_{ip} Gamma^p_{kj} - Gamma^m_{jp} Gamma^p_{ki}
//   Rbar_{klij} = a_{lm} R^m_{kij},   Ric_{kj} = R^m_{kmj}
// With these signs s_{ij|k} = r_{ik|j} - r_{jk|i} - b^l Rbar_{klij} holds for
// every smooth pair, and Ric = lambda a in 2D with lambda the Gauss curvature
// (positive on the round sphere).

#include <array>

#include "finsler/fields.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

struct ABTensorSet {
    Vec2 x;

    // metric data at the point
    M2<double> a, ainv;
    double det_a = 0.0;

    // 1-form and derived scalars
    V2<double> b;        // b_i
    V2<double> bu;       // b^i
    double b2 = 0.0;     // b^i b_i

    // first derived layer
    M2<double> bij;      // b_{i|j}
    M2<double> r, s;     // r_ij, s_ij
    M2<double> ru, su;   // r^i_j, s^i_j
    V2<double> rl, sl;   // r_j, s_j
    V2<double> rup, sup; // r^j, s^j
    M2<double> q, t;     // q_ij, t_ij
    V2<double> ql, tl;   // q_j, t_j
    double r_scalar = 0.0;  // b^j r_j
    double trace_r = 0.0;   // r^k_k
    double trace_t = 0.0;   // t^k_k
    double smsm = 0.0;      // s_m s^m
    double theta = 0.0;     // s_m s^m / b^2 (0 when b^2 = 0)

    // second derived layer (covariant derivatives)
    double rd[2][2][2] = {};  // r_{ij|k}
    double sd[2][2][2] = {};  // s_{ij|k}
    M2<double> rld = {}, sld = {}; // (r_i)_{|j}, (s_i)_{|j}
    V2<double> trace_r_d = {};     // d_i (r^k_k)
    double div_r = 0.0, div_s = 0.0; // r^k_{|k}, s^k_{|k}
};

struct AlphaCurvature {
    double Rbar[2][2][2][2] = {}; // Rbar_{klij}
    M2<double> Ric = {};
    double lambda = 0.0;            // Gauss curvature: Ric = lambda a in 2D
    double space_form_residual = 0.0; // max |Rbar_{jmik} - lambda(a_jk a_mi - a_ij a_mk)|
};

ABTensorSet ab_tensors(const MetricField& rm, const OneFormField& of, const Vec2& x);
AlphaCurvature alpha_curvature(const MetricField& rm, const Vec2& x);

// Four universal identities relating second covariant derivatives of b to
// the curvature of a; they hold for every smooth pair, so the residuals
// probe the covariant-derivative and curvature code against each other.
// Residuals are normalized by (1 + max |term|).
struct RicciIdentityResiduals {
    std::array<double, 4> res;
    double max() const { return std::max(std::max(res[0], res[1]), std::max(res[2], res[3])); }
};

RicciIdentityResiduals ricci_identity_residuals(const ABTensorSet& set, const AlphaCurvature& curv,
                                                const Vec2& y);
RicciIdentityResiduals ricci_identity_residuals(const MetricField& rm, const OneFormField& of,
                                                const Vec2& x, const Vec2& y);

// In dimension 2 there is theta = theta(x) with s_0^2 = theta (b^2 alpha^2 - beta^2)
// and t_00 = -theta alpha^2; additionally s_ij = (b_i s_j - b_j s_i)/b^2 and
// t_00 = -(s_m s^m beta^2 + b^2 s_0^2)/b^4. theta is computed as s_m s^m / b^2;
// the three residuals report the decomposition identities maximized over a
// deterministic direction set.
struct ThetaDecomposition {
    double theta;
    std::array<double, 3> residuals;
};

ThetaDecomposition theta_decomposition(const ABTensorSet& set);
ThetaDecomposition theta_decomposition(const MetricField& rm, const OneFormField& of, const Vec2& x);

// max-norm residual of r_ij = (3k1+k2+4k1k2 b^2)/(4+(k1+3k2)b^2) (b_i s_j + b_j s_i),
// normalized. Throws DegenerateDenominator when the denominator is ~0.
double r00_residual(const ABTensorSet& set, double k1, double k2);

// 2D closure residual: s_ij - (b_i s_j - b_j s_i)/b^2, normalized.
double closure_residual(const ABTensorSet& set);

// Conformal-Killing test for a = e^{2 sigma} delta: a vector field W^i is
// checked against dW^i/dx^j + dW^j/dx^i = 0 (i != j), dW^1/dx^1 = dW^2/dx^2;
// c = -(tau + W^r sigma_r)/2 with tau = dW^1/dx^1; and the covariant
// derivative identity W_{0|0} = -2 c alpha^2 over a direction set.
struct ConformalKillingResult {
    double conditions_residual;
    double c;
    double covderiv_residual;
};

ConformalKillingResult conformal_killing_check(const ScalarField& sigma, const ScalarField& W1,
                                               const ScalarField& W2, const Vec2& x);

} // namespace finsler
