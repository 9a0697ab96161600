#pragma once

// Jet-valued tensor fields of the base point. Evaluators receive the jet
// space so the same field serves cheap value-only queries and deep
// curvature evaluations; components depend on (x1, x2) only.

#include <functional>

#include "finsler/expr.hpp"
#include "finsler/jet.hpp"
#include "finsler/numerics.hpp"

namespace finsler {

// Symmetric 2x2 Riemannian metric field a_ij(x).
struct MetricField {
    std::function<M2<Jet>(const JetSpace&, const Vec2&)> eval;

    static MetricField from_components(ScalarField a11, ScalarField a12, ScalarField a22) {
        return {[a11, a12, a22](const JetSpace& s, const Vec2& x) -> M2<Jet> {
            Jet j11 = a11.eval(s, x), j12 = a12.eval(s, x), j22 = a22.eval(s, x);
            return {{{j11, j12}, {j12, j22}}};
        }};
    }

    // a_ij = e^{2 sigma(x)} delta_ij
    static MetricField conformal(ScalarField sigma) {
        return {[sigma](const JetSpace& s, const Vec2& x) -> M2<Jet> {
            Jet f = exp(2.0 * sigma.eval(s, x));
            Jet zero = Jet::constant(s, 0.0);
            return {{{f, zero}, {zero, f}}};
        }};
    }

    static MetricField euclidean() {
        return {[](const JetSpace& s, const Vec2&) -> M2<Jet> {
            Jet one = Jet::constant(s, 1.0);
            Jet zero = Jet::constant(s, 0.0);
            return {{{one, zero}, {zero, one}}};
        }};
    }
};

// 1-form field b_i(x).
struct OneFormField {
    std::function<V2<Jet>(const JetSpace&, const Vec2&)> eval;

    static OneFormField from_components(ScalarField b1, ScalarField b2) {
        return {[b1, b2](const JetSpace& s, const Vec2& x) -> V2<Jet> {
            return {b1.eval(s, x), b2.eval(s, x)};
        }};
    }

    static OneFormField constant(double c1, double c2) {
        return {[c1, c2](const JetSpace& s, const Vec2&) -> V2<Jet> {
            return {Jet::constant(s, c1), Jet::constant(s, c2)};
        }};
    }
};

} // namespace finsler
