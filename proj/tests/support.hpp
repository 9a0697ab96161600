#pragma once

// Shared test machinery: a finite-difference oracle for mixed partials
// (independent of the jet arithmetic it checks), a generator of random
// elementary compositions with paired scalar/jet evaluators, and small
// comparison helpers.

#include <cmath>
#include <functional>

#include "finsler/jet.hpp"
#include "finsler/numerics.hpp"

namespace finsler::test {

using Point4 = std::array<double, 4>;
using ScalarFn = std::function<double(const Point4&)>;

// Nested central differences for the mixed partial d^alpha f at x. O(h^2).
inline double fd_partial_step(const ScalarFn& f, Point4 x, MultiIndex alpha, double h) {
    for (int v = 0; v < 4; ++v) {
        if (alpha[static_cast<std::size_t>(v)] > 0) {
            alpha[static_cast<std::size_t>(v)] -= 1;
            Point4 xp = x, xm = x;
            xp[static_cast<std::size_t>(v)] += h;
            xm[static_cast<std::size_t>(v)] -= h;
            return (fd_partial_step(f, xp, alpha, h) - fd_partial_step(f, xm, alpha, h)) / (2.0 * h);
        }
    }
    return f(x);
}

// Richardson-extrapolated oracle with a step schedule per derivative order.
inline double fd_partial(const ScalarFn& f, const Point4& x, const MultiIndex& alpha) {
    const int m = alpha[0] + alpha[1] + alpha[2] + alpha[3];
    if (m == 0) return f(x);
    static const double steps[] = {0.0, 1e-3, 5e-3, 1.0e-2, 1.6e-2, 4.0e-2, 6.0e-2};
    const double h = steps[std::min(m, 6)];
    const double d1 = fd_partial_step(f, x, alpha, h);
    const double d2 = fd_partial_step(f, x, alpha, h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// Random composition with matching scalar and jet evaluators. Arguments of
// transcendental nodes are damped so high-order derivatives stay moderate and
// the finite-difference oracle converges.
struct Composition {
    ScalarFn scalar;
    std::function<Jet(const std::array<Jet, 4>&)> jet;
};

inline Composition random_composition(Rng& rng, int depth = 3) {
    if (depth == 0 || rng.uniform() < 0.25) {
        const int choice = static_cast<int>(rng.uniform() * 5.0);
        if (choice == 4) {
            const double c = rng.uniform(-1.5, 1.5);
            return {[c](const Point4&) { return c; },
                    [c](const std::array<Jet, 4>& s) { return Jet::constant(s[0].space(), c); }};
        }
        const int v = choice;
        return {[v](const Point4& p) { return p[static_cast<std::size_t>(v)]; },
                [v](const std::array<Jet, 4>& s) { return s[static_cast<std::size_t>(v)]; }};
    }
    const int op = static_cast<int>(rng.uniform() * 7.0);
    Composition a = random_composition(rng, depth - 1);
    switch (op) {
    case 0: {
        Composition b = random_composition(rng, depth - 1);
        return {[a, b](const Point4& p) { return a.scalar(p) + b.scalar(p); },
                [a, b](const std::array<Jet, 4>& s) { return a.jet(s) + b.jet(s); }};
    }
    case 1: {
        Composition b = random_composition(rng, depth - 1);
        return {[a, b](const Point4& p) { return 0.5 * a.scalar(p) * b.scalar(p); },
                [a, b](const std::array<Jet, 4>& s) { return 0.5 * (a.jet(s) * b.jet(s)); }};
    }
    case 2: {
        const double c = rng.uniform(0.2, 0.6);
        return {[a, c](const Point4& p) { return std::sin(c * a.scalar(p)); },
                [a, c](const std::array<Jet, 4>& s) { return sin(c * a.jet(s)); }};
    }
    case 3: {
        const double c = rng.uniform(0.2, 0.6);
        return {[a, c](const Point4& p) { return std::cos(c * a.scalar(p)); },
                [a, c](const std::array<Jet, 4>& s) { return cos(c * a.jet(s)); }};
    }
    case 4: {
        const double c = rng.uniform(0.15, 0.45);
        return {[a, c](const Point4& p) { return std::exp(c * a.scalar(p)); },
                [a, c](const std::array<Jet, 4>& s) { return exp(c * a.jet(s)); }};
    }
    case 5: {
        const double c = rng.uniform(0.1, 0.4);
        return {[a, c](const Point4& p) { return std::log(1.5 + c * a.scalar(p) * a.scalar(p)); },
                [a, c](const std::array<Jet, 4>& s) {
                    Jet j = a.jet(s);
                    return log(1.5 + c * j * j);
                }};
    }
    default: {
        const double c = rng.uniform(0.1, 0.4);
        return {[a, c](const Point4& p) { return std::sqrt(1.5 + c * a.scalar(p) * a.scalar(p)); },
                [a, c](const std::array<Jet, 4>& s) {
                    Jet j = a.jet(s);
                    return sqrt(1.5 + c * j * j);
                }};
    }
    }
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// every multi-index stored by a (x_order, y_order) space
inline std::vector<MultiIndex> all_indices(int x_order, int y_order) {
    std::vector<MultiIndex> out;
    for (int a1 = 0; a1 <= x_order; ++a1)
        for (int a2 = 0; a2 + a1 <= x_order; ++a2)
            for (int b1 = 0; b1 <= y_order; ++b1)
                for (int b2 = 0; b2 + b1 <= y_order; ++b2) out.push_back({a1, a2, b1, b2});
    return out;
}

} // namespace finsler::test
