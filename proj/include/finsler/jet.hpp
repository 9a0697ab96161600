#pragma once

// Truncated multivariate Taylor arithmetic over the four base variables
// (x1, x2, y1, y2) with independent truncation orders for the x-group and the
// y-group. A Jet stores coefficients c[alpha] = d^alpha f / alpha! for every
// multi-index alpha = (a1,a2,b1,b2) with a1+a2 <= x_order, b1+b2 <= y_order.
//
// All operations are truncation-triangular: the coefficient of the result at
// alpha depends only on input coefficients at beta <= alpha. Each jet
// therefore carries "valid orders" alongside the storage orders: extracting a
// derivative shrinks the valid region by one in that variable group, and
// arithmetic takes the minimum. partial() refuses to read outside it.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

enum Var : int { VarX1 = 0, VarX2 = 1, VarY1 = 2, VarY2 = 3 };

using MultiIndex = std::array<int, 4>; // (a1, a2, b1, b2)

class Jet;
class JetSpace;
Jet operator*(const Jet& a, const Jet& b);
std::array<Jet, 4> seed_point(const JetSpace& space, const std::array<double, 4>& values,
                              const std::array<bool, 4>& active);

class JetSpace {
public:
    explicit JetSpace(int x_order = 2, int y_order = 4);

    int x_order() const { return x_order_; }
    int y_order() const { return y_order_; }
    int size() const { return static_cast<int>(nx_ * ny_); }

    bool compatible(const JetSpace& other) const {
        return x_order_ == other.x_order_ && y_order_ == other.y_order_;
    }

private:
    friend class Jet;
    friend Jet operator*(const Jet& a, const Jet& b);
    friend std::array<Jet, 4> seed_point(const JetSpace&, const std::array<double, 4>&,
                                         const std::array<bool, 4>&);

    struct Pair {
        std::uint16_t a, b, out;
    };

    int x_order_, y_order_;
    std::size_t nx_, ny_;
    std::vector<std::array<int, 2>> xidx_, yidx_;    // enumeration of group multi-indices
    std::vector<int> xlookup_, ylookup_;             // (d1,d2) -> linear index, -1 if absent
    std::vector<Pair> xpairs_, ypairs_;              // product decompositions per group
    std::vector<double> fact_;                       // alpha! per flat index

    int xlin(int d1, int d2) const { return xlookup_[static_cast<std::size_t>(d1 * (x_order_ + 1) + d2)]; }
    int ylin(int d1, int d2) const { return ylookup_[static_cast<std::size_t>(d1 * (y_order_ + 1) + d2)]; }
};

class Jet {
public:
    Jet() = default;

    static Jet constant(const JetSpace& space, double value);

    // Raw-coefficient construction (mainly for tests / generators).
    static Jet with_coefficients(const JetSpace& space, std::vector<double> coeffs);

    const JetSpace& space() const { return *space_; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }

    int valid_x() const { return valid_x_; }
    int valid_y() const { return valid_y_; }

    std::span<const double> coefficients() const { return c_; }

    // d^alpha f (the true mixed partial, i.e. alpha! times the stored
    // coefficient). Throws OrderExceeded outside the valid region.
    double partial(const MultiIndex& alpha) const;

    // Jet of the partial derivative with respect to one variable; the valid
    // order of that variable group shrinks by one.
    Jet derivative(Var v) const;

    Jet operator-() const;
    friend Jet operator+(const Jet& a, const Jet& b);
    friend Jet operator-(const Jet& a, const Jet& b);
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);

    friend Jet operator+(const Jet& a, double v);
    friend Jet operator+(double v, const Jet& a) { return a + v; }
    friend Jet operator-(const Jet& a, double v) { return a + (-v); }
    friend Jet operator-(double v, const Jet& a) { return (-a) + v; }
    friend Jet operator*(const Jet& a, double v);
    friend Jet operator*(double v, const Jet& a) { return a * v; }
    friend Jet operator/(const Jet& a, double v) { return a * (1.0 / v); }
    friend Jet operator/(double v, const Jet& a);

    Jet& operator+=(const Jet& b) { return *this = *this + b; }
    Jet& operator-=(const Jet& b) { return *this = *this - b; }
    Jet& operator*=(const Jet& b) { return *this = *this * b; }

    // Univariate composition sum_k table[k] (f - f0)^k, Horner form. table[k]
    // must hold g^(k)(f0)/k! for the outer function g. This is the single
    // code path behind all elementary functions.
    friend Jet compose(const Jet& a, std::span<const double> table);

    friend Jet sqrt(const Jet& a);
    friend Jet exp(const Jet& a);
    friend Jet log(const Jet& a);
    friend Jet sin(const Jet& a);
    friend Jet cos(const Jet& a);
    friend Jet atan(const Jet& a);
    friend Jet asinh(const Jet& a);
    friend Jet pow(const Jet& a, double p); // requires a.value() > 0
    friend Jet powi(const Jet& a, int n);   // integer power, any sign of value

private:
    Jet(const JetSpace& space, int valid_x, int valid_y)
        : space_(&space), valid_x_(valid_x), valid_y_(valid_y), c_(static_cast<std::size_t>(space.size()), 0.0) {}

    static const JetSpace& join(const Jet& a, const Jet& b);

    const JetSpace* space_ = nullptr; // never owned; the space must outlive the jet
    int valid_x_ = 0, valid_y_ = 0;
    std::vector<double> c_;

    friend std::array<Jet, 4> seed_point(const JetSpace&, const std::array<double, 4>&,
                                         const std::array<bool, 4>&);
};

// One jet per base variable at the given point. Active variables are seeded
// with unit first-order coefficient; inactive ones are constants.
inline std::array<Jet, 4> seed_point(const JetSpace& space, const std::array<double, 4>& values) {
    return seed_point(space, values, {true, true, true, true});
}

} // namespace finsler
