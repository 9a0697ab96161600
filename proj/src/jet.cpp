#include "finsler/jet.hpp"

#include <cmath>
#include <string>

#include "finsler/numerics.hpp"
#include "finsler/series.hpp"

namespace finsler {

JetSpace::JetSpace(int x_order, int y_order) : x_order_(x_order), y_order_(y_order) {
    if (x_order < 0 || y_order < 0) throw DomainError("jet space orders must be non-negative");

    auto enumerate = [](int order, std::vector<std::array<int, 2>>& idx, std::vector<int>& lookup) {
        lookup.assign(static_cast<std::size_t>((order + 1) * (order + 1)), -1);
        for (int total = 0; total <= order; ++total) {
            for (int d1 = total; d1 >= 0; --d1) {
                const int d2 = total - d1;
                lookup[static_cast<std::size_t>(d1 * (order + 1) + d2)] = static_cast<int>(idx.size());
                idx.push_back({d1, d2});
            }
        }
    };
    enumerate(x_order_, xidx_, xlookup_);
    enumerate(y_order_, yidx_, ylookup_);
    nx_ = xidx_.size();
    ny_ = yidx_.size();

    auto pairs = [](int order, const std::vector<std::array<int, 2>>& idx,
                    const std::vector<int>& lookup, std::vector<Pair>& out) {
        for (std::size_t ia = 0; ia < idx.size(); ++ia) {
            for (std::size_t ib = 0; ib < idx.size(); ++ib) {
                const int d1 = idx[ia][0] + idx[ib][0];
                const int d2 = idx[ia][1] + idx[ib][1];
                if (d1 + d2 > order) continue;
                const int lin = lookup[static_cast<std::size_t>(d1 * (order + 1) + d2)];
                out.push_back({static_cast<std::uint16_t>(ia), static_cast<std::uint16_t>(ib),
                               static_cast<std::uint16_t>(lin)});
            }
        }
    };
    pairs(x_order_, xidx_, xlookup_, xpairs_);
    pairs(y_order_, yidx_, ylookup_, ypairs_);

    fact_.resize(nx_ * ny_);
    auto factorial = [](int n) {
        double f = 1.0;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    for (std::size_t ix = 0; ix < nx_; ++ix)
        for (std::size_t iy = 0; iy < ny_; ++iy)
            fact_[ix * ny_ + iy] = factorial(xidx_[ix][0]) * factorial(xidx_[ix][1]) *
                                   factorial(yidx_[iy][0]) * factorial(yidx_[iy][1]);
}

Jet Jet::constant(const JetSpace& space, double value) {
    Jet j(space, space.x_order(), space.y_order());
    j.c_[0] = value;
    return j;
}

Jet Jet::with_coefficients(const JetSpace& space, std::vector<double> coeffs) {
    if (static_cast<int>(coeffs.size()) != space.size())
        throw DomainError("coefficient vector size does not match jet space");
    Jet j(space, space.x_order(), space.y_order());
    j.c_ = std::move(coeffs);
    return j;
}

std::array<Jet, 4> seed_point(const JetSpace& space, const std::array<double, 4>& values,
                              const std::array<bool, 4>& active) {
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("seed value is not finite");
    std::array<Jet, 4> out;
    for (int v = 0; v < 4; ++v) {
        Jet j = Jet::constant(space, values[static_cast<std::size_t>(v)]);
        if (active[static_cast<std::size_t>(v)]) {
            std::size_t lin = 0;
            switch (v) {
            case VarX1:
                if (space.x_order() >= 1) lin = static_cast<std::size_t>(space.xlin(1, 0)) * space.ny_;
                break;
            case VarX2:
                if (space.x_order() >= 1) lin = static_cast<std::size_t>(space.xlin(0, 1)) * space.ny_;
                break;
            case VarY1:
                if (space.y_order() >= 1) lin = static_cast<std::size_t>(space.ylin(1, 0));
                break;
            case VarY2:
                if (space.y_order() >= 1) lin = static_cast<std::size_t>(space.ylin(0, 1));
                break;
            }
            if (lin != 0) j.c_[lin] = 1.0;
        }
        out[static_cast<std::size_t>(v)] = std::move(j);
    }
    return out;
}

double Jet::partial(const MultiIndex& alpha) const {
    const JetSpace& s = *space_;
    const int ax = alpha[0] + alpha[1];
    const int ay = alpha[2] + alpha[3];
    if (alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0 || alpha[3] < 0 || ax > valid_x_ || ay > valid_y_)
        throw OrderExceeded("partial (" + std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) +
                            "," + std::to_string(alpha[2]) + "," + std::to_string(alpha[3]) +
                            ") outside valid orders (" + std::to_string(valid_x_) + "," +
                            std::to_string(valid_y_) + ")");
    const std::size_t lin =
        static_cast<std::size_t>(s.xlin(alpha[0], alpha[1])) * s.ny_ + static_cast<std::size_t>(s.ylin(alpha[2], alpha[3]));
    return c_[lin] * s.fact_[lin];
}

Jet Jet::derivative(Var v) const {
    const JetSpace& s = *space_;
    const bool is_x = (v == VarX1 || v == VarX2);
    if ((is_x && valid_x_ < 1) || (!is_x && valid_y_ < 1))
        throw OrderExceeded("derivative would exceed valid truncation order");
    Jet r(s, is_x ? valid_x_ - 1 : valid_x_, is_x ? valid_y_ : valid_y_ - 1);
    for (std::size_t ix = 0; ix < s.nx_; ++ix) {
        for (std::size_t iy = 0; iy < s.ny_; ++iy) {
            MultiIndex a = {s.xidx_[ix][0], s.xidx_[ix][1], s.yidx_[iy][0], s.yidx_[iy][1]};
            a[static_cast<std::size_t>(v)] += 1;
            const int ax = a[0] + a[1], ay = a[2] + a[3];
            if (ax > s.x_order_ || ay > s.y_order_) continue;
            const std::size_t src =
                static_cast<std::size_t>(s.xlin(a[0], a[1])) * s.ny_ + static_cast<std::size_t>(s.ylin(a[2], a[3]));
            r.c_[ix * s.ny_ + iy] = c_[src] * a[static_cast<std::size_t>(v)];
        }
    }
    return r;
}

const JetSpace& Jet::join(const Jet& a, const Jet& b) {
    if (a.space_ == nullptr || b.space_ == nullptr) throw SpaceMismatch("operation on empty jet");
    if (!a.space_->compatible(*b.space_))
        throw SpaceMismatch("jets from incompatible spaces: (" + std::to_string(a.space_->x_order()) +
                            "," + std::to_string(a.space_->y_order()) + ") vs (" +
                            std::to_string(b.space_->x_order()) + "," + std::to_string(b.space_->y_order()) + ")");
    return *a.space_;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Jet operator+(const Jet& a, const Jet& b) {
    const JetSpace& s = Jet::join(a, b);
    Jet r(s, std::min(a.valid_x_, b.valid_x_), std::min(a.valid_y_, b.valid_y_));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) {
    const JetSpace& s = Jet::join(a, b);
    Jet r(s, std::min(a.valid_x_, b.valid_x_), std::min(a.valid_y_, b.valid_y_));
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
}

Jet operator+(const Jet& a, double v) {
    Jet r = a;
    r.c_[0] += v;
    return r;
}

Jet operator*(const Jet& a, double v) {
    Jet r = a;
    for (auto& x : r.c_) x *= v;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    const JetSpace& s = Jet::join(a, b);
    Jet r(s, std::min(a.valid_x_, b.valid_x_), std::min(a.valid_y_, b.valid_y_));
    const std::size_t ny = s.ny_;
    for (const auto& xp : s.xpairs_) {
        const double* pa = a.c_.data() + static_cast<std::size_t>(xp.a) * ny;
        const double* pb = b.c_.data() + static_cast<std::size_t>(xp.b) * ny;
        double* po = r.c_.data() + static_cast<std::size_t>(xp.out) * ny;
        for (const auto& yp : s.ypairs_) po[yp.out] += pa[yp.a] * pb[yp.b];
    }
    return r;
}

Jet compose(const Jet& a, std::span<const double> table) {
    const JetSpace& s = *a.space_;
    Jet hat = a;
    hat.c_[0] = 0.0;
    Jet r = Jet::constant(s, table.empty() ? 0.0 : table.back());
    r.valid_x_ = a.valid_x_;
    r.valid_y_ = a.valid_y_;
    for (int k = static_cast<int>(table.size()) - 2; k >= 0; --k) {
        r = r * hat;
        r.c_[0] += table[static_cast<std::size_t>(k)];
    }
    return r;
}

namespace {

// Taylor coefficient tables g^(k)(a0)/k! for the outer elementary functions.
// Table length = valid_x + valid_y + 1: powers of (a - a0) beyond that total
// degree cannot touch any valid coefficient.

int table_len(const Jet& a) { return a.valid_x() + a.valid_y() + 1; }

std::vector<double> recip_table(double a0, int len) {
    std::vector<double> t(static_cast<std::size_t>(len));
    double v = 1.0 / a0;
    for (int k = 0; k < len; ++k) {
        t[static_cast<std::size_t>(k)] = v;
        v *= -1.0 / a0;
    }
    return t;
}

} // namespace

Jet operator/(const Jet& a, const Jet& b) {
    Jet::join(a, b);
    if (b.value() == 0.0) throw DomainError("division by jet with zero value");
    return a * compose(b, recip_table(b.value(), table_len(b)));
}

Jet operator/(double v, const Jet& a) {
    if (a.value() == 0.0) throw DomainError("division by jet with zero value");
    return v * compose(a, recip_table(a.value(), table_len(a)));
}

Jet sqrt(const Jet& a) {
    const double a0 = a.value();
    if (a0 <= 0.0) throw DomainError("sqrt of jet with non-positive value " + std::to_string(a0));
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    // binomial series: t[k] = C(1/2, k) a0^(1/2 - k)
    t[0] = std::sqrt(a0);
    for (int k = 1; k < len; ++k)
        t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] * (0.5 - (k - 1)) / (k * a0);
    return compose(a, t);
}

Jet exp(const Jet& a) {
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    t[0] = std::exp(a.value());
    for (int k = 1; k < len; ++k) t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] / k;
    return compose(a, t);
}

Jet log(const Jet& a) {
    const double a0 = a.value();
    if (a0 <= 0.0) throw DomainError("log of jet with non-positive value " + std::to_string(a0));
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    t[0] = std::log(a0);
    double p = 1.0; // (-1)^(k+1) / a0^k
    for (int k = 1; k < len; ++k) {
        p *= 1.0 / a0;
        t[static_cast<std::size_t>(k)] = (k % 2 ? p : -p) / k;
    }
    return compose(a, t);
}

Jet sin(const Jet& a) {
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    double fact = 1.0;
    for (int k = 0; k < len; ++k) {
        if (k > 1) fact *= k;
        else fact = 1.0;
        t[static_cast<std::size_t>(k)] = std::sin(a.value() + k * M_PI_2) / fact;
    }
    return compose(a, t);
}

Jet cos(const Jet& a) {
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    double fact = 1.0;
    for (int k = 0; k < len; ++k) {
        if (k > 1) fact *= k;
        else fact = 1.0;
        t[static_cast<std::size_t>(k)] = std::cos(a.value() + k * M_PI_2) / fact;
    }
    return compose(a, t);
}

Jet atan(const Jet& a) {
    // value directly; derivative coefficients from the series of 1/(1+s^2)
    // at a0, shifted one order.
    const int len = table_len(a);
    const double a0 = a.value();
    Series s = Series::variable(std::max(0, len - 2), a0);
    Series d = 1.0 / (1.0 + s * s);
    std::vector<double> t(static_cast<std::size_t>(len));
    t[0] = std::atan(a0);
    for (int k = 1; k < len; ++k) t[static_cast<std::size_t>(k)] = d[k - 1] / k;
    return compose(a, t);
}

Jet asinh(const Jet& a) {
    // derivative 1/sqrt(1+s^2), same scheme as atan
    const int len = table_len(a);
    const double a0 = a.value();
    Series s = Series::variable(std::max(0, len - 2), a0);
    Series d = 1.0 / sqrt(1.0 + s * s);
    std::vector<double> t(static_cast<std::size_t>(len));
    t[0] = std::asinh(a0);
    for (int k = 1; k < len; ++k) t[static_cast<std::size_t>(k)] = d[k - 1] / k;
    return compose(a, t);
}

Jet pow(const Jet& a, double p) {
    const double a0 = a.value();
    if (a0 <= 0.0)
        throw DomainError("pow of jet with non-positive value " + std::to_string(a0) +
                          " and real exponent " + std::to_string(p));
    const int len = table_len(a);
    std::vector<double> t(static_cast<std::size_t>(len));
    t[0] = std::pow(a0, p);
    for (int k = 1; k < len; ++k)
        t[static_cast<std::size_t>(k)] = t[static_cast<std::size_t>(k - 1)] * (p - (k - 1)) / (k * a0);
    return compose(a, t);
}

Jet powi(const Jet& a, int n) {
    if (n < 0) {
        if (a.value() == 0.0) throw DomainError("negative integer power of jet with zero value");
        return 1.0 / powi(a, -n);
    }
    Jet result = Jet::constant(a.space(), 1.0);
    result.valid_x_ = a.valid_x_;
    result.valid_y_ = a.valid_y_;
    Jet base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

namespace {

double adaptive_simpson_impl(const std::function<double(double)>& f, double a, double b, double fa,
                             double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureNonConvergence("adaptive quadrature depth limit reached");
    return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, tol * 0.5, depth - 1) +
           adaptive_simpson_impl(f, m, b, fm, frm, fb, right, tol * 0.5, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                        int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_impl(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace finsler
