#pragma once

// Univariate truncated Taylor series with double coefficients.
//
// Series stores c[k] = f^(k)(s0)/k! for one expansion point. It is the
// univariate cousin of the 4-variable Jet and serves two purposes:
//   * generating coefficient tables for the elementary-function composition
//     used by Jet (atan, asinh derivatives),
//   * carrying the metric-profile function and its derivatives along the
//     ray parameter in the family construction, including an antiderivative
//     whose value coefficient comes from quadrature while all derivative
//     coefficients come from the integrand's series shifted one order.

#include <cmath>
#include <cstddef>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

class Series {
public:
    Series() : c_(1, 0.0) {}
    explicit Series(int order, double value = 0.0) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
        c_[0] = value;
    }

    static Series constant(int order, double value) { return Series(order, value); }

    // the identity map s |-> s expanded at s0
    static Series variable(int order, double s0) {
        Series r(order, s0);
        if (order >= 1) r.c_[1] = 1.0;
        return r;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    double value() const { return c_[0]; }
    double operator[](int k) const { return k <= order() ? c_[static_cast<std::size_t>(k)] : 0.0; }
    double& at(int k) { return c_[static_cast<std::size_t>(k)]; }

    // k-th derivative at the expansion point (coefficients times k!)
    double derivative(int k) const {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return (*this)[k] * f;
    }

    friend Series operator-(const Series& a) {
        Series r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }
    friend Series operator+(const Series& a, const Series& b) {
        Series r = a;
        for (int k = 0; k <= b.order() && k <= r.order(); ++k) r.c_[static_cast<std::size_t>(k)] += b[k];
        return r;
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
    friend Series operator+(const Series& a, double v) {
        Series r = a;
        r.c_[0] += v;
        return r;
    }
    friend Series operator+(double v, const Series& a) { return a + v; }
    friend Series operator-(const Series& a, double v) { return a + (-v); }
    friend Series operator-(double v, const Series& a) { return (-a) + v; }
    friend Series operator*(const Series& a, double v) {
        Series r = a;
        for (auto& x : r.c_) x *= v;
        return r;
    }
    friend Series operator*(double v, const Series& a) { return a * v; }
    friend Series operator/(const Series& a, double v) { return a * (1.0 / v); }

    friend Series operator*(const Series& a, const Series& b) {
        const int n = a.order();
        Series r(n);
        for (int k = 0; k <= n; ++k) {
            double sum = 0.0;
            for (int j = 0; j <= k; ++j) sum += a[j] * b[k - j];
            r.c_[static_cast<std::size_t>(k)] = sum;
        }
        return r;
    }

    // h = f/g via f = g*h:  h[n] = (f[n] - sum_{j<n} g[n-j] h[j]) / g[0]
    friend Series operator/(const Series& a, const Series& b) {
        if (b.value() == 0.0) throw DomainError("series division by zero-valued series");
        const int n = a.order();
        Series r(n);
        for (int k = 0; k <= n; ++k) {
            double sum = a[k];
            for (int j = 0; j < k; ++j) sum -= b[k - j] * r[j];
            r.c_[static_cast<std::size_t>(k)] = sum / b[0];
        }
        return r;
    }

    friend Series operator/(double v, const Series& b) {
        return Series::constant(b.order(), v) / b;
    }

    // g = sqrt(f):  g[n] = (f[n] - sum_{0<j<n} g[j] g[n-j]) / (2 g[0])
    friend Series sqrt(const Series& a) {
        if (a.value() <= 0.0) throw DomainError("series sqrt of non-positive value");
        const int n = a.order();
        Series r(n);
        r.c_[0] = std::sqrt(a.value());
        for (int k = 1; k <= n; ++k) {
            double sum = a[k];
            for (int j = 1; j < k; ++j) sum -= r[j] * r[k - j];
            r.c_[static_cast<std::size_t>(k)] = sum / (2.0 * r[0]);
        }
        return r;
    }

    // e = exp(f):  e[n] = (1/n) sum_{j=1..n} j f[j] e[n-j]
    friend Series exp(const Series& a) {
        const int n = a.order();
        Series r(n);
        r.c_[0] = std::exp(a.value());
        for (int k = 1; k <= n; ++k) {
            double sum = 0.0;
            for (int j = 1; j <= k; ++j) sum += j * a[j] * r[k - j];
            r.c_[static_cast<std::size_t>(k)] = sum / k;
        }
        return r;
    }

    // l = log(f):  l[n] = (f[n] - (1/n) sum_{0<j<n} j l[j] f[n-j]) / f[0]
    friend Series log(const Series& a) {
        if (a.value() <= 0.0) throw DomainError("series log of non-positive value");
        const int n = a.order();
        Series r(n);
        r.c_[0] = std::log(a.value());
        for (int k = 1; k <= n; ++k) {
            double sum = a[k];
            for (int j = 1; j < k; ++j) sum -= (static_cast<double>(j) / k) * r[j] * a[k - j];
            r.c_[static_cast<std::size_t>(k)] = sum / a[0];
        }
        return r;
    }

    friend Series pow(const Series& a, double p) {
        if (a.value() <= 0.0) throw DomainError("series pow of non-positive base");
        return exp(p * log(a));
    }

    // Antiderivative F with F' = this. The value coefficient cannot be
    // recovered from the series and must be supplied (typically from
    // quadrature); every other coefficient is the integrand shifted one order.
    Series antiderivative(double value_at_point) const {
        Series r(order() + 1, value_at_point);
        for (int k = 1; k <= r.order(); ++k) r.at(k) = (*this)[k - 1] / k;
        return r;
    }

private:
    std::vector<double> c_;
};

} // namespace finsler
