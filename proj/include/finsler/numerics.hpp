#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include "finsler/errors.hpp"

namespace finsler {

using Vec2 = std::array<double, 2>;

template <class T>
using V2 = std::array<T, 2>;
template <class T>
using M2 = std::array<std::array<T, 2>, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(const Vec2& a) { return std::hypot(a[0], a[1]); }

// Deterministic, platform-independent RNG (splitmix64). std::uniform_*
// distributions are implementation-defined, so reproducible sampling and
// byte-identical reports use this instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Vec2 unit_direction() {
        const double t = 2.0 * M_PI * uniform();
        return {std::cos(t), std::sin(t)};
    }

    // independent substream; used to give every sample point its own stream
    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x6a09e667f3bcc909ull + index * 0x9e3779b97f4a7c15ull));
        mix.next_u64();
        return mix;
    }

private:
    std::uint64_t state_;
};

// Adaptive Simpson quadrature with absolute tolerance.
// Throws QuadratureNonConvergence when the recursion depth limit is reached.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-12, int max_depth = 48);

} // namespace finsler
