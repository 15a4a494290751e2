#pragma once

#include <cmath>
#include <cstdint>

namespace collector {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

// Plain 2x2 matrix, row major. Everything in this project is 2-dimensional,
// so this beats dragging in a linear algebra library.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Vec2 apply(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }

    double max_abs() const {
        return std::fmax(std::fmax(std::fabs(a11), std::fabs(a12)),
                         std::fmax(std::fabs(a21), std::fabs(a22)));
    }

    // Largest eigenvalue of a nonnegative matrix (real for our inputs).
    double perron_root() const {
        const double t = trace();
        const double disc = t * t - 4.0 * det();
        return 0.5 * (t + std::sqrt(std::fmax(disc, 0.0)));
    }

    Mat2 scaled(double c) const { return {a11 * c, a12 * c, a21 * c, a22 * c}; }
};

inline double max_norm(const Vec2& v) {
    return std::fmax(std::fabs(v.x), std::fabs(v.y));
}

// SplitMix64; used to derive independent child seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id) {
    std::uint64_t s = master ^ (0xA0761D6478BD642Full * (stream_id + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

} // namespace collector
