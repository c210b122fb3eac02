#ifndef RELAXINV_RNG_HPP
#define RELAXINV_RNG_HPP

#include <Eigen/Core>
#include <cmath>
#include <cstdint>

namespace relaxinv {

// Counter-based deterministic RNG: value i of stream `seed` depends only on
// (seed, i), so realizations are reproducible and trivially parallel.

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Uniform draw in the open interval (0,1).
inline double unit_open(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t r = mix64(mix64(index) ^ seed);
    return static_cast<double>(r >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Standard normal via Box-Muller on two counter draws.
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
    const double u1 = unit_open(seed, 2 * index);
    const double u2 = unit_open(seed, 2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Eigen::VectorXd gaussian_vector(std::uint64_t seed, Eigen::Index n) {
    Eigen::VectorXd g(n);
    for (Eigen::Index i = 0; i < n; ++i)
        g[i] = gaussian(seed, static_cast<std::uint64_t>(i));
    return g;
}

}  // namespace relaxinv

#endif
