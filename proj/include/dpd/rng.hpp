#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace dpd {

namespace detail {

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// 53-bit uniform in (0, 1), never exactly 0 or 1.
inline double to_unit(std::uint64_t u) {
    return (static_cast<double>(u >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace detail

/// Counter-based (stateless) random stream. Every deviate is a pure function
/// of (master_seed, key words), so pair iteration order, replica scheduling,
/// and threading cannot perturb the noise, and trajectories replay
/// bit-identically from the seed alone.
///
/// Gaussians use the Box-Muller cosine branch on two keyed 53-bit uniforms;
/// this choice is fixed because bit-exact replay depends on it.
class RngStream {
  public:
    explicit RngStream(std::uint64_t master_seed)
        : seed_(master_seed), root_(detail::mix64(master_seed)) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform deviate in (0, 1) keyed by (k1, k2).
    double uniform(std::uint64_t k1, std::uint64_t k2) const {
        return detail::to_unit(hash(k1, k2));
    }

    /// Standard normal deviate keyed by (k1, k2).
    double gaussian(std::uint64_t k1, std::uint64_t k2) const {
        const std::uint64_t h = hash(k1, k2);
        const double u1 = detail::to_unit(h);
        const double u2 = detail::to_unit(detail::mix64(h ^ 0xd6e8feb86659fd93ULL));
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    /// One standard normal per (step, unordered pair). Symmetric in (i, j) by
    /// canonicalizing to i < j.
    double pair_gaussian(long step, std::uint32_t i, std::uint32_t j) const {
        if (i == j) throw std::invalid_argument("pair_gaussian: i == j");
        if (i > j) std::swap(i, j);
        const std::uint64_t pair_key = (static_cast<std::uint64_t>(i) << 32) | j;
        return gaussian(kPairDomain ^ static_cast<std::uint64_t>(step), pair_key);
    }

    // Key domains keep pair noise, initial positions, and initial momenta on
    // disjoint streams.
    static constexpr std::uint64_t kPairDomain = 0x5041495200000000ULL;
    static constexpr std::uint64_t kInitPosDomain = 0x504f530000000000ULL;
    static constexpr std::uint64_t kInitMomDomain = 0x4d4f4d0000000000ULL;

  private:
    std::uint64_t hash(std::uint64_t k1, std::uint64_t k2) const {
        return detail::mix64(detail::mix64(root_ ^ k1) ^ k2);
    }

    std::uint64_t seed_;
    std::uint64_t root_;
};

}  // namespace dpd
