#pragma once

#include <cstdint>
#include <random>

namespace cvqc {

/// splitmix64 step; used both as a seed scrambler and as the documented
/// substream split function (see sub_seed).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Substream seed for worker/grid-point `index` under a master seed.
/// Defined as two splitmix64 steps from (master ^ (index+1)); every parallel
/// sweep in this project derives per-point generators exactly this way, so
/// results are independent of scheduling order.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (index + 1);
    splitmix64(s);
    return splitmix64(s);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    return Rng(splitmix64(s));
}

inline double normal(Rng& rng, double mean = 0.0, double stddev = 1.0) {
    std::normal_distribution<double> d(mean, stddev);
    return d(rng);
}

inline double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
}

} // namespace cvqc
