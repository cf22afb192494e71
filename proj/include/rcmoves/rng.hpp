#pragma once

#include <cstdint>
#include <random>

namespace rcmoves {

// Seeded generator used by every randomized component. std::mt19937_64 is
// fully specified by the standard and the double mapping below avoids
// implementation-defined distributions, so identical seeds give identical
// streams on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform in [0, n). Modulo bias is < 2^-53 for any n we ever use.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_double() * static_cast<double>(n)) % n; }

private:
    std::mt19937_64 gen_;
};

// Stable per-(round, cluster) child seeds for nested randomized steps.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace rcmoves
