// Seeded, splittable random streams. The simulator derives one independent
// stream per subsystem (market draws, each buyer, engine shuffles) from a
// single master seed, so adding a draw in one subsystem never perturbs the
// sequences seen by another. All draws are implemented from raw 64-bit
// output instead of <random> distributions, which are not portable across
// standard library implementations.
#pragma once

#include <cstdint>
#include <vector>

namespace repage {

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

enum class StreamKind : std::uint64_t {
    MarketDraws = 1,
    Buyer = 2,
    PhaseShuffle = 3,
    CheaterAssignment = 4,
    SeedDerivation = 5,
};

class RngStream {
public:
    RngStream() : state_(0) {}
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    // Stream identity is folded into the seed, not the sequence position.
    RngStream(std::uint64_t master_seed, StreamKind kind, std::uint64_t index = 0)
        : state_(mix64(mix64(master_seed ^ mix64(static_cast<std::uint64_t>(kind))) ^ mix64(index))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Multiply-shift; bias is O(n / 2^64).
    std::uint64_t uniform_index(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Uniform double in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t state_;
};

}  // namespace repage
