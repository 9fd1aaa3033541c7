#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rainbow {

// Seeded generator used by every stochastic routine. mt19937_64 is bit-exact
// across platforms; the helpers below avoid std::*_distribution, whose output
// is implementation-defined, so runs reproduce byte-identically from a seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return eng_(); }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do { x = eng_(); } while (x >= limit);
        return x % bound;
    }

    int range(int lo, int hi_inclusive) {
        return lo + (int)below((std::uint64_t)(hi_inclusive - lo + 1));
    }

    // Uniform double in [0,1) with 53 random bits.
    double unit() { return (double)(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = (std::size_t)below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[(std::size_t)below(v.size())];
    }

private:
    std::mt19937_64 eng_;
    std::uint64_t seed_;
};

} // namespace rainbow
