#pragma once

// Seeded randomness with a fixed, documented bit stream. std::mt19937_64's
// output sequence is pinned by the C++ standard; the standard distributions
// are not, so bounded integers and unit reals are derived here directly from
// the raw engine output.

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>

namespace binmorph {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound), by rejection of the biased tail.
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % bound;
    }

    /// Uniform integer in [lo, hi].
    int between(int lo, int hi) {
        if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    bool chance(double p) { return unit() < p; }

    /// Fisher-Yates, last position first.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace binmorph
