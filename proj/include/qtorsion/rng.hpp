#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qtorsion {

/**
 * Deterministic random source used by every generator.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. Bounded draws use rejection sampling on the raw 64-bit output
 * instead of std::uniform_int_distribution, whose algorithm is
 * implementation-defined, so corpora are reproducible across toolchains.
 *
 * Sub-generators obtain independent streams with split(tag): the child seed
 * is splitmix64(seed ^ fnv1a(tag)).
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// True with probability num/den.
    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    Rng split(std::string_view tag) const { return Rng(splitmix64(seed_ ^ fnv1a(tag))); }

    Rng split(std::uint64_t index) const
    {
        return Rng(splitmix64(seed_ + 0x9E3779B97F4A7C15ull * (index + 1)));
    }

    static std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    static std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace qtorsion
