#pragma once

#include <cstdint>
#include <string_view>

namespace skycast {

// One step of the splitmix64 sequence. Advances `state` and returns the next
// output. Used for seeding and for deriving independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// FNV-1a 64-bit hash over a byte string. Used for stable config/data digests
// and for deriving per-experiment seeds from a canonical spec string.
std::uint64_t fnv1a64(std::string_view bytes);

// Combines two 64-bit values into a new seed. Order-sensitive, deterministic.
std::uint64_t mix_seeds(std::uint64_t a, std::uint64_t b);

// Deterministic pseudo-random generator: xorshift64* (Vigna's variant with
// multiplier 0x2545F4914F6CDD1D), state initialized by one splitmix64 step so
// that any 64-bit seed (including 0) is usable. Identical seeds produce
// identical draw sequences on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    std::uint64_t next_u64();
    // Uniform on [0, 1), 53-bit resolution.
    double next_double();
    // Uniform on [lo, hi). Requires lo < hi.
    double uniform(double lo, double hi);
    // Standard normal via Box-Muller; consumes exactly two uniform draws.
    double gaussian();

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
};

} // namespace skycast
