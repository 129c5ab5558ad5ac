#pragma once

#include <cstdint>
#include <random>

namespace gridroute {

// Deterministic random source. All bounded draws are hand-rolled on top of
// the raw mt19937_64 stream so that identical seeds give identical results
// on every platform (std::uniform_int_distribution does not guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform integer in [0, n). Rejection sampling, n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);

    // Uniform double in [0, 1), 53 bits of precision.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// SplitMix64-based mixer for deriving independent sub-stream seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

} // namespace gridroute
