#pragma once

#include <cstdint>
#include <limits>

namespace levypos {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

// xoshiro256** seeded from SplitMix64. Satisfies UniformRandomBitGenerator.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

    // Uniform on the open interval (0, 1).
    double uniform();

private:
    std::uint64_t s_[4];
};

// Stream for sample `index` of a run seeded with `master_seed`. Depends only on the pair,
// so the sample set does not depend on how samples are scheduled.
[[nodiscard]] RandomStream make_stream(std::uint64_t master_seed, std::uint64_t index);

}  // namespace levypos
