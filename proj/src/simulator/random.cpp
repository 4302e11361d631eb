#include "levypos/random.hpp"

namespace levypos {

namespace {
constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}
}  // namespace

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& s : s_) {
        s = sm.next();
    }
}

RandomStream::result_type RandomStream::operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() {
    // Top 53 bits, shifted by half a step so that 0 and 1 are both excluded.
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

RandomStream make_stream(std::uint64_t master_seed, std::uint64_t index) {
    SplitMix64 mix(master_seed);
    const std::uint64_t base = mix.next();
    SplitMix64 per_sample(base ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return RandomStream(per_sample.next());
}

}  // namespace levypos
