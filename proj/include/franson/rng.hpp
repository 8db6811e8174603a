#ifndef FRANSON_RNG_HPP
#define FRANSON_RNG_HPP

#include <cstdint>
#include <limits>

namespace franson
{

// SplitMix64 (Steele, Lea & Flood 2014). Small state, so a fresh generator can
// be derived per photon pair from (seed, pair_id) without any shared state.
// Satisfies std::uniform_random_bit_generator.
class SplitMix64
{
public:
    using result_type = std::uint64_t;

    explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    constexpr result_type operator()() noexcept
    {
        state_ += kGamma;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    constexpr double uniform01() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    // Independent substream for item `index` of a run seeded with `seed`.
    static constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept
    {
        return SplitMix64(mix(seed ^ mix(index + kGamma)) ^ index);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr std::uint64_t state() const noexcept { return state_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t state_;
};

} // namespace franson

#endif
