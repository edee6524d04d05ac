#pragma once

#include <cstdint>
#include <random>

namespace lifopr {

/// Seedable uniform source used by every sampling path.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard, so a given seed reproduces the same variates on every conforming
/// toolchain. Uniforms are formed from the top 53 bits of each draw rather
/// than through std::uniform_real_distribution (whose algorithm is
/// implementation-defined).
///
/// Sub-streams are derived by hashing (parent seed, stream index) through
/// SplitMix64; see derive_seed().
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    /// Uniform on the half-open interval (0, 1]; never returns 0.
    double uniform_open0();

    std::uint64_t next_u64() { return engine_(); }

    std::uint64_t seed() const noexcept { return seed_; }

    /// A new independent stream whose seed is derive_seed(seed(), index).
    RandomStream substream(std::uint64_t index) const;

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// SplitMix64 finalizer applied to the parent seed mixed with the index.
/// Distinct indices give statistically unrelated seeds.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

} // namespace lifopr
