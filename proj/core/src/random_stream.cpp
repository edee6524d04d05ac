#include "lifopr/random_stream.hpp"

namespace lifopr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

} // namespace

double RandomStream::uniform_open0() {
    // (k + 1) / 2^53 with k in [0, 2^53): exactly representable, in (0, 1].
    const std::uint64_t k = engine_() >> 11;
    return static_cast<double>(k + 1) * 0x1.0p-53;
}

RandomStream RandomStream::substream(std::uint64_t index) const {
    return RandomStream(derive_seed(seed_, index));
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

} // namespace lifopr
