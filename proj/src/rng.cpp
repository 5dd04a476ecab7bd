#include "irs/rng.hpp"

#include <array>

namespace irs {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index ^ 0x5851f42d4c957f2dULL));
}

Engine make_engine(std::uint64_t seed) {
    // Expand the 64-bit seed so the full mt19937_64 state is initialised.
    std::array<std::uint32_t, 8> words{};
    std::uint64_t s = seed;
    for (std::size_t i = 0; i < words.size(); i += 2) {
        s = splitmix64(s);
        words[i] = static_cast<std::uint32_t>(s);
        words[i + 1] = static_cast<std::uint32_t>(s >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

}  // namespace irs
