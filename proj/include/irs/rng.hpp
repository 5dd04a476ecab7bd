#pragma once

#include <cstdint>
#include <random>

namespace irs {

using Engine = std::mt19937_64;

/// Seed for stream `index` under `master`. Mixes both words through two
/// rounds of the SplitMix64 finalizer so neighbouring indices give unrelated
/// streams and the result does not depend on the order streams are drawn.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

[[nodiscard]] Engine make_engine(std::uint64_t seed);

}  // namespace irs
