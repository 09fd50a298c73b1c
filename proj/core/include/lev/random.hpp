#pragma once

#include <cstdint>
#include <random>

namespace lev {

using Rng = std::mt19937_64;

/// Deterministic per-stream seed derivation (SplitMix64 finaliser). Replica i of
/// a Monte Carlo loop uses derive_seed(master, i) so results never depend on
/// the order in which replicas are evaluated.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                                  std::uint64_t sub) noexcept {
    return derive_seed(derive_seed(master, stream), sub);
}

}  // namespace lev
