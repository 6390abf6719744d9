#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace thematic {

/// Uniform sample of `k` distinct indices from [0, n) without replacement,
/// returned in ascending order. Portable: uses mt19937_64 with a fixed
/// rejection scheme rather than implementation-defined distributions.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, std::uint64_t seed);

}  // namespace thematic
