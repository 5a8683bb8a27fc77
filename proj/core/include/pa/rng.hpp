#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pa {

using Rng = std::mt19937_64;

/// FNV-1a hash of a stage tag.
std::uint64_t fnv1a64(std::string_view s);

/// splitmix64 finalizer; decorrelates nearby seeds.
std::uint64_t mix64(std::uint64_t x);

/// Stage seed derived from the master seed and a fixed tag. Adding a new
/// stage tag never perturbs the streams of existing stages.
std::uint64_t sub_seed(std::uint64_t master, std::string_view stage);

/// Indexed variant for per-fold / per-repetition streams.
std::uint64_t sub_seed(std::uint64_t master, std::string_view stage, std::uint64_t index);

} // namespace pa
