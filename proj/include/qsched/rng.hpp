#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qsched {

using Rng = std::mt19937_64;

/// Seed for the named substream of `master`. Consumers that draw from
/// different names never perturb each other.
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);
std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index);

Rng make_stream(std::uint64_t master, std::string_view name);
Rng make_stream(std::uint64_t master, std::string_view name, std::uint64_t index);

}  // namespace qsched
