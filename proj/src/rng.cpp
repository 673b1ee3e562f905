#include "qsched/rng.hpp"

namespace qsched {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return mix(mix(master) ^ fnv1a(name));
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name, std::uint64_t index) {
  return mix(derive_seed(master, name) ^ mix(index + 0x5851f42d4c957f2dULL));
}

Rng make_stream(std::uint64_t master, std::string_view name) {
  return Rng(derive_seed(master, name));
}

Rng make_stream(std::uint64_t master, std::string_view name, std::uint64_t index) {
  return Rng(derive_seed(master, name, index));
}

}  // namespace qsched
