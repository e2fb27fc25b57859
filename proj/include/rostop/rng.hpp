#ifndef ROSTOP_RNG_HPP
#define ROSTOP_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace rostop {

/// SplitMix64 finalizer; used to derive independent generator keys.
constexpr std::uint64_t mix64(std::uint64_t z)
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a role name ("train", "validation", ...).
constexpr std::uint64_t hash_name(std::string_view name)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed of an independent stream derived from a base seed and a role.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view role, std::uint64_t index = 0)
{
  return mix64(mix64(seed ^ hash_name(role)) + index);
}

/// Generator for sample path `index` of the stream keyed by `seed`. Each path
/// owns its generator, so path i is the same no matter which paths are
/// generated before it or on which thread.
inline std::mt19937_64 path_rng(std::uint64_t seed, std::uint64_t index)
{
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL)));
}

}  // namespace rostop

#endif  // ROSTOP_RNG_HPP
