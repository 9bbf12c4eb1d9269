#pragma once

#include <cstdint>
#include <random>

namespace mixtopic {

// splitmix64 step; used to derive independent sub-stream seeds from one
// master seed so that per-patient / per-module streams never overlap by
// construction.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for a (seed, label, index) triple.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label,
                                 std::uint64_t index = 0) {
  std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (label + 1));
  std::uint64_t a = splitmix64(s);
  s ^= index * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1);
}

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t label,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(seed, label, index));
}

// Stream labels for the modules that consume randomness.
namespace rng_label {
constexpr std::uint64_t init_posteriors = 1;
constexpr std::uint64_t sim_global = 2;
constexpr std::uint64_t sim_patient = 3;
constexpr std::uint64_t cv_folds = 4;
constexpr std::uint64_t heldout_split = 5;
constexpr std::uint64_t masked_split = 6;
}  // namespace rng_label

}  // namespace mixtopic
