#pragma once

#include <cstdint>
#include <random>

namespace ccnlab {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based child seed: child i of (master, stream) never depends on how
/// many other children were requested.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) {
  return mix64(mix64(mix64(master) ^ (stream * 0xd1b54a32d192ed03ULL)) + index);
}

inline Rng make_rng(std::uint64_t master, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

/// Stream ids, so independent consumers of one master seed never share a sequence.
namespace streams {
inline constexpr std::uint64_t kCovariates = 1;
inline constexpr std::uint64_t kOutcomes = 2;
inline constexpr std::uint64_t kAssignment = 3;
inline constexpr std::uint64_t kNoise = 4;
inline constexpr std::uint64_t kTraining = 5;
inline constexpr std::uint64_t kSplit = 6;
inline constexpr std::uint64_t kReplication = 7;
inline constexpr std::uint64_t kSampling = 8;
inline constexpr std::uint64_t kUtility = 9;
inline constexpr std::uint64_t kScenarioParams = 10;
}  // namespace streams

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace ccnlab
