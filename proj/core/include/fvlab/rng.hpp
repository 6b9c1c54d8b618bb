#pragma once

#include <cstdint>
#include <random>

namespace fvlab {

// Replicate-indexed seeding: every worker derives its own generator from
// (master seed, stream id, index), so results do not depend on how
// replicates are distributed over threads.
enum class Stream : std::uint64_t {
  kEnvironment = 1,
  kMoranEvents = 2,
  kDualEvents = 3,
  kQuenchedEnvironment = 4,
  kInstanceSweep = 5,
  kDualEnvironment = 6,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                                 std::uint64_t index = 0) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s ^= static_cast<std::uint64_t>(stream) * 0x9e3779b97f4a7c15ull;
  std::uint64_t b = splitmix64(s);
  s ^= index * 0xbf58476d1ce4e5b9ull;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ c;
}

inline std::mt19937_64 make_rng(std::uint64_t master, Stream stream,
                                std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(master, stream, index));
}

}  // namespace fvlab
