#pragma once

#include <cstdint>
#include <random>

namespace svmf {

using Rng = std::mt19937_64;

// Counter-based seed derivation: stream `s` of master seed `m` is
// splitmix64(m ^ splitmix64(s + 1)). Restart r of a run is therefore
// reproducible on its own, without replaying restarts 0..r-1.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
  return Rng(derive_seed(master, stream));
}

}  // namespace svmf
