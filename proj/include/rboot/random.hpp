#pragma once

#include <cstdint>
#include <random>

namespace rboot {

using Rng = std::mt19937_64;

/// Named substreams so that, e.g., bootstrap replicate 7 never shares draws
/// with curve replicate 7 under the same master seed.
enum class Stream : std::uint64_t {
  design_coefficients = 1,
  design_covariates = 2,
  design_response = 3,
  gamma_curve = 4,
  bootstrap = 5,
  pairs = 6,
  parametric = 7,
  repetition = 8,
};

/// Counter-based seed derivation (splitmix64 finalizer over the triple).
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index);

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index) {
  return Rng(derive_seed(master, stream, index));
}

}  // namespace rboot
