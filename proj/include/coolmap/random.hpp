#pragma once

#include <cstdint>
#include <random>

#include "coolmap/quantum_core.hpp"

namespace coolmap {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniformly random unit vector in C^n (normalized complex Gaussian).
CVector random_unit_vector(std::size_t n, Rng& rng);

/// Complex Ginibre matrix with standard normal real and imaginary parts.
CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);

/// G G^dag / Tr: full rank with probability one.
DensityMatrix random_state(std::size_t d, Rng& rng);

DensityMatrix random_pure_state(std::size_t d, Rng& rng);

/// Uniform point of the probability simplex (normalized exponentials).
RVector random_simplex_point(std::size_t d, Rng& rng);

/// Haar-random unitary via QR of a Ginibre matrix with the phase fix.
CMatrix random_unitary(std::size_t n, Rng& rng);

} // namespace coolmap
