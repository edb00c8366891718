#pragma once

#include <cstdint>
#include <random>

#include "hodiag/chain.hpp"

namespace hd {

using Rng = std::mt19937_64;

Matrix random_matrix(const Field& f, std::size_t rows, std::size_t cols, Rng& rng);
// Random matrix of rank at most r.
Matrix random_low_rank(const Field& f, std::size_t rows, std::size_t cols, std::size_t r, Rng& rng);
std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
elem random_prime(Rng& rng, std::initializer_list<elem> choices);

// Random complex with dims in [0, max_dim] over degrees [0, max_deg]. Built
// from a random sphere/disk decomposition under a random change of basis.
ChainComplex random_complex(const Field& f, int max_deg, std::size_t max_dim, Rng& rng);
// Random chain map between given complexes: random map on a sphere/disk basis
// of the source, sending disks along chosen lifts.
ChainMap random_chain_map(const ChainComplex& s, const ChainComplex& t, Rng& rng);

}  // namespace hd
