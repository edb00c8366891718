#pragma once

#include "hodiag/diagram.hpp"
#include "hodiag/random.hpp"

namespace hd {

// n-cube of iterated cones: vertex labels are bitstrings with a 1 at i for i in
// A; covers clear one bit. X(A) has a copy of V for each S in [n] minus A with
// |S| <= n-1, in degree |S|, and d e_S = sum_j (-1)^j e_{S minus s_j}. The
// all-ones vertex is K(V,0) and the all-zeros vertex is K(V,n-1).
Diagram gen_cube(const Field& f, int n, std::size_t dimV);

// Zig-zag of cones between K(V,0) and K(V,n): objects s, a0..a{n-1},
// b0..b{n-1}, t. With split = true the top class of t is killed by a disk and
// replaced by a fresh sphere, giving the same primary data with trivial
// higher structure.
Diagram gen_minimal(const Field& f, int n, std::size_t dimV, bool split = false);

// Square K(V,0) -> 0, 0 -> K(V,1) given strictly with zero maps.
Diagram strict_zero_square(const Field& f, std::size_t dimV);

// Fan: a -> g_1..g_m -> b.
Poset fan_poset(int m);
// Boolean lattice on n bits, labels as in gen_cube.
Poset cube_poset(int n);

// Random connected poset on n objects with a single minimum.
Poset random_poset(Rng& rng, std::size_t n, double edge_prob = 0.35);

// Cofibrant diagram built by attaching random cells to the latching object of
// every object, in degrees <= max_deg.
Diagram random_cofibrant_diagram(const Field& f, const Poset& p, int max_deg, std::size_t max_new,
                                 Rng& rng);
// Same, then objectwise truncated or covered at a random degree so that the
// structure maps are no longer injective.
Diagram random_diagram(const Field& f, const Poset& p, int max_deg, std::size_t max_new, Rng& rng);

// Fan of m cones on a common sphere K(W,k) with random extra structure: the
// initial object carries K(W,k) plus spheres that survive to the middle objects.
Diagram random_fan_diagram(const Field& f, int m, int k, std::size_t dimW, std::size_t extra,
                           Rng& rng);

}  // namespace hd
