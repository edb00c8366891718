#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hodiag/diagram.hpp"
#include "hodiag/random.hpp"

namespace hd {

// Columns C_0..C_N with horizontal chain maps h[p]: C_p -> C_{p-1} (h[0] unused)
// and h[p-1] h[p] = 0. Entry (p, q) is degree q of column p.
struct DoubleComplex {
  Field field;
  std::vector<ChainComplex> columns;
  std::vector<Comps> horizontal;
  int width() const { return static_cast<int>(columns.size()); }
  std::size_t dim(int p, int q) const;
  Matrix h(int p, int q) const;  // C_{p,q} -> C_{p-1,q}
  Matrix v(int p, int q) const;  // C_{p,q} -> C_{p,q-1}
};
// Empty when every h[p] is a chain map and consecutive composites vanish.
std::string validate(const DoubleComplex& dc);
DoubleComplex random_double_complex(const Field& f, int columns, int max_deg, std::size_t max_dim, Rng& rng);

// Total complex with D = h + (-1)^p v; degree n holds columns 0..N in order, so
// the column filtration F_p is spanned by the first blocks.
struct TotalComplex {
  ChainComplex complex;
  std::vector<std::vector<std::size_t>> offset;  // offset[n][p], p = 0..N (plus end)
};
TotalComplex total(const DoubleComplex& dc);

// Increasing filtration F_0 -> F_1 -> ... by degreewise injective chain maps.
struct FilteredComplex {
  Field field;
  std::vector<ChainComplex> stages;
  std::vector<Comps> inclusions;  // inclusions[n]: F_n -> F_{n+1}
};
std::string validate(const FilteredComplex& fc);
FilteredComplex column_filtration(const DoubleComplex& dc);

// Pages as dimension tables keyed by (p, q), total degree p + q.
struct SSPage {
  int r = 1;
  std::map<std::pair<int, int>, std::size_t> dim;
  std::map<std::pair<int, int>, std::size_t> d_rank;  // rank of d^r out of (p, q)
  // Chase pages only: dimension of the indeterminacy of d^r out of (p, q) in E^1.
  std::map<std::pair<int, int>, std::size_t> indeterminacy;
  std::size_t total() const;
};

// Pages E^1..E^{r_max} from the subquotient formulas
//   E^r_p = Z^r_p / (Z^{r-1}_{p-1} + D Z^{r-1}_{p+r-1}),  Z^r_p = F_p cap D^{-1} F_{p-r}.
std::vector<SSPage> classical_pages(const DoubleComplex& dc, int r_max);
std::vector<SSPage> classical_pages(const FilteredComplex& fc, int r_max);
// Associated graded of homology, dim F_p H_n / F_{p-1} H_n keyed by (p, n - p).
std::map<std::pair<int, int>, std::size_t> graded_homology(const DoubleComplex& dc);
std::map<std::pair<int, int>, std::size_t> graded_homology(const FilteredComplex& fc);

// d^r as a relation on E^1 = H(columns): classes of H_q(C_p) are lifted along a
// staircase x_0, ..., x_{r-1} with x_i in C_{p-i, q+i} solved jointly, and the
// value is the class of h(x_{r-1}) in H_{q+r-1}(C_{p-r}), known modulo the
// classes hit by shorter staircases.
struct Relation {
  int r = 1, p = 0, q = 0;
  Matrix classes;          // H_q(C_p) coordinates
  Matrix value;            // H_{q+r-1}(C_{p-r}) coordinates
  Subspace indeterminacy;  // in H_{q+r-1}(C_{p-r})
  std::vector<std::vector<Vec>> witness;  // per class: the staircase x_0..x_{r-1}
};
// Classes surviving to E^r (those admitting a staircase of length r).
Subspace chase_cycles(const DoubleComplex& dc, int r, int p, int q);
// Classes hit by d^1..d^{r-1}.
Subspace chase_boundaries(const DoubleComplex& dc, int r, int p, int q);
// Throws std::invalid_argument when a class does not survive to E^r.
Relation chase_d(const DoubleComplex& dc, int r, int p, int q, const Matrix& classes);
Relation chase_d(const DoubleComplex& dc, int r, int p, int q);
std::vector<SSPage> chase_pages(const DoubleComplex& dc, int r_max);

struct CrossCheck {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
// Compares chase and classical pages and differentials for r = 1..r_max,
// checks d^r d^r = 0 as relations, and E^infinity against gr H.
CrossCheck cross_check(const DoubleComplex& dc, int r_max);

// Cube diagram of a segment C_hi -> ... -> C_lo: the vertex with i leading ones
// carries C_{lo+i}, every other vertex is 0.
struct CubeSS {
  int n = 0;
  int lo = 0;
  Diagram diagram;
};
CubeSS double_to_cube(const DoubleComplex& dc, int lo, int hi);

// 3^n grid: coordinate 2 along an axis is the fiber of the map 1 -> 0 there.
struct ExtendedCube {
  int n = 0;
  std::map<std::vector<int>, ChainComplex> objects;
  // (vertex, axis) -> map to the vertex with that coordinate lowered by one.
  std::map<std::pair<std::vector<int>, int>, Comps> maps;
  std::vector<std::string> failures;  // non-exact fiber sequences, non-commuting squares
  bool ok() const { return failures.empty(); }
};
ExtendedCube extend_cube(const CubeSS& c);

// C_n = F_n / F_{n-1} shifted down by n, with the connecting maps as horizontal
// maps. Throws std::invalid_argument unless the inclusions are injective and
// each quotient F_n / F_{n-1} is concentrated in degrees >= n.
DoubleComplex filtered_to_double(const FilteredComplex& fc);
std::pair<DoubleComplex, CubeSS> filtered_to_cubes(const FilteredComplex& fc, int n);

}  // namespace hd
