#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "hodiag/subspace.hpp"

namespace hd {

// Non-negatively graded chain complex. d(n) maps degree n to degree n-1 and has
// shape dim(n-1) x dim(n); d(0) is the 0 x dim(0) matrix.
class ChainComplex {
 public:
  ChainComplex() = default;
  explicit ChainComplex(Field f) : f_(f) {}
  // d[n] for n >= 1 (d[0] ignored if present). Throws std::invalid_argument on
  // shape mismatch or d d != 0, naming the degree.
  ChainComplex(Field f, std::vector<std::size_t> dims, std::vector<Matrix> d);

  const Field& field() const { return f_; }
  std::size_t dim(int n) const {
    return n < 0 || n >= static_cast<int>(dims_.size()) ? 0 : dims_[n];
  }
  // Index of one past the highest nonzero degree.
  int length() const { return static_cast<int>(dims_.size()); }
  Matrix d(int n) const;
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total_dim() const;
  bool is_zero() const { return dims_.empty(); }

  bool operator==(const ChainComplex& o) const;

 private:
  Field f_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> d_;  // d_[n], n >= 1; d_[0] empty placeholder
};

// Degree-0 chain map, validated on construction.
struct ChainMap {
  ChainComplex src, tgt;
  std::vector<Matrix> f;  // f[n]: src_n -> tgt_n

  ChainMap() = default;
  ChainMap(ChainComplex s, ChainComplex t, std::vector<Matrix> comps);
  Matrix at(int n) const;
  static ChainMap identity(const ChainComplex& c);
  static ChainMap zero(const ChainComplex& s, const ChainComplex& t);
  ChainMap then(const ChainMap& g) const;  // g after this
  bool operator==(const ChainMap& o) const;
};

// Returns an empty string if f commutes with the differentials, else a
// description of the first failing degree.
std::string chain_map_defect(const ChainComplex& s, const ChainComplex& t,
                             const std::vector<Matrix>& f);

struct GradedVS {
  std::vector<std::size_t> dims;
  std::size_t dim(int n) const {
    return n < 0 || n >= static_cast<int>(dims.size()) ? 0 : dims[n];
  }
  bool operator==(const GradedVS&) const = default;
};

// Morphism in the category of graded spaces with maps of non-negative degree.
// comp[s][n] sends degree n to degree n+s. Missing entries are zero.
struct GradedMap {
  Field field;
  GradedVS src, tgt;
  std::map<int, std::map<int, Matrix>> comp;

  Matrix at(int shift, int n) const;
  void set(int shift, int n, const Matrix& m);
  // g after this; shifts add.
  GradedMap then(const GradedMap& g) const;
  GradedMap operator+(const GradedMap& o) const;
  bool is_zero() const;
  bool operator==(const GradedMap& o) const;
  static GradedMap zero(Field f, const GradedVS& s, const GradedVS& t);
  static GradedMap identity(Field f, const GradedVS& s);
};

struct Homology {
  std::size_t dim = 0;
  Matrix reps;     // dim(k) x h, cycles completing im d_{k+1} to ker d_k
  Matrix project;  // h x dim(k), retraction onto H_k coordinates, zero on boundaries
  Subspace cycles, boundaries;
};

Homology homology(const ChainComplex& c, int k);
std::vector<std::size_t> betti(const ChainComplex& c);
// Induced map H_k(src) -> H_k(tgt) in the chosen bases.
Matrix induced(const ChainMap& f, int k);
Matrix induced(const Homology& hs, const Homology& ht, const Matrix& fk);
bool is_quasi_iso(const ChainMap& f, int max_degree = -1);

ChainComplex sphere(Field f, std::size_t dimV, int n);
ChainComplex disk(Field f, std::size_t dimV, int m);

// cone_n = tgt_n + src_{n-1}, d(t, s) = (dt + fs, -ds).
ChainComplex cone(const ChainMap& f);
ChainMap cone_inclusion(const ChainMap& f);
ChainComplex suspend(const ChainComplex& c, int k = 1);
ChainComplex reduced_suspend(const ChainComplex& c, int k = 1);
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

struct Truncation {
  ChainComplex complex;
  ChainMap map;  // p_k: c -> truncate(c) or iota_k: cover -> c
};
Truncation truncate(const ChainComplex& c, int k);
Truncation conn_cover(const ChainComplex& c, int k);

enum class SummandKind { Sphere, Disk };
struct Summand {
  SummandKind kind;
  std::size_t dimV;
  int degree;  // sphere degree, or lower degree of the disk
};
struct Splitting {
  std::vector<Summand> summands;
  // basis[n] columns: [disk tops at n | disk bottoms at n | sphere reps at n]
  std::vector<Matrix> basis;
  bool verified = false;
};
Splitting split_spheres_disks(const ChainComplex& c);

// Connective mapping fiber: Fib_n = src_n + tgt_{n+1}, d(s, t) = (ds, fs - dt),
// with degree 0 cut down to the kernel of (s, t) -> fs - dt.
struct Fiber {
  ChainComplex complex;
  ChainMap to_source;   // Fib -> src
  ChainMap from_loop;   // Omega tgt -> Fib
  Matrix deg0_inclusion;  // Fib_0 -> src_0 + tgt_1
};
Fiber fiber(const ChainMap& f);
ChainComplex loop(const ChainComplex& c);

}  // namespace hd
