#pragma once

#include <cstddef>

#include "hodiag/matrix.hpp"

namespace hd {

// Subspace of F_p^n. The basis is kept in reduced column echelon form, so equal
// subspaces have identical basis matrices.
class Subspace {
 public:
  Subspace() = default;
  Subspace(Field f, std::size_t ambient);  // zero subspace
  // Column span of generators (any number of columns, possibly dependent).
  static Subspace span(const Matrix& gens);
  static Subspace full(Field f, std::size_t ambient);

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }
  const Field& field() const { return basis_.field(); }
  // Row index of the pivot of each basis column; strictly increasing.
  const std::vector<std::size_t>& pivots() const { return piv_; }

  bool contains(const Vec& v) const;
  bool contains(const Subspace& o) const;
  // Coordinates of v in the echelon basis; v must lie in the subspace.
  Vec coords(const Vec& v) const;

  bool operator==(const Subspace& o) const { return n_ == o.n_ && basis_ == o.basis_; }

 private:
  std::size_t n_ = 0;
  Matrix basis_;
  std::vector<std::size_t> piv_;
};

struct RankKernelImage {
  std::size_t rank;
  Subspace kernel;
  Subspace image;
};

RankKernelImage rank_kernel_image(const Matrix& m);
Subspace kernel(const Matrix& m);
Subspace image(const Matrix& m);

// Span of the standard basis vectors at the non-pivot rows of s.
Subspace complement(const Subspace& s);
Subspace intersect(const Subspace& a, const Subspace& b);
Subspace sum(const Subspace& a, const Subspace& b);
// Columns completing a basis of a to a basis of b (a must lie in b).
Matrix quotient_basis(const Subspace& a, const Subspace& b);
// Image of a subspace under a matrix.
Subspace map_subspace(const Matrix& m, const Subspace& s);
// Preimage m^{-1}(s).
Subspace preimage(const Matrix& m, const Subspace& s);

}  // namespace hd
