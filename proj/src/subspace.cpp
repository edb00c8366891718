#include "hodiag/subspace.hpp"

#include <stdexcept>

namespace hd {

Subspace::Subspace(Field f, std::size_t ambient) : n_(ambient), basis_(f, ambient, 0) {}

Subspace Subspace::span(const Matrix& gens) {
  Subspace s(gens.field(), gens.rows());
  Rref r = rref(gens.transpose());
  const std::size_t k = r.pivots.size();
  s.basis_ = r.m.block(0, 0, k, gens.rows()).transpose();
  s.piv_ = r.pivots;
  return s;
}

Subspace Subspace::full(Field f, std::size_t ambient) {
  return span(Matrix::identity(f, ambient));
}

bool Subspace::contains(const Vec& v) const {
  if (v.size() != n_) throw std::invalid_argument("contains: ambient mismatch");
  // Reduce v against the echelon basis; pivots make this a single pass.
  const Field& f = field();
  Vec w = v;
  for (std::size_t j = 0; j < piv_.size(); ++j) {
    elem c = w[piv_[j]];
    if (!c) continue;
    for (std::size_t i = 0; i < n_; ++i) w[i] = f.sub(w[i], f.mul(c, basis_(i, j)));
  }
  return vzero(w);
}

bool Subspace::contains(const Subspace& o) const {
  for (std::size_t j = 0; j < o.dim(); ++j)
    if (!contains(o.basis().col(j))) return false;
  return true;
}

Vec Subspace::coords(const Vec& v) const {
  Vec c(piv_.size());
  for (std::size_t j = 0; j < piv_.size(); ++j) c[j] = v[piv_[j]];
  if (basis_.apply(c) != v) throw std::invalid_argument("coords: vector not in subspace");
  return c;
}

RankKernelImage rank_kernel_image(const Matrix& m) {
  Rref r = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_piv(n, false);
  for (auto p : r.pivots) is_piv[p] = true;
  std::vector<Vec> gens;
  for (std::size_t fcol = 0; fcol < n; ++fcol) {
    if (is_piv[fcol]) continue;
    Vec v(n, 0);
    v[fcol] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = m.field().neg(r.m(i, fcol));
    gens.push_back(v);
  }
  return {r.pivots.size(), Subspace::span(Matrix::from_columns(m.field(), n, gens)),
          Subspace::span(m)};
}

Subspace kernel(const Matrix& m) { return rank_kernel_image(m).kernel; }
Subspace image(const Matrix& m) { return Subspace::span(m); }

Subspace complement(const Subspace& s) {
  std::vector<bool> is_piv(s.ambient(), false);
  for (auto p : s.pivots()) is_piv[p] = true;
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < s.ambient(); ++i)
    if (!is_piv[i]) gens.push_back(unit(s.ambient(), i));
  return Subspace::span(Matrix::from_columns(s.field(), s.ambient(), gens));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("intersect: ambient mismatch");
  Matrix ab = a.basis().hcat(-b.basis());
  Subspace k = kernel(ab);
  Matrix coeff = k.basis().block(0, 0, a.dim(), k.dim());
  return Subspace::span(a.basis() * coeff);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("sum: ambient mismatch");
  return Subspace::span(a.basis().hcat(b.basis()));
}

Matrix quotient_basis(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("quotient_basis: ambient mismatch");
  if (!b.contains(a)) throw std::invalid_argument("quotient_basis: subspace not contained");
  Matrix acc = a.basis();
  std::size_t r = a.dim();
  std::vector<Vec> chosen;
  for (std::size_t j = 0; j < b.dim(); ++j) {
    Vec v = b.basis().col(j);
    Matrix trial = acc.hcat(Matrix::column(b.field(), v));
    std::size_t tr = rank(trial);
    if (tr > r) {
      acc = trial;
      r = tr;
      chosen.push_back(v);
    }
  }
  return Matrix::from_columns(b.field(), b.ambient(), chosen);
}

Subspace map_subspace(const Matrix& m, const Subspace& s) { return Subspace::span(m * s.basis()); }

Subspace preimage(const Matrix& m, const Subspace& s) {
  // x with m x in s: kernel of [m | -basis(s)] projected to the first block.
  Matrix big = m.hcat(-s.basis());
  Subspace k = kernel(big);
  return Subspace::span(k.basis().block(0, 0, m.cols(), k.dim()));
}

}  // namespace hd
