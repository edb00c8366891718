#include "hodiag/chain.hpp"

#include <sstream>
#include <stdexcept>

namespace hd {

ChainComplex::ChainComplex(Field f, std::vector<std::size_t> dims, std::vector<Matrix> d)
    : f_(f), dims_(std::move(dims)) {
  while (!dims_.empty() && dims_.back() == 0) dims_.pop_back();
  const int len = length();
  d_.assign(len, Matrix());
  for (int n = 0; n < len; ++n) d_[n] = Matrix(f, dim(n - 1), dim(n));
  for (int n = 1; n < static_cast<int>(d.size()); ++n) {
    const Matrix& m = d[n];
    if (n >= len) {
      if (!m.is_zero())
        throw std::invalid_argument("differential in degree " + std::to_string(n) +
                                    " leaves the support");
      continue;
    }
    if (m.rows() != dim(n - 1) || m.cols() != dim(n)) {
      std::ostringstream os;
      os << "differential in degree " << n << " has shape " << m.rows() << "x" << m.cols()
         << ", expected " << dim(n - 1) << "x" << dim(n);
      throw std::invalid_argument(os.str());
    }
    d_[n] = m;
  }
  for (int n = 2; n < len; ++n)
    if (!(d_[n - 1] * d_[n]).is_zero())
      throw std::invalid_argument("d o d != 0 in degree " + std::to_string(n));
}

Matrix ChainComplex::d(int n) const {
  if (n >= 0 && n < length()) return d_[n];
  return Matrix(f_, dim(n - 1), dim(n));
}

std::size_t ChainComplex::total_dim() const {
  std::size_t s = 0;
  for (auto x : dims_) s += x;
  return s;
}

bool ChainComplex::operator==(const ChainComplex& o) const {
  if (dims_ != o.dims_) return false;
  for (int n = 1; n < length(); ++n)
    if (!(d_[n] == o.d_[n])) return false;
  return true;
}

std::string chain_map_defect(const ChainComplex& s, const ChainComplex& t,
                             const std::vector<Matrix>& f) {
  const int len = std::max(s.length(), t.length());
  auto comp = [&](int n) {
    if (n >= 0 && n < static_cast<int>(f.size())) return f[n];
    return Matrix(s.field(), t.dim(n), s.dim(n));
  };
  for (int n = 0; n < len; ++n) {
    Matrix fn = comp(n);
    if (fn.rows() != t.dim(n) || fn.cols() != s.dim(n)) {
      std::ostringstream os;
      os << "component in degree " << n << " has shape " << fn.rows() << "x" << fn.cols()
         << ", expected " << t.dim(n) << "x" << s.dim(n);
      return os.str();
    }
  }
  for (int n = 1; n <= len; ++n) {
    if (!(comp(n - 1) * s.d(n) == t.d(n) * comp(n)))
      return "not a chain map in degree " + std::to_string(n);
  }
  return {};
}

ChainMap::ChainMap(ChainComplex s, ChainComplex t, std::vector<Matrix> comps)
    : src(std::move(s)), tgt(std::move(t)) {
  const int len = std::max(src.length(), tgt.length());
  f.assign(len, Matrix());
  for (int n = 0; n < len; ++n)
    f[n] = n < static_cast<int>(comps.size()) ? comps[n] : Matrix(src.field(), tgt.dim(n), src.dim(n));
  for (int n = len; n < static_cast<int>(comps.size()); ++n)
    if (comps[n].rows() * comps[n].cols() != 0)
      throw std::invalid_argument("chain map component outside support in degree " +
                                  std::to_string(n));
  std::string err = chain_map_defect(src, tgt, f);
  if (!err.empty()) throw std::invalid_argument(err);
}

Matrix ChainMap::at(int n) const {
  if (n >= 0 && n < static_cast<int>(f.size())) return f[n];
  return Matrix(src.field(), tgt.dim(n), src.dim(n));
}

ChainMap ChainMap::identity(const ChainComplex& c) {
  std::vector<Matrix> comps;
  for (int n = 0; n < c.length(); ++n) comps.push_back(Matrix::identity(c.field(), c.dim(n)));
  return ChainMap(c, c, comps);
}

ChainMap ChainMap::zero(const ChainComplex& s, const ChainComplex& t) { return ChainMap(s, t, {}); }

ChainMap ChainMap::then(const ChainMap& g) const {
  if (!(tgt == g.src)) throw std::invalid_argument("chain map composition: complexes differ");
  std::vector<Matrix> comps;
  const int len = std::max(src.length(), g.tgt.length());
  for (int n = 0; n < len; ++n) comps.push_back(g.at(n) * at(n));
  return ChainMap(src, g.tgt, comps);
}

bool ChainMap::operator==(const ChainMap& o) const {
  if (!(src == o.src) || !(tgt == o.tgt)) return false;
  const int len = std::max(src.length(), tgt.length());
  for (int n = 0; n < len; ++n)
    if (!(at(n) == o.at(n))) return false;
  return true;
}

// ---- graded maps ----

Matrix GradedMap::at(int shift, int n) const {
  auto it = comp.find(shift);
  if (it != comp.end()) {
    auto jt = it->second.find(n);
    if (jt != it->second.end()) return jt->second;
  }
  return Matrix(field, tgt.dim(n + shift), src.dim(n));
}

void GradedMap::set(int shift, int n, const Matrix& m) {
  if (shift < 0) throw std::invalid_argument("graded map shift must be non-negative");
  if (m.rows() != tgt.dim(n + shift) || m.cols() != src.dim(n))
    throw std::invalid_argument("graded map component has wrong shape at degree " +
                                std::to_string(n) + " shift " + std::to_string(shift));
  if (m.is_zero()) {
    auto it = comp.find(shift);
    if (it != comp.end()) {
      it->second.erase(n);
      if (it->second.empty()) comp.erase(it);
    }
    return;
  }
  comp[shift][n] = m;
}

GradedMap GradedMap::then(const GradedMap& g) const {
  if (!(tgt == g.src)) throw std::invalid_argument("graded map composition: objects differ");
  GradedMap out{field, src, g.tgt, {}};
  std::map<std::pair<int, int>, Matrix> acc;
  for (const auto& [s1, m1] : comp)
    for (const auto& [n, a] : m1)
      for (const auto& [s2, m2] : g.comp) {
        auto it = m2.find(n + s1);
        if (it == m2.end()) continue;
        Matrix prod = it->second * a;
        auto key = std::make_pair(s1 + s2, n);
        auto jt = acc.find(key);
        if (jt == acc.end())
          acc.emplace(key, prod);
        else
          jt->second = jt->second + prod;
      }
  for (auto& [key, m] : acc) out.set(key.first, key.second, m);
  return out;
}

GradedMap GradedMap::operator+(const GradedMap& o) const {
  GradedMap out = *this;
  for (const auto& [s, m] : o.comp)
    for (const auto& [n, a] : m) out.set(s, n, out.at(s, n) + a);
  return out;
}

bool GradedMap::is_zero() const { return comp.empty(); }

bool GradedMap::operator==(const GradedMap& o) const {
  return src == o.src && tgt == o.tgt && comp == o.comp;
}

GradedMap GradedMap::zero(Field f, const GradedVS& s, const GradedVS& t) { return {f, s, t, {}}; }

GradedMap GradedMap::identity(Field f, const GradedVS& s) {
  GradedMap g{f, s, s, {}};
  for (int n = 0; n < static_cast<int>(s.dims.size()); ++n)
    if (s.dims[n]) g.set(0, n, Matrix::identity(f, s.dims[n]));
  return g;
}

// ---- homology ----

Homology homology(const ChainComplex& c, int k) {
  Homology h;
  const Field& f = c.field();
  h.cycles = kernel(c.d(k));
  h.boundaries = image(c.d(k + 1));
  h.reps = quotient_basis(h.boundaries, h.cycles);
  h.dim = h.reps.cols();
  Matrix full = h.reps.hcat(h.boundaries.basis()).hcat(complement(h.cycles).basis());
  if (full.cols() != c.dim(k)) throw std::logic_error("homology: basis assembly failed");
  if (c.dim(k) == 0) {
    h.project = Matrix(f, 0, 0);
    return h;
  }
  h.project = inverse(full).block(0, 0, h.dim, c.dim(k));
  return h;
}

std::vector<std::size_t> betti(const ChainComplex& c) {
  std::vector<std::size_t> b;
  for (int n = 0; n < c.length(); ++n) b.push_back(homology(c, n).dim);
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

Matrix induced(const Homology& hs, const Homology& ht, const Matrix& fk) {
  return ht.project * (fk * hs.reps);
}

Matrix induced(const ChainMap& f, int k) {
  return induced(homology(f.src, k), homology(f.tgt, k), f.at(k));
}

bool is_quasi_iso(const ChainMap& f, int max_degree) {
  const int len = std::max(f.src.length(), f.tgt.length());
  const int top = max_degree < 0 ? len : std::min(len, max_degree + 1);
  for (int n = 0; n < top; ++n) {
    Matrix m = induced(f, n);
    if (m.rows() != m.cols() || rank(m) != m.rows()) return false;
  }
  return true;
}

// ---- basic complexes ----

ChainComplex sphere(Field f, std::size_t dimV, int n) {
  std::vector<std::size_t> dims(n + 1, 0);
  dims[n] = dimV;
  return ChainComplex(f, dims, {});
}

ChainComplex disk(Field f, std::size_t dimV, int m) {
  std::vector<std::size_t> dims(m + 2, 0);
  dims[m] = dims[m + 1] = dimV;
  std::vector<Matrix> d(m + 2, Matrix());
  for (int n = 1; n < m + 2; ++n) d[n] = Matrix(f, dims[n - 1], dims[n]);
  d[m + 1] = Matrix::identity(f, dimV);
  return ChainComplex(f, dims, d);
}

ChainComplex cone(const ChainMap& fm) {
  const ChainComplex& s = fm.src;
  const ChainComplex& t = fm.tgt;
  const Field& F = s.field();
  const int len = std::max(t.length(), s.length() + 1);
  std::vector<std::size_t> dims(len);
  for (int n = 0; n < len; ++n) dims[n] = t.dim(n) + s.dim(n - 1);
  std::vector<Matrix> d(len, Matrix());
  for (int n = 1; n < len; ++n) {
    Matrix m(F, dims[n - 1], dims[n]);
    m.put(0, 0, t.d(n));
    m.put(0, t.dim(n), fm.at(n - 1));
    m.put(t.dim(n - 1), t.dim(n), -s.d(n - 1));
    d[n] = m;
  }
  return ChainComplex(F, dims, d);
}

ChainMap cone_inclusion(const ChainMap& fm) {
  ChainComplex c = cone(fm);
  std::vector<Matrix> comps;
  for (int n = 0; n < c.length(); ++n) {
    Matrix m(c.field(), c.dim(n), fm.tgt.dim(n));
    m.put(0, 0, Matrix::identity(c.field(), fm.tgt.dim(n)));
    comps.push_back(m);
  }
  return ChainMap(fm.tgt, c, comps);
}

ChainComplex suspend(const ChainComplex& c, int k) {
  ChainComplex out = c;
  for (int i = 0; i < k; ++i) out = cone(ChainMap::zero(out, ChainComplex(c.field())));
  return out;
}

ChainComplex reduced_suspend(const ChainComplex& c, int k) {
  std::vector<std::size_t> dims(k, 0);
  dims.insert(dims.end(), c.dims().begin(), c.dims().end());
  std::vector<Matrix> d(dims.size(), Matrix());
  for (int n = 1; n < static_cast<int>(dims.size()); ++n) d[n] = c.d(n - k);
  return ChainComplex(c.field(), dims, d);
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  const int len = std::max(a.length(), b.length());
  std::vector<std::size_t> dims(len);
  std::vector<Matrix> d(len, Matrix());
  for (int n = 0; n < len; ++n) dims[n] = a.dim(n) + b.dim(n);
  for (int n = 1; n < len; ++n) d[n] = Matrix::block_diag(a.d(n), b.d(n));
  return ChainComplex(a.field(), dims, d);
}

// ---- truncation and covers ----

Truncation truncate(const ChainComplex& c, int k) {
  const Field& F = c.field();
  std::vector<std::size_t> dims;
  std::vector<Matrix> d;
  for (int n = 0; n < k; ++n) dims.push_back(c.dim(n));
  Subspace B = image(c.d(k + 1));
  Matrix Q = complement(B).basis();
  dims.push_back(Q.cols());
  d.assign(k + 1, Matrix());
  for (int n = 1; n < k; ++n) d[n] = c.d(n);
  if (k >= 1) d[k] = c.d(k) * Q;
  ChainComplex t(F, dims, d);
  std::vector<Matrix> comps;
  for (int n = 0; n < k; ++n) comps.push_back(Matrix::identity(F, c.dim(n)));
  if (c.dim(k) > 0) {
    Matrix full = Q.hcat(B.basis());
    comps.push_back(inverse(full).block(0, 0, Q.cols(), c.dim(k)));
  } else {
    comps.push_back(Matrix(F, 0, 0));
  }
  ChainMap p(c, t, comps);
  return {t, p};
}

Truncation conn_cover(const ChainComplex& c, int k) {
  const Field& F = c.field();
  Subspace Z = kernel(c.d(k));
  std::vector<std::size_t> dims(std::max(c.length(), k + 1), 0);
  for (int n = k + 1; n < c.length(); ++n) dims[n] = c.dim(n);
  dims[k] = Z.dim();
  std::vector<Matrix> d(dims.size(), Matrix());
  for (int n = 1; n < static_cast<int>(dims.size()); ++n) {
    if (n <= k)
      d[n] = Matrix(F, dims[n - 1], dims[n]);
    else if (n == k + 1)
      d[n] = c.d(n).select_rows(Z.pivots());
    else
      d[n] = c.d(n);
  }
  ChainComplex cov(F, dims, d);
  std::vector<Matrix> comps;
  for (int n = 0; n < static_cast<int>(dims.size()); ++n) {
    if (n < k)
      comps.push_back(Matrix(F, c.dim(n), 0));
    else if (n == k)
      comps.push_back(Z.basis());
    else
      comps.push_back(Matrix::identity(F, c.dim(n)));
  }
  return {cov, ChainMap(cov, c, comps)};
}

// ---- sphere/disk splitting ----

Splitting split_spheres_disks(const ChainComplex& c) {
  Splitting out;
  const Field& F = c.field();
  const int len = c.length();
  std::vector<Matrix> tops(len + 1), hreps(len);
  for (int n = 0; n <= len; ++n) tops[n] = complement(kernel(c.d(n))).basis();
  for (int n = 0; n < len; ++n) {
    Homology h = homology(c, n);
    hreps[n] = h.reps;
    Matrix bottoms = c.d(n + 1) * (n + 1 <= len ? tops[n + 1] : Matrix(F, c.dim(n + 1), 0));
    out.basis.push_back(tops[n].hcat(bottoms).hcat(h.reps));
    if (bottoms.cols()) out.summands.push_back({SummandKind::Disk, bottoms.cols(), n});
    if (h.dim) out.summands.push_back({SummandKind::Sphere, h.dim, n});
  }
  // Verify: each basis is invertible and d is in standard block form.
  bool ok = true;
  for (int n = 0; n < len && ok; ++n) {
    const Matrix& P = out.basis[n];
    if (P.rows() != P.cols() || rank(P) != P.rows()) ok = false;
  }
  for (int n = 1; n < len && ok; ++n) {
    Matrix dn = inverse(out.basis[n - 1]) * c.d(n) * out.basis[n];
    const std::size_t t_n = tops[n].cols();
    const std::size_t t_m = tops[n - 1].cols();
    Matrix expect(F, c.dim(n - 1), c.dim(n));
    for (std::size_t i = 0; i < t_n; ++i) expect.at(t_m + i, i) = 1;
    if (!(dn == expect)) ok = false;
  }
  out.verified = ok;
  return out;
}

// ---- fibers ----

Fiber fiber(const ChainMap& fm) {
  const ChainComplex& s = fm.src;
  const ChainComplex& t = fm.tgt;
  const Field& F = s.field();
  const int len = std::max(s.length(), t.length() - 1);
  // Raw degree n: s_n + t_{n+1}; raw differential d(s, t) = (ds, fs - dt).
  auto raw_d = [&](int n) {
    Matrix m(F, s.dim(n - 1) + t.dim(n), s.dim(n) + t.dim(n + 1));
    m.put(0, 0, s.d(n));
    m.put(s.dim(n - 1), 0, fm.at(n));
    m.put(s.dim(n - 1), s.dim(n), -t.d(n + 1));
    return m;
  };
  Matrix e0(F, t.dim(0), s.dim(0) + t.dim(1));
  e0.put(0, 0, fm.at(0));
  e0.put(0, s.dim(0), -t.d(1));
  Subspace K0 = kernel(e0);
  Matrix inc0 = K0.basis();

  std::vector<std::size_t> dims(std::max(len, 1));
  for (int n = 0; n < static_cast<int>(dims.size()); ++n)
    dims[n] = n == 0 ? K0.dim() : s.dim(n) + t.dim(n + 1);
  std::vector<Matrix> d(dims.size(), Matrix());
  for (int n = 1; n < static_cast<int>(dims.size()); ++n) {
    Matrix m = raw_d(n);
    if (n == 1) m = m.select_rows(K0.pivots());
    d[n] = m;
  }
  ChainComplex fib(F, dims, d);

  std::vector<Matrix> to_s;
  for (int n = 0; n < fib.length(); ++n) {
    Matrix pr(F, s.dim(n), s.dim(n) + t.dim(n + 1));
    pr.put(0, 0, Matrix::identity(F, s.dim(n)));
    to_s.push_back(n == 0 ? pr * inc0 : pr);
  }
  ChainComplex om = loop(t);
  std::vector<Matrix> from_l;
  Subspace Z1 = kernel(t.d(1));
  for (int n = 0; n < std::max(om.length(), fib.length()); ++n) {
    Matrix in(F, s.dim(n) + t.dim(n + 1), t.dim(n + 1));
    in.put(s.dim(n), 0, Matrix::identity(F, t.dim(n + 1)));
    if (n == 0) {
      // Omega_0 = Z_1(t) sits inside the kernel at degree 0.
      Matrix cols = in * Z1.basis();
      Matrix coords(F, fib.dim(0), om.dim(0));
      for (std::size_t j = 0; j < cols.cols(); ++j) coords.set_col(j, K0.coords(cols.col(j)));
      from_l.push_back(coords);
    } else {
      from_l.push_back(in);
    }
  }
  return {fib, ChainMap(fib, s, to_s), ChainMap(om, fib, from_l), inc0};
}

ChainComplex loop(const ChainComplex& c) {
  // Omega c: degree n holds c_{n+1} with differential -d, degree 0 cut to Z_1.
  const Field& F = c.field();
  Subspace Z1 = kernel(c.d(1));
  std::vector<std::size_t> dims;
  for (int n = 0; n + 1 < c.length(); ++n) dims.push_back(n == 0 ? Z1.dim() : c.dim(n + 1));
  std::vector<Matrix> d(dims.size(), Matrix());
  for (int n = 1; n < static_cast<int>(dims.size()); ++n) {
    Matrix m = -c.d(n + 1);
    if (n == 1) m = m.select_rows(Z1.pivots());
    d[n] = m;
  }
  return ChainComplex(F, dims, d);
}

}  // namespace hd
