#include "hodiag/specseq.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

#include "hodiag/generators.hpp"

namespace hd {

namespace {

elem sign(const Field& f, int e) { return e % 2 == 0 ? 1 : f.neg(1); }

std::string at(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

int max_q(const DoubleComplex& dc) {
  int m = 0;
  for (auto& c : dc.columns) m = std::max(m, c.length());
  return m;
}

Homology col_h(const DoubleComplex& dc, int p, int q) {
  if (p < 0 || p >= dc.width() || q < 0) return homology(ChainComplex(dc.field), 0);
  return homology(dc.columns[p], q);
}

// Vector of class coordinates for a chain in C_{p,q} (zero-dimensional outside).
Matrix classes_of(const DoubleComplex& dc, int p, int q, const Matrix& chains) {
  Homology h = col_h(dc, p, q);
  if (h.dim == 0) return Matrix(dc.field, 0, chains.cols());
  return h.project * chains;
}

// Unknowns x_i in C_{p-i, q+i} for i < s. Rows: v x_0 = 0 and
// h x_{i-1} + (-1)^{p-i} v x_i = 0 for 1 <= i < s.
struct Staircase {
  int p, q, s;
  Matrix a;
  std::vector<std::size_t> off;  // unknown offsets, size s + 1
  Matrix value;                  // h x_{s-1} in C_{p-s, q+s-1}, as a map on all unknowns
};

Staircase staircase(const DoubleComplex& dc, int p, int q, int s) {
  const Field& f = dc.field;
  Staircase st{p, q, s, {}, {0}, {}};
  for (int i = 0; i < s; ++i) st.off.push_back(st.off.back() + dc.dim(p - i, q + i));
  std::vector<std::size_t> roff{0};
  for (int i = 0; i < s; ++i) roff.push_back(roff.back() + dc.dim(p - i, q + i - 1));
  st.a = Matrix(f, roff.back(), st.off.back());
  if (s > 0) st.a.put(0, 0, dc.v(p, q));
  for (int i = 1; i < s; ++i) {
    st.a.put(roff[i], st.off[i - 1], dc.h(p - i + 1, q + i - 1));
    st.a.put(roff[i], st.off[i], dc.v(p - i, q + i).scaled(sign(f, p - i)));
  }
  st.value = Matrix(f, dc.dim(p - s, q + s - 1), st.off.back());
  if (s > 0) st.value.put(0, st.off[s - 1], dc.h(p - s + 1, q + s - 1));
  return st;
}

// Column filtration data of a complex: F[n][p + 1] for p = -1..P-1.
struct Filtration {
  ChainComplex tot;
  int stages = 0;
  std::vector<std::vector<Subspace>> F;

  const Subspace& at(int n, int p) const {
    p = std::clamp(p, -1, stages - 1);
    return F[n][p + 1];
  }
  int top() const { return tot.length(); }
  Matrix D(int n) const {
    if (n <= 0 || n >= tot.length()) return Matrix(tot.field(), tot.dim(n - 1), tot.dim(n));
    return tot.d(n);
  }
  // Z^r_p in degree n.
  Subspace z(int n, int p, int r) const {
    if (n < 0 || n >= top()) return Subspace(tot.field(), tot.dim(n));
    if (n == 0) return at(0, p);
    return intersect(at(n, p), preimage(D(n), at(n - 1, p - r)));
  }
  Subspace den(int n, int p, int r) const {
    Subspace a = z(n, p - 1, r - 1);
    if (n + 1 < top()) a = sum(a, map_subspace(D(n + 1), z(n + 1, p + r - 1, r - 1)));
    return a;
  }
};

Filtration filtration_of(const DoubleComplex& dc) {
  TotalComplex t = total(dc);
  Filtration fl{t.complex, dc.width(), {}};
  const Field& f = dc.field;
  for (int n = 0; n < t.complex.length(); ++n) {
    std::vector<Subspace> row{Subspace(f, t.complex.dim(n))};
    for (int p = 0; p < dc.width(); ++p) {
      Matrix gens(f, t.complex.dim(n), t.offset[n][p + 1]);
      for (std::size_t i = 0; i < t.offset[n][p + 1]; ++i) gens.at(i, i) = 1;
      row.push_back(Subspace::span(gens));
    }
    fl.F.push_back(row);
  }
  return fl;
}

Filtration filtration_of(const FilteredComplex& fc) {
  if (auto e = validate(fc); !e.empty()) throw std::invalid_argument(e);
  const Field& f = fc.field;
  const int P = static_cast<int>(fc.stages.size());
  Filtration fl{fc.stages.back(), P, {}};
  for (int n = 0; n < fl.tot.length(); ++n) {
    std::vector<Subspace> row{Subspace(f, fl.tot.dim(n))};
    for (int p = 0; p < P; ++p) {
      Matrix m = Matrix::identity(f, fc.stages[p].dim(n));
      for (int s = p; s + 1 < P; ++s) {
        const Comps& c = fc.inclusions[s];
        m = (n < static_cast<int>(c.size()) ? c[n] : Matrix(f, fc.stages[s + 1].dim(n), fc.stages[s].dim(n))) * m;
      }
      row.push_back(Subspace::span(m));
    }
    fl.F.push_back(row);
  }
  return fl;
}

std::vector<SSPage> pages_of(const Filtration& fl, int r_max) {
  std::vector<SSPage> out;
  for (int r = 1; r <= r_max; ++r) {
    SSPage pg;
    pg.r = r;
    for (int n = 0; n < fl.top(); ++n)
      for (int p = 0; p < fl.stages; ++p) {
        Subspace num = fl.z(n, p, r), den = fl.den(n, p, r);
        const std::size_t d = num.dim() - den.dim();
        if (d == 0) continue;
        pg.dim[{p, n - p}] = d;
        if (n == 0) continue;
        Subspace tden = fl.den(n - 1, p - r, r);
        Matrix img = fl.D(n) * quotient_basis(den, num);
        const std::size_t rk = sum(tden, Subspace::span(img)).dim() - tden.dim();
        if (rk > 0) pg.d_rank[{p, n - p}] = rk;
      }
    out.push_back(pg);
  }
  return out;
}

std::map<std::pair<int, int>, std::size_t> graded_of(const Filtration& fl) {
  std::map<std::pair<int, int>, std::size_t> g;
  for (int n = 0; n < fl.top(); ++n) {
    Subspace Z = kernel(fl.D(n));
    Subspace B = n + 1 < fl.top() ? image(fl.D(n + 1)) : Subspace(fl.tot.field(), fl.tot.dim(n));
    std::size_t prev = 0;
    for (int p = 0; p < fl.stages; ++p) {
      const std::size_t cur = sum(intersect(Z, fl.at(n, p)), B).dim() - B.dim();
      if (cur > prev) g[{p, n - p}] = cur - prev;
      prev = cur;
    }
  }
  return g;
}

std::string describe(const std::map<std::pair<int, int>, std::size_t>& m) {
  std::string s = "{";
  for (auto& [k, v] : m) s += " " + at(k.first, k.second) + ":" + std::to_string(v);
  return s + " }";
}

Comps zero_comps(const ChainComplex& s, const ChainComplex& t) {
  Comps c;
  for (int n = 0; n < std::max(s.length(), t.length()); ++n) c.push_back(Matrix(s.field(), t.dim(n), s.dim(n)));
  return c;
}

Matrix comp_at(const Comps& c, const ChainComplex& s, const ChainComplex& t, int n) {
  if (n >= 0 && n < static_cast<int>(c.size())) return c[n];
  return Matrix(s.field(), t.dim(n), s.dim(n));
}

}  // namespace

std::size_t DoubleComplex::dim(int p, int q) const {
  if (p < 0 || p >= width()) return 0;
  return columns[p].dim(q);
}

Matrix DoubleComplex::h(int p, int q) const {
  if (p <= 0 || p >= width() || q < 0 || q >= static_cast<int>(horizontal[p].size()))
    return Matrix(field, dim(p - 1, q), dim(p, q));
  return horizontal[p][q];
}

Matrix DoubleComplex::v(int p, int q) const {
  if (p < 0 || p >= width() || q <= 0 || q >= columns[p].length()) return Matrix(field, dim(p, q - 1), dim(p, q));
  return columns[p].d(q);
}

std::string validate(const DoubleComplex& dc) {
  if (dc.horizontal.size() != dc.columns.size()) return "horizontal map count differs from column count";
  for (int p = 1; p < dc.width(); ++p) {
    const int len = std::max(dc.columns[p].length(), dc.columns[p - 1].length());
    for (int q = 0; q < len; ++q) {
      Matrix m = dc.h(p, q);
      if (m.rows() != dc.dim(p - 1, q) || m.cols() != dc.dim(p, q))
        return "horizontal map " + std::to_string(p) + " has wrong shape in degree " + std::to_string(q);
    }
    for (int q = static_cast<int>(dc.horizontal[p].size()); q-- > len;)
      if (!dc.horizontal[p][q].is_zero()) return "horizontal map " + std::to_string(p) + " outside support";
    if (auto e = chain_map_defect(dc.columns[p], dc.columns[p - 1], dc.horizontal[p]); !e.empty())
      return "horizontal map " + std::to_string(p) + ": " + e;
    if (p >= 2)
      for (int q = 0; q < len; ++q)
        if (!(dc.h(p - 1, q) * dc.h(p, q)).is_zero())
          return "horizontal composite " + std::to_string(p) + " then " + std::to_string(p - 1) +
                 " is nonzero in degree " + std::to_string(q);
  }
  return "";
}

DoubleComplex random_double_complex(const Field& f, int columns, int max_deg, std::size_t max_dim, Rng& rng) {
  DoubleComplex dc{f, {}, {}};
  for (int p = 0; p < columns; ++p) {
    ChainComplex c = random_complex(f, max_deg, max_dim, rng);
    Comps h;
    if (p > 0) {
      // A random chain map into the kernel of the previous horizontal map.
      const ChainComplex& prev = dc.columns[p - 1];
      std::vector<Subspace> K;
      for (int q = 0; q < prev.length(); ++q)
        K.push_back(p == 1 ? Subspace::full(f, prev.dim(q)) : kernel(dc.h(p - 1, q)));
      std::vector<std::size_t> kd;
      std::vector<Matrix> kdiff{Matrix()};
      for (auto& s : K) kd.push_back(s.dim());
      for (int q = 1; q < prev.length(); ++q) {
        Matrix img = prev.d(q) * K[q].basis();
        Matrix co(f, K[q - 1].dim(), K[q].dim());
        for (std::size_t j = 0; j < img.cols(); ++j) co.set_col(j, K[q - 1].coords(img.col(j)));
        kdiff.push_back(co);
      }
      ChainComplex kc(f, kd, kdiff);
      ChainMap g = random_chain_map(c, kc, rng);
      for (int q = 0; q < std::max(c.length(), prev.length()); ++q)
        h.push_back(q < prev.length() ? K[q].basis() * g.at(q) : Matrix(f, 0, c.dim(q)));
    }
    dc.columns.push_back(c);
    dc.horizontal.push_back(h);
  }
  return dc;
}

TotalComplex total(const DoubleComplex& dc) {
  const Field& f = dc.field;
  const int N = dc.width();
  int top = 0;
  for (int p = 0; p < N; ++p)
    if (dc.columns[p].length() > 0) top = std::max(top, p + dc.columns[p].length());
  TotalComplex t;
  std::vector<std::size_t> dims;
  for (int n = 0; n < top; ++n) {
    std::vector<std::size_t> off{0};
    for (int p = 0; p < N; ++p) off.push_back(off.back() + dc.dim(p, n - p));
    dims.push_back(off.back());
    t.offset.push_back(off);
  }
  std::vector<Matrix> d(top, Matrix());
  for (int n = 1; n < top; ++n) {
    Matrix m(f, dims[n - 1], dims[n]);
    for (int p = 0; p < N; ++p) {
      const int q = n - p;
      if (q < 0) continue;
      if (q >= 1) m.put(t.offset[n - 1][p], t.offset[n][p], dc.v(p, q).scaled(sign(f, p)));
      if (p >= 1) m.put(t.offset[n - 1][p - 1], t.offset[n][p], dc.h(p, q));
    }
    d[n] = m;
  }
  t.complex = ChainComplex(f, dims, d);
  return t;
}

std::string validate(const FilteredComplex& fc) {
  if (fc.stages.empty()) return "filtration has no stages";
  if (fc.inclusions.size() + 1 != fc.stages.size()) return "inclusion count must be one less than stage count";
  for (std::size_t s = 0; s + 1 < fc.stages.size(); ++s) {
    const ChainComplex &a = fc.stages[s], &b = fc.stages[s + 1];
    for (int n = 0; n < std::max(a.length(), b.length()); ++n) {
      Matrix m = comp_at(fc.inclusions[s], a, b, n);
      if (m.rows() != b.dim(n) || m.cols() != a.dim(n))
        return "inclusion " + std::to_string(s) + " has wrong shape in degree " + std::to_string(n);
      if (rank(m) != a.dim(n))
        return "inclusion " + std::to_string(s) + " is not injective in degree " + std::to_string(n);
    }
    if (auto e = chain_map_defect(a, b, fc.inclusions[s]); !e.empty()) return "inclusion " + std::to_string(s) + ": " + e;
  }
  return "";
}

FilteredComplex column_filtration(const DoubleComplex& dc) {
  FilteredComplex fc{dc.field, {}, {}};
  for (int p = 0; p < dc.width(); ++p) {
    DoubleComplex part{dc.field, {dc.columns.begin(), dc.columns.begin() + p + 1},
                       {dc.horizontal.begin(), dc.horizontal.begin() + p + 1}};
    fc.stages.push_back(total(part).complex);
  }
  // Columns are appended last in each degree, so the inclusion is the leading block.
  for (int p = 0; p + 1 < dc.width(); ++p) {
    const ChainComplex &a = fc.stages[p], &b = fc.stages[p + 1];
    Comps c;
    for (int n = 0; n < std::max(a.length(), b.length()); ++n) {
      Matrix m(dc.field, b.dim(n), a.dim(n));
      for (std::size_t i = 0; i < a.dim(n); ++i) m.at(i, i) = 1;
      c.push_back(m);
    }
    fc.inclusions.push_back(c);
  }
  return fc;
}

std::size_t SSPage::total() const {
  std::size_t s = 0;
  for (auto& [k, v] : dim) s += v;
  return s;
}

std::vector<SSPage> classical_pages(const DoubleComplex& dc, int r_max) { return pages_of(filtration_of(dc), r_max); }
std::vector<SSPage> classical_pages(const FilteredComplex& fc, int r_max) { return pages_of(filtration_of(fc), r_max); }

std::map<std::pair<int, int>, std::size_t> graded_homology(const DoubleComplex& dc) {
  return graded_of(filtration_of(dc));
}
std::map<std::pair<int, int>, std::size_t> graded_homology(const FilteredComplex& fc) {
  return graded_of(filtration_of(fc));
}

Subspace chase_cycles(const DoubleComplex& dc, int r, int p, int q) {
  Homology h = col_h(dc, p, q);
  if (r <= 1 || h.dim == 0) return Subspace::full(dc.field, h.dim);
  Staircase st = staircase(dc, p, q, r);
  Matrix sol = kernel(st.a).basis();
  return Subspace::span(h.project * sol.block(0, 0, dc.dim(p, q), sol.cols()));
}

Subspace chase_boundaries(const DoubleComplex& dc, int r, int p, int q) {
  Homology h = col_h(dc, p, q);
  if (r <= 1 || h.dim == 0) return Subspace(dc.field, h.dim);
  Staircase st = staircase(dc, p + r - 1, q - r + 2, r - 1);
  return Subspace::span(h.project * st.value * kernel(st.a).basis());
}

Relation chase_d(const DoubleComplex& dc, int r, int p, int q, const Matrix& classes) {
  if (r < 1) throw std::invalid_argument("chase_d: page must be at least 1");
  const Field& f = dc.field;
  Homology hs = col_h(dc, p, q);
  if (classes.rows() != hs.dim) throw std::invalid_argument("chase_d: class vectors have the wrong length");
  Relation rel;
  rel.r = r;
  rel.p = p;
  rel.q = q;
  rel.classes = classes;
  const int tp = p - r, tq = q + r - 1;
  const std::size_t tdim = col_h(dc, tp, tq).dim;
  rel.value = Matrix(f, tdim, classes.cols());
  rel.indeterminacy = chase_boundaries(dc, r, tp, tq);

  // Append w in C_{p,q+1} with x_0 - v w = rep fixing the class of x_0.
  Staircase st = staircase(dc, p, q, r);
  const std::size_t nx = st.off.back(), nw = dc.dim(p, q + 1), n0 = dc.dim(p, q);
  Matrix a(f, st.a.rows() + n0, nx + nw);
  a.put(0, 0, st.a);
  a.put(st.a.rows(), 0, Matrix::identity(f, n0));
  a.put(st.a.rows(), nx, -dc.v(p, q + 1));
  Matrix val = st.value.hcat(Matrix(f, st.value.rows(), nw));
  for (std::size_t j = 0; j < classes.cols(); ++j) {
    Vec rhs(a.rows(), 0);
    Vec rep = hs.reps.apply(classes.col(j));
    std::copy(rep.begin(), rep.end(), rhs.begin() + st.a.rows());
    auto y = solve(a, rhs);
    if (!y)
      throw std::invalid_argument("chase_d: class " + std::to_string(j) + " at " + at(p, q) +
                                  " does not survive to page " + std::to_string(r));
    std::vector<Vec> wit;
    for (int i = 0; i < r; ++i) wit.emplace_back(y->begin() + st.off[i], y->begin() + st.off[i + 1]);
    rel.witness.push_back(wit);
    if (tdim > 0) rel.value.set_col(j, col_h(dc, tp, tq).project.apply(val.apply(*y)));
  }
  return rel;
}

Relation chase_d(const DoubleComplex& dc, int r, int p, int q) {
  return chase_d(dc, r, p, q, quotient_basis(chase_boundaries(dc, r, p, q), chase_cycles(dc, r, p, q)));
}

std::vector<SSPage> chase_pages(const DoubleComplex& dc, int r_max) {
  std::vector<SSPage> out;
  const int top = max_q(dc);
  for (int r = 1; r <= r_max; ++r) {
    SSPage pg;
    pg.r = r;
    for (int p = 0; p < dc.width(); ++p)
      for (int q = 0; q < top; ++q) {
        Subspace Z = chase_cycles(dc, r, p, q), B = chase_boundaries(dc, r, p, q);
        if (Z.dim() == B.dim()) continue;
        pg.dim[{p, q}] = Z.dim() - B.dim();
        Relation rel = chase_d(dc, r, p, q);
        const std::size_t rk = sum(rel.indeterminacy, Subspace::span(rel.value)).dim() - rel.indeterminacy.dim();
        if (rk > 0) pg.d_rank[{p, q}] = rk;
        if (rel.indeterminacy.dim() > 0) pg.indeterminacy[{p, q}] = rel.indeterminacy.dim();
      }
    out.push_back(pg);
  }
  return out;
}

CrossCheck cross_check(const DoubleComplex& dc, int r_max) {
  CrossCheck cc;
  auto fail = [&](const std::string& s) { cc.failures.push_back(s); };
  if (auto e = validate(dc); !e.empty()) {
    fail("invalid double complex: " + e);
    return cc;
  }
  const int r_inf = std::max(r_max, dc.width()) + 1;
  TotalComplex tot = total(dc);
  Filtration fl = filtration_of(dc);
  std::vector<SSPage> classical = pages_of(fl, r_inf), chased = chase_pages(dc, r_inf);

  for (int r = 1; r <= r_max; ++r) {
    const SSPage &a = classical[r - 1], &b = chased[r - 1];
    ++cc.checks;
    if (a.dim != b.dim)
      fail("E^" + std::to_string(r) + " dimensions: classical " + describe(a.dim) + " chase " + describe(b.dim));
    ++cc.checks;
    if (a.d_rank != b.d_rank)
      fail("d^" + std::to_string(r) + " ranks: classical " + describe(a.d_rank) + " chase " + describe(b.d_rank));

    for (int n = 0; n < fl.top(); ++n)
      for (int p = 0; p < dc.width(); ++p) {
        const int q = n - p;
        Subspace num = fl.z(n, p, r), den = fl.den(n, p, r);
        if (num.dim() == den.dim()) continue;
        Matrix xs = quotient_basis(den, num);
        // Leading components: the class in column p and the image in column p - r.
        Matrix lead = classes_of(dc, p, q, xs.block(tot.offset[n][p], 0, dc.dim(p, q), xs.cols()));
        Matrix expect(dc.field, col_h(dc, p - r, q + r - 1).dim, xs.cols());
        if (p - r >= 0 && n >= 1) {
          Matrix dx = fl.D(n) * xs;
          expect = classes_of(dc, p - r, q + r - 1, dx.block(tot.offset[n - 1][p - r], 0, dc.dim(p - r, q + r - 1), xs.cols()));
        }
        ++cc.checks;
        Relation rel;
        try {
          rel = chase_d(dc, r, p, q, lead);
        } catch (const std::invalid_argument& e) {
          fail("d^" + std::to_string(r) + " at " + at(p, q) + ": " + e.what());
          continue;
        }
        for (std::size_t j = 0; j < xs.cols(); ++j)
          if (!rel.indeterminacy.contains(vsub(dc.field, rel.value.col(j), expect.col(j))))
            fail("d^" + std::to_string(r) + " at " + at(p, q) + ": chase and classical values differ on class " +
                 std::to_string(j));

        // d^r d^r = 0 as relations.
        ++cc.checks;
        if (rel.value.rows() == 0) continue;
        try {
          Relation next = chase_d(dc, r, p - r, q + r - 1, rel.value);
          Subspace Bt = chase_boundaries(dc, r, p - 2 * r, q + 2 * r - 2);
          for (std::size_t j = 0; j < next.value.cols(); ++j)
            if (!Bt.contains(next.value.col(j)))
              fail("d^" + std::to_string(r) + " d^" + std::to_string(r) + " nonzero from " + at(p, q));
        } catch (const std::invalid_argument& e) {
          fail("d^" + std::to_string(r) + " value at " + at(p, q) + " does not survive: " + e.what());
        }
      }
  }
  auto gr = graded_of(fl);
  ++cc.checks;
  if (classical.back().dim != gr)
    fail("classical E^inf " + describe(classical.back().dim) + " differs from gr H " + describe(gr));
  ++cc.checks;
  if (chased.back().dim != gr) fail("chase E^inf " + describe(chased.back().dim) + " differs from gr H " + describe(gr));
  return cc;
}

CubeSS double_to_cube(const DoubleComplex& dc, int lo, int hi) {
  if (lo < 0 || hi >= dc.width() || hi <= lo)
    throw std::invalid_argument("double_to_cube: segment [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                "] outside columns 0.." + std::to_string(dc.width() - 1));
  const int n = hi - lo;
  Poset P = cube_poset(n);
  std::vector<ChainComplex> objs;
  for (int m = 0; m < (1 << n); ++m) {
    int i = 0;
    while (i <= n && m != (1 << i) - 1) ++i;
    objs.push_back(i <= n ? dc.columns[lo + i] : ChainComplex(dc.field));
  }
  std::map<std::pair<Obj, Obj>, Comps> maps;
  for (auto [a, b] : P.covers()) {
    const int i = std::popcount(static_cast<unsigned>(a));
    const bool chain = a == static_cast<Obj>((1 << i) - 1) && b == static_cast<Obj>((1 << (i - 1)) - 1);
    Comps c = zero_comps(objs[a], objs[b]);
    if (chain)
      for (int q = 0; q < static_cast<int>(c.size()); ++q) c[q] = dc.h(lo + i, q);
    maps[{a, b}] = c;
  }
  return CubeSS{n, lo, Diagram(P, objs, maps)};
}

ExtendedCube extend_cube(const CubeSS& c) {
  const int n = c.n;
  const Diagram& d = c.diagram;
  const Field& f = d.field();
  ExtendedCube x;
  x.n = n;
  auto vertex = [&](int m) {
    std::vector<int> u(n);
    for (int i = 0; i < n; ++i) u[i] = m >> i & 1;
    return u;
  };
  auto name = [](const std::vector<int>& u) {
    std::string s;
    for (int b : u) s += static_cast<char>('0' + b);
    return s;
  };
  for (int m = 0; m < (1 << n); ++m) {
    x.objects[vertex(m)] = d.at(m);
    for (int i = 0; i < n; ++i)
      if (m >> i & 1) x.maps[{vertex(m), i}] = d.comps(m, m & ~(1 << i));
  }
  auto lower = [](std::vector<int> u, int i) {
    --u[i];
    return u;
  };

  for (int i = 0; i < n; ++i) {
    std::map<std::vector<int>, Fiber> fib;
    for (auto& [u, obj] : x.objects)
      if (u[i] == 1) {
        std::vector<int> t = lower(u, i);
        fib[u] = fiber(ChainMap(obj, x.objects.at(t), x.maps.at({u, i})));
      }
    for (auto& [u, F] : fib) {
      std::vector<int> w = u;
      w[i] = 2;
      x.objects[w] = F.complex;
      x.maps[{w, i}] = F.to_source.f;
    }
    // Fibers of the two rows of a commuting square are joined by (s, t) -> (a s, b t).
    for (auto& [u, F] : fib) {
      std::vector<int> w = u, t = lower(u, i);
      w[i] = 2;
      for (int j = 0; j < n; ++j) {
        if (j == i || u[j] == 0) continue;
        std::vector<int> u2 = lower(u, j), t2 = lower(t, j);
        const Fiber& G = fib.at(u2);
        const ChainComplex &S = x.objects.at(u), &T = x.objects.at(t), &S2 = x.objects.at(u2), &T2 = x.objects.at(t2);
        const Comps &a = x.maps.at({u, j}), &b = x.maps.at({t, j});
        Comps m;
        for (int q = 0; q < std::max(F.complex.length(), G.complex.length()); ++q) {
          Matrix raw(f, S2.dim(q) + T2.dim(q + 1), S.dim(q) + T.dim(q + 1));
          raw.put(0, 0, comp_at(a, S, S2, q));
          raw.put(S2.dim(q), S.dim(q), comp_at(b, T, T2, q + 1));
          if (q == 0) raw = (raw * F.deg0_inclusion).select_rows(Subspace::span(G.deg0_inclusion).pivots());
          m.push_back(raw.block(0, 0, G.complex.dim(q), F.complex.dim(q)));
        }
        std::vector<int> w2 = w;
        --w2[j];
        if (auto e = chain_map_defect(F.complex, G.complex, m); !e.empty())
          x.failures.push_back("fiber map " + name(w) + " -> " + name(w2) + ": " + e);
        x.maps[{w, j}] = m;
      }
    }
    // Long exact sequence of each fiber line.
    for (auto& [u, F] : fib) {
      std::vector<int> t = lower(u, i), w = u;
      w[i] = 2;
      const ChainComplex &S = x.objects.at(u), &T = x.objects.at(t);
      ChainMap fm(S, T, x.maps.at({u, i}));
      const int top = std::max({S.length(), T.length(), F.complex.length()});
      Subspace K0 = Subspace::span(F.deg0_inclusion);
      for (int q = 0; q <= top; ++q) {
        Homology hS = homology(S, q), hT = homology(T, q);
        Matrix a = induced(F.to_source, q), b = induced(fm, q);
        auto bad = [&](const std::string& where) {
          x.failures.push_back("fiber sequence " + name(w) + " -> " + name(u) + " -> " + name(t) + " not exact at " +
                               where + " in degree " + std::to_string(q));
        };
        if (!(b * a).is_zero() || rank(a) + rank(b) != hS.dim) bad("the middle");
        if (q == 0) continue;
        // Connecting map H_q(T) -> H_{q-1}(Fib), t -> (0, t).
        Homology hF1 = homology(F.complex, q - 1);
        Matrix raw(f, S.dim(q - 1) + T.dim(q), hT.dim);
        raw.put(S.dim(q - 1), 0, hT.reps);
        if (q == 1) raw = raw.select_rows(K0.pivots());
        Matrix delta = hF1.dim == 0 ? Matrix(f, 0, hT.dim) : hF1.project * raw;
        Matrix a1 = induced(F.to_source, q - 1);
        if (!(delta * b).is_zero() || rank(b) + rank(delta) != hT.dim) bad("the target");
        if (!(a1 * delta).is_zero() || rank(delta) + rank(a1) != hF1.dim) bad("the fiber");
      }
    }
  }
  // Every square of the grid commutes.
  for (auto& [u, obj] : x.objects)
    for (int j = 0; j < n; ++j)
      for (int l = j + 1; l < n; ++l) {
        if (u[j] == 0 || u[l] == 0) continue;
        std::vector<int> uj = lower(u, j), ul = lower(u, l), ujl = lower(uj, l);
        const ChainComplex& E = x.objects.at(ujl);
        for (int q = 0; q < obj.length(); ++q) {
          Matrix p1 = comp_at(x.maps.at({uj, l}), x.objects.at(uj), E, q) * comp_at(x.maps.at({u, j}), obj, x.objects.at(uj), q);
          Matrix p2 = comp_at(x.maps.at({ul, j}), x.objects.at(ul), E, q) * comp_at(x.maps.at({u, l}), obj, x.objects.at(ul), q);
          if (!(p1 == p2)) {
            x.failures.push_back("square at " + name(u) + " along axes " + std::to_string(j) + "," + std::to_string(l) +
                                 " does not commute in degree " + std::to_string(q));
            break;
          }
        }
      }
  return x;
}

DoubleComplex filtered_to_double(const FilteredComplex& fc) {
  if (auto e = validate(fc); !e.empty()) throw std::invalid_argument("filtered_to_double: " + e);
  const Field& f = fc.field;
  Filtration fl = filtration_of(fc);
  const int P = fl.stages, top = fl.top();
  // Degree m of the top stage splits as the blocks Q_0 + ... + Q_{P-1}, with Q_p
  // spanned by coordinate vectors completing F_{p-1} to F_p.
  std::vector<Matrix> basis(top), inv(top);
  std::vector<std::vector<std::size_t>> off(top);
  for (int m = 0; m < top; ++m) {
    Matrix b(f, fl.tot.dim(m), 0);
    off[m].push_back(0);
    for (int p = 0; p < P; ++p) {
      Matrix q = quotient_basis(fl.at(m, p - 1), fl.at(m, p));
      if (q.cols() > 0 && m < p)
        throw std::invalid_argument("filtered_to_double: F_" + std::to_string(p) + " / F_" + std::to_string(p - 1) +
                                    " is nonzero in degree " + std::to_string(m));
      b = b.hcat(q);
      off[m].push_back(b.cols());
    }
    basis[m] = b;
    inv[m] = inverse(b);
  }
  DoubleComplex dc{f, {}, {}};
  auto block = [&](int m, int p_to, int p_from) {
    Matrix dm = inv[m - 1] * fl.D(m) * basis[m];
    return dm.block(off[m - 1][p_to], off[m][p_from], off[m - 1][p_to + 1] - off[m - 1][p_to],
                    off[m][p_from + 1] - off[m][p_from]);
  };
  for (int p = 0; p < P; ++p) {
    std::vector<std::size_t> dims;
    std::vector<Matrix> d{Matrix()};
    for (int m = p; m < top; ++m) dims.push_back(off[m][p + 1] - off[m][p]);
    while (!dims.empty() && dims.back() == 0) dims.pop_back();
    for (int q = 1; q < static_cast<int>(dims.size()); ++q) d.push_back(block(p + q, p, p).scaled(sign(f, p)));
    dc.columns.push_back(ChainComplex(f, dims, d));
    Comps h;
    if (p > 0)
      for (int q = 0; q < dc.columns[p].length(); ++q) {
        const int m = p + q;
        h.push_back(m >= 1 ? block(m, p - 1, p) : Matrix(f, 0, dc.dim(p, q)));
        for (int p2 = 0; p2 + 1 < p && m >= 1; ++p2)
          if (!block(m, p2, p).is_zero())
            throw std::invalid_argument("filtered_to_double: the differential drops more than one stage from F_" +
                                        std::to_string(p) + " in degree " + std::to_string(m));
      }
    // Shapes in degrees where the source is zero but the target is not.
    if (p > 0)
      for (int q = static_cast<int>(h.size()); q < dc.columns[p - 1].length(); ++q) h.push_back(Matrix(f, dc.dim(p - 1, q), 0));
    dc.horizontal.push_back(h);
  }
  if (auto e = validate(dc); !e.empty()) throw std::logic_error("filtered_to_double: " + e);
  return dc;
}

std::pair<DoubleComplex, CubeSS> filtered_to_cubes(const FilteredComplex& fc, int n) {
  if (n < 1 || n >= static_cast<int>(fc.stages.size()))
    throw std::invalid_argument("filtered_to_cubes: need " + std::to_string(n + 1) + " stages, have " +
                                std::to_string(fc.stages.size()));
  DoubleComplex dc = filtered_to_double(fc);
  CubeSS c = double_to_cube(dc, 0, n);
  return {dc, c};
}

}  // namespace hd
