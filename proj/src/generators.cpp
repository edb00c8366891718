#include "hodiag/generators.hpp"

#include <algorithm>
#include <stdexcept>

namespace hd {

namespace {

std::string bits(int v, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

}  // namespace

Poset cube_poset(int n) {
  std::vector<std::string> labels;
  std::vector<std::pair<Obj, Obj>> rel;
  for (int v = 0; v < (1 << n); ++v) labels.push_back(bits(v, n));
  for (int v = 0; v < (1 << n); ++v)
    for (int i = 0; i < n; ++i)
      if (v >> i & 1) rel.emplace_back(v, v & ~(1 << i));
  return Poset(labels, rel);
}

Diagram gen_cube(const Field& f, int n, std::size_t dimV) {
  if (n < 1) throw std::invalid_argument("gen_cube: n must be >= 1");
  Poset p = cube_poset(n);
  const int N = 1 << n;
  // Global cell list: subsets S of [n] with |S| <= n-1, indexed by bitmask.
  auto popc = [](int s) { return __builtin_popcount(static_cast<unsigned>(s)); };
  std::vector<std::vector<std::vector<int>>> cells(N);  // cells[A][deg] = masks
  std::vector<ChainComplex> objs;
  for (int A = 0; A < N; ++A) {
    cells[A].assign(n, {});
    for (int S = 0; S < N; ++S)
      if ((S & A) == 0 && popc(S) <= n - 1) cells[A][popc(S)].push_back(S);
    std::vector<std::size_t> dims;
    for (int d = 0; d < n; ++d) dims.push_back(cells[A][d].size() * dimV);
    std::vector<Matrix> dd(n, Matrix());
    for (int d = 1; d < n; ++d) {
      Matrix m(f, dims[d - 1], dims[d]);
      for (std::size_t c = 0; c < cells[A][d].size(); ++c) {
        int S = cells[A][d][c];
        int j = 0;
        for (int i = 0; i < n; ++i) {
          if (!(S >> i & 1)) continue;
          int face = S & ~(1 << i);
          auto it = std::find(cells[A][d - 1].begin(), cells[A][d - 1].end(), face);
          std::size_t r = it - cells[A][d - 1].begin();
          for (std::size_t v = 0; v < dimV; ++v) m.set(r * dimV + v, c * dimV + v, j % 2 ? -1 : 1);
          ++j;
        }
      }
      dd[d] = m;
    }
    objs.emplace_back(f, dims, dd);
  }
  return diagram_from(p, objs, [&](Obj a, Obj b) {
    Comps c;
    for (int d = 0; d < n; ++d) {
      Matrix m(f, objs[b].dim(d), objs[a].dim(d));
      for (std::size_t i = 0; i < cells[a][d].size(); ++i) {
        auto it = std::find(cells[b][d].begin(), cells[b][d].end(), cells[a][d][i]);
        std::size_t j = it - cells[b][d].begin();
        for (std::size_t v = 0; v < dimV; ++v) m.at(j * dimV + v, i * dimV + v) = 1;
      }
      c.push_back(m);
    }
    return c;
  });
}

Diagram gen_minimal(const Field& f, int n, std::size_t dimV, bool split) {
  if (n < 1) throw std::invalid_argument("gen_minimal: n must be >= 1");
  // Global cells: e (deg 0), u_i and u'_i (deg i) for 1 <= i <= n.
  // Cell ids: 0 = e, 2i-1 = u_i, 2i = u'_i.
  auto deg = [](int id) { return id == 0 ? 0 : (id + 1) / 2; };
  auto boundary = [&](int id) -> std::vector<std::pair<int, int>> {
    if (id == 0) return {};
    int i = (id + 1) / 2;
    if (i == 1) return {{0, 1}};
    return {{2 * (i - 1) - 1, 1}, {2 * (i - 1), -1}};
  };
  std::vector<std::string> labels{"s"};
  for (int i = 0; i < n; ++i) labels.push_back("a" + std::to_string(i));
  for (int i = 0; i < n; ++i) labels.push_back("b" + std::to_string(i));
  labels.push_back("t");
  const Obj s = 0, t = 2 * n + 1;
  auto a = [&](int i) { return static_cast<Obj>(1 + i); };
  auto b = [&](int i) { return static_cast<Obj>(1 + n + i); };
  std::vector<std::pair<Obj, Obj>> rel{{s, a(0)}, {s, b(0)}, {a(n - 1), t}, {b(n - 1), t}};
  for (int i = 0; i + 1 < n; ++i) {
    rel.emplace_back(a(i), a(i + 1));
    rel.emplace_back(a(i), b(i + 1));
    rel.emplace_back(b(i), a(i + 1));
    rel.emplace_back(b(i), b(i + 1));
  }
  Poset p(labels, rel);
  // Cell sets per object.
  std::vector<std::vector<int>> cellset(p.size());
  auto Lk = [&](int k) {
    std::vector<int> c{0};
    for (int i = 1; i <= k; ++i) {
      c.push_back(2 * i - 1);
      c.push_back(2 * i);
    }
    return c;
  };
  cellset[s] = Lk(0);
  for (int i = 0; i < n; ++i) {
    cellset[a(i)] = Lk(i);
    cellset[a(i)].push_back(2 * (i + 1) - 1);
    cellset[b(i)] = Lk(i);
    cellset[b(i)].push_back(2 * (i + 1));
  }
  cellset[t] = Lk(n);
  const int kill = 2 * n + 1, fresh = 2 * n + 2;  // extra cells of the split top
  if (split) {
    cellset[t].push_back(kill);
    cellset[t].push_back(fresh);
  }
  auto cdeg = [&](int id) { return id == kill ? n + 1 : id == fresh ? n : deg(id); };
  auto cbound = [&](int id) -> std::vector<std::pair<int, int>> {
    if (id == kill) return {{2 * n - 1, 1}, {2 * n, -1}};
    if (id == fresh) return {};
    return boundary(id);
  };
  // Per object: ordered cells in each degree.
  std::vector<std::vector<std::vector<int>>> bydeg(p.size());
  std::vector<ChainComplex> objs;
  for (Obj x = 0; x < p.size(); ++x) {
    bydeg[x].assign(n + 2, {});
    for (int id : cellset[x]) bydeg[x][cdeg(id)].push_back(id);
    for (auto& v : bydeg[x]) std::sort(v.begin(), v.end());
    std::vector<std::size_t> dims;
    for (auto& v : bydeg[x]) dims.push_back(v.size() * dimV);
    std::vector<Matrix> dd(dims.size(), Matrix());
    for (int d = 1; d < static_cast<int>(dims.size()); ++d) {
      Matrix m(f, dims[d - 1], dims[d]);
      for (std::size_t c = 0; c < bydeg[x][d].size(); ++c)
        for (auto [face, coef] : cbound(bydeg[x][d][c])) {
          auto it = std::find(bydeg[x][d - 1].begin(), bydeg[x][d - 1].end(), face);
          std::size_t r = it - bydeg[x][d - 1].begin();
          for (std::size_t v = 0; v < dimV; ++v) m.set(r * dimV + v, c * dimV + v, coef);
        }
      dd[d] = m;
    }
    objs.emplace_back(f, dims, dd);
  }
  return diagram_from(p, objs, [&](Obj x, Obj y) {
    Comps c;
    for (int d = 0; d < n + 2; ++d) {
      Matrix m(f, objs[y].dim(d), objs[x].dim(d));
      for (std::size_t i = 0; i < bydeg[x][d].size(); ++i) {
        auto it = std::find(bydeg[y][d].begin(), bydeg[y][d].end(), bydeg[x][d][i]);
        std::size_t j = it - bydeg[y][d].begin();
        for (std::size_t v = 0; v < dimV; ++v) m.at(j * dimV + v, i * dimV + v) = 1;
      }
      c.push_back(m);
    }
    return c;
  });
}

Diagram strict_zero_square(const Field& f, std::size_t dimV) {
  Poset p = Poset::from_labels({"s", "a0", "b0", "t"}, {{"s", "a0"}, {"s", "b0"}, {"a0", "t"}, {"b0", "t"}});
  std::vector<ChainComplex> objs{sphere(f, dimV, 0), ChainComplex(f), ChainComplex(f), sphere(f, dimV, 1)};
  return diagram_from(p, objs, [](Obj, Obj) { return Comps{}; });
}

Poset fan_poset(int m) {
  std::vector<std::string> labels{"a"};
  std::vector<std::pair<Obj, Obj>> rel;
  for (int i = 1; i <= m; ++i) labels.push_back("g" + std::to_string(i));
  labels.push_back("z");
  for (int i = 1; i <= m; ++i) {
    rel.emplace_back(0, i);
    rel.emplace_back(i, m + 1);
  }
  return Poset(labels, rel);
}

Poset random_poset(Rng& rng, std::size_t n, double edge_prob) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  std::vector<std::pair<Obj, Obj>> rel;
  std::bernoulli_distribution coin(edge_prob);
  for (Obj j = 1; j < n; ++j) {
    bool any = false;
    for (Obj i = 0; i < j; ++i)
      if (coin(rng)) {
        rel.emplace_back(i, j);
        any = true;
      }
    if (!any) rel.emplace_back(uniform(rng, 0, j - 1), j);
  }
  return Poset(labels, rel);
}

namespace {

// Extend a complex by random cells: new cells in degree n get boundaries that
// are random cycles of the complex built so far.
ChainComplex attach_random_cells(const ChainComplex& L, int max_deg, std::size_t max_new, Rng& rng,
                                 std::size_t* added = nullptr) {
  const Field& f = L.field();
  const int len = std::max(L.length(), max_deg + 1);
  std::vector<std::size_t> nnew(len, 0);
  for (int n = 0; n <= max_deg; ++n) nnew[n] = uniform(rng, 0, max_new);
  std::vector<std::size_t> dims(len);
  for (int n = 0; n < len; ++n) dims[n] = L.dim(n) + nnew[n];
  std::vector<Matrix> d(len, Matrix());
  for (int n = 1; n < len; ++n) {
    Matrix m(f, dims[n - 1], dims[n]);
    m.put(0, 0, L.d(n));
    Subspace Z = n == 1 ? Subspace::full(f, dims[0]) : kernel(d[n - 1]);
    Matrix cyc = Z.basis() * random_matrix(f, Z.dim(), nnew[n], rng);
    // Randomly keep some new cells as spheres.
    for (std::size_t j = 0; j < nnew[n]; ++j)
      if (uniform(rng, 0, 2) == 0)
        for (std::size_t i = 0; i < cyc.rows(); ++i) cyc.at(i, j) = 0;
    m.put(0, L.dim(n), cyc);
    d[n] = m;
  }
  if (added) {
    *added = 0;
    for (auto x : nnew) *added += x;
  }
  return ChainComplex(f, dims, d);
}

}  // namespace

Diagram random_cofibrant_diagram(const Field& f, const Poset& p, int max_deg, std::size_t max_new,
                                 Rng& rng) {
  std::vector<ChainComplex> objs(p.size(), ChainComplex(f));
  std::map<std::pair<Obj, Obj>, Comps> covers;
  for (Obj b : p.topo_order()) {
    std::vector<Obj> preds = p.predecessors(b);
    ColimitInput in;
    for (Obj x : preds) in.objs.push_back(objs[x]);
    for (std::size_t i = 0; i < preds.size(); ++i)
      for (std::size_t j = 0; j < preds.size(); ++j)
        if (p.is_cover(preds[i], preds[j])) in.maps.emplace_back(i, j, covers.at({preds[i], preds[j]}));
    Colimit L = colimit(f, in);
    ChainComplex X = attach_random_cells(L.complex, max_deg, max_new, rng);
    objs[b] = X;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (!p.is_cover(preds[i], b)) continue;
      Comps c;
      for (int n = 0; n < X.length(); ++n) {
        Matrix inc(f, X.dim(n), L.complex.dim(n));
        inc.put(0, 0, Matrix::identity(f, L.complex.dim(n)));
        Matrix cc = n < static_cast<int>(L.cocone[i].size()) ? L.cocone[i][n]
                                                             : Matrix(f, L.complex.dim(n), objs[preds[i]].dim(n));
        c.push_back(inc * cc);
      }
      covers[{preds[i], b}] = c;
    }
  }
  return Diagram(p, objs, covers);
}

Diagram random_diagram(const Field& f, const Poset& p, int max_deg, std::size_t max_new, Rng& rng) {
  Diagram d = random_cofibrant_diagram(f, p, max_deg, max_new, rng);
  switch (uniform(rng, 0, 2)) {
    case 0:
      return truncate_diagram(d, static_cast<int>(uniform(rng, 0, max_deg))).diagram;
    case 1:
      return conn_cover_diagram(d, static_cast<int>(uniform(rng, 0, max_deg))).diagram;
    default:
      return d;
  }
}

Diagram random_fan_diagram(const Field& f, int m, int k, std::size_t dimW, std::size_t extra,
                           Rng& rng) {
  Poset p = fan_poset(m);
  // a = K(W,k) + E; g_i = disk on W + E + free spheres; z = colimit + random cells.
  std::size_t e = uniform(rng, 0, extra);
  std::vector<ChainComplex> objs(p.size(), ChainComplex(f));
  std::vector<std::size_t> adims(k + 1, 0);
  adims[k] = dimW + e;
  objs[0] = ChainComplex(f, adims, {});
  std::map<std::pair<Obj, Obj>, Comps> covers;
  for (int i = 1; i <= m; ++i) {
    std::size_t fr = uniform(rng, 0, extra);
    std::vector<std::size_t> dims(k + 2, 0);
    dims[k] = dimW + e;
    dims[k + 1] = dimW + fr;
    std::vector<Matrix> d(k + 2, Matrix());
    for (int n = 1; n < k + 2; ++n) d[n] = Matrix(f, dims[n - 1], dims[n]);
    Matrix top(f, dims[k], dims[k + 1]);
    top.put(0, 0, Matrix::identity(f, dimW));
    d[k + 1] = top;
    objs[i] = ChainComplex(f, dims, d);
    Comps c;
    for (int n = 0; n <= k; ++n) c.push_back(Matrix(f, dims[n], adims[n]));
    // A random automorphism on W, identity on E.
    Matrix w = random_matrix(f, dimW, dimW, rng);
    while (rank(w) != dimW) w = random_matrix(f, dimW, dimW, rng);
    Matrix inc(f, dims[k], adims[k]);
    inc.put(0, 0, w);
    inc.put(dimW, dimW, Matrix::identity(f, e));
    c[k] = inc;
    covers[{0, static_cast<Obj>(i)}] = c;
  }
  ColimitInput in;
  for (int i = 0; i <= m; ++i) in.objs.push_back(objs[i]);
  for (int i = 1; i <= m; ++i) in.maps.emplace_back(0, i, covers.at({0, static_cast<Obj>(i)}));
  Colimit L = colimit(f, in);
  ChainComplex Z = attach_random_cells(L.complex, k + 2, extra, rng);
  objs[m + 1] = Z;
  for (int i = 1; i <= m; ++i) {
    Comps c;
    for (int n = 0; n < Z.length(); ++n) {
      Matrix inc(f, Z.dim(n), L.complex.dim(n));
      inc.put(0, 0, Matrix::identity(f, L.complex.dim(n)));
      Matrix cc = n < static_cast<int>(L.cocone[i].size()) ? L.cocone[i][n]
                                                           : Matrix(f, L.complex.dim(n), objs[i].dim(n));
      c.push_back(inc * cc);
    }
    covers[{static_cast<Obj>(i), static_cast<Obj>(m + 1)}] = c;
  }
  return Diagram(p, objs, covers);
}

}  // namespace hd
