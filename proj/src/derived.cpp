#include "hodiag/derived.hpp"

#include <algorithm>
#include <stdexcept>

namespace hd {

namespace {

Matrix hmap(const Diagram& d, Obj a, Obj b, int k) {
  return induced(homology(d.at(a), k), homology(d.at(b), k), d.map(a, b, k));
}

// Quotient coordinates H -> H / I as the trailing rows of the inverse of [I | complement].
Matrix quotient_projection(const Subspace& I) {
  Subspace c = complement(I);
  Matrix basis = I.basis().hcat(c.basis());
  if (basis.rows() == 0) return Matrix(I.field(), 0, 0);
  Matrix inv = inverse(basis);
  return inv.block(I.dim(), 0, c.dim(), inv.cols());
}

int popcount(unsigned s) { return __builtin_popcount(s); }

std::vector<Obj> subset(const std::vector<Obj>& g, unsigned mask) {
  std::vector<Obj> s;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (mask >> i & 1) s.push_back(g[i]);
  return s;
}

}  // namespace

Subspace kernel_of(const Diagram& d, Obj alpha, const std::vector<Obj>& gamma, int k) {
  Homology ha = homology(d.at(alpha), k);
  Subspace K = Subspace::full(d.field(), ha.dim);
  for (Obj g : gamma) {
    Matrix m = induced(ha, homology(d.at(g), k), d.map(alpha, g, k));
    K = intersect(K, kernel(m));
  }
  return K;
}

const Subspace& KernelFamily::at(std::vector<Obj> gamma) const {
  std::sort(gamma.begin(), gamma.end());
  auto it = kernels.find(gamma);
  if (it == kernels.end()) throw std::out_of_range("kernel family has no such sub-family");
  return it->second;
}

KernelFamily kernels(const Diagram& d, Obj alpha, int k, const std::vector<PathObject>& families) {
  KernelFamily kf;
  kf.alpha = alpha;
  kf.degree = k;
  for (auto& po : families) {
    if (po.alpha != alpha) throw std::invalid_argument("kernels: family rooted elsewhere");
    const unsigned full = (1u << po.gamma.size()) - 1;
    for (unsigned m = 1; m <= full; ++m) {
      std::vector<Obj> s = subset(po.gamma, m);
      std::sort(s.begin(), s.end());
      if (!kf.kernels.count(s)) kf.kernels.emplace(s, kernel_of(d, alpha, s, k));
    }
  }
  return kf;
}

std::size_t FamilyValue::rank() const {
  if (value.cols() == 0 || value.rows() == 0) return 0;
  return hd::rank(value.hcat(indeterminacy.basis())) - indeterminacy.dim();
}

FamilyValue family_value(const Diagram& d, const PathObject& po, int k) {
  Subspace K = kernel_of(d, po.alpha, po.gamma, k);
  return family_value(d, po, k, K.basis());
}

FamilyValue family_value(const Diagram& d, const PathObject& po, int k, const Matrix& classes,
                         const std::vector<bool>& join_ok) {
  const Poset& p = d.index();
  const Field& f = d.field();
  const std::size_t m = po.gamma.size();
  if (m < 2) throw std::invalid_argument("family_value: Gamma needs at least two objects");
  if (!po.beta) throw std::invalid_argument("family_value: no target object");
  const Obj alpha = po.alpha, beta = *po.beta;
  for (Obj g : po.gamma)
    if (!p.less(alpha, g) || !p.less(g, beta))
      throw std::invalid_argument("family_value: " + describe(p, po) + " is not a path object");

  FamilyValue fv;
  fv.path = po;
  fv.degree = k;
  fv.order = static_cast<int>(m) - 1;
  fv.classes = classes;
  const int top = k + fv.order;
  Homology ha = homology(d.at(alpha), k);
  Homology hb = homology(d.at(beta), top);
  fv.value = Matrix(f, hb.dim, classes.cols());
  fv.indeterminacy = Subspace(f, hb.dim);
  if (classes.rows() != ha.dim) throw std::invalid_argument("family_value: class vector has wrong size");

  // Objects carrying the lifts: gamma_i for singletons, chosen joins for larger
  // sub-families, beta for Gamma itself.
  const unsigned full = (1u << m) - 1;
  std::vector<Obj> obj(full + 1, 0);
  for (std::size_t i = 0; i < m; ++i) obj[1u << i] = po.gamma[i];
  obj[full] = beta;
  for (int s = static_cast<int>(m) - 1; s >= 2; --s)
    for (unsigned S = 1; S < full; ++S) {
      if (popcount(S) != s) continue;
      std::vector<Obj> cand;
      for (Obj u : p.upper_bounds(subset(po.gamma, S))) {
        bool ok = join_ok.empty() || join_ok[u];
        for (std::size_t i = 0; i < m; ++i)
          if (!(S >> i & 1)) ok = ok && p.leq(u, obj[S | (1u << i)]);
        if (ok) cand.push_back(u);
      }
      std::vector<Obj> minimal;
      for (Obj u : cand) {
        bool is_min = true;
        for (Obj v : cand) is_min = is_min && !(p.less(v, u));
        if (is_min) minimal.push_back(u);
      }
      if (minimal.empty()) {
        fv.defined = false;
        fv.note = "no join of a sub-family below the target";
        return fv;
      }
      std::sort(minimal.begin(), minimal.end(),
                [&](Obj a, Obj b) { return p.label(a) < p.label(b); });
      obj[S] = minimal.front();
    }

  // Unknown blocks e_S in degree k + |S| for proper nonempty S.
  std::vector<std::size_t> off(full + 1, 0), rowoff(full + 1, 0);
  std::size_t ncols = 0, nrows = 0;
  for (unsigned S = 1; S < full; ++S) {
    off[S] = ncols;
    ncols += d.at(obj[S]).dim(k + popcount(S));
    rowoff[S] = nrows;
    nrows += d.at(obj[S]).dim(k + popcount(S) - 1);
  }
  Matrix A(f, nrows, ncols);
  // sum_j sign_j f(e_{S minus s_j}) placed at the given row offset, scaled by `scale`.
  auto put_faces = [&](Matrix& M, std::size_t r0, unsigned S, Obj target, int deg, long long scale) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i)
      if (S >> i & 1) idx.push_back(i);
    const int s = static_cast<int>(idx.size());
    for (int j = 0; j < s; ++j) {
      unsigned T = S & ~(1u << idx[j]);
      if (T == 0) continue;
      long long sign = ((s - 1 - j) % 2 == 0) ? 1 : -1;
      Matrix fm = d.map(obj[T], target, deg);
      if (fm.rows() == 0 || fm.cols() == 0) continue;
      M.put(r0, off[T], fm.scaled(f.reduce(sign * scale)));
    }
  };
  for (unsigned S = 1; S < full; ++S) {
    const int deg = k + popcount(S);
    Matrix dS = d.at(obj[S]).d(deg);
    if (dS.rows() && dS.cols()) A.put(rowoff[S], off[S], dS);
    if (popcount(S) >= 2) put_faces(A, rowoff[S], S, obj[S], deg - 1, -1);
  }
  Matrix O(f, d.at(beta).dim(top), ncols);
  put_faces(O, 0, full, beta, top, 1);
  Matrix out = hb.dim ? hb.project * O : Matrix(f, 0, ncols);

  Subspace N = kernel(A);
  fv.indeterminacy = Subspace::span(out * N.basis());

  for (std::size_t c = 0; c < classes.cols(); ++c) {
    Vec z = ha.reps.apply(classes.col(c));
    Vec rhs(nrows, 0);
    for (std::size_t i = 0; i < m; ++i) {
      Vec fz = d.map(alpha, po.gamma[i], k).apply(z);
      for (std::size_t r = 0; r < fz.size(); ++r) rhs[rowoff[1u << i] + r] = fz[r];
    }
    auto e = solve(A, rhs);
    if (!e) {
      // A single gamma that does not bound the class is a precondition failure.
      for (std::size_t i = 0; i < m; ++i) {
        Vec fz = d.map(alpha, po.gamma[i], k).apply(z);
        if (!solve(d.at(po.gamma[i]).d(k + 1), fz))
          throw std::invalid_argument("family_value: class does not die in " + p.label(po.gamma[i]));
      }
      fv.defined = false;
      fv.note = "lower-order values do not vanish";
      continue;
    }
    fv.value.set_col(c, out.apply(*e));
  }
  return fv;
}

FamilyValue eval_value(const Diagram& d, const PathObject& pair, int k) {
  if (pair.gamma.size() != 2) throw std::invalid_argument("eval_value: expected a pair");
  return family_value(d, pair, k);
}

PartialDerived inclusion_exclusion(const Diagram& d, const PathObject& po, int k) {
  const Poset& p = d.index();
  const Field& f = d.field();
  const std::size_t m = po.gamma.size();
  if (m < 2) throw std::invalid_argument("inclusion_exclusion: Gamma needs at least two objects");
  PartialDerived pd;
  pd.path = po;
  pd.degree = k;

  std::map<std::vector<Obj>, Subspace> K;
  for (std::size_t j = 0; j + 2 <= m; ++j) {
    const int size = static_cast<int>(m - j);
    std::vector<std::vector<Obj>> t;
    std::vector<unsigned> masks;
    for (unsigned S = 1; S < (1u << m); ++S)
      if (popcount(S) == size) masks.push_back(S);
    // Lexicographic order on index tuples.
    std::sort(masks.begin(), masks.end(), [&](unsigned a, unsigned b) {
      for (std::size_t i = 0; i < m; ++i) {
        bool x = a >> i & 1, y = b >> i & 1;
        if (x != y) return x;
      }
      return false;
    });
    std::vector<Matrix> bs;
    std::size_t total = 0;
    for (unsigned S : masks) {
      auto s = subset(po.gamma, S);
      Subspace ks = kernel_of(d, po.alpha, s, k);
      K[s] = ks;
      t.push_back(s);
      bs.push_back(ks.basis());
      total += ks.dim();
    }
    pd.terms.push_back(t);
    pd.bases.push_back(bs);
    pd.term_dims.push_back(total);
  }

  for (std::size_t j = 0; j + 1 < pd.terms.size(); ++j) {
    Matrix th(f, pd.term_dims[j + 1], pd.term_dims[j]);
    std::size_t c0 = 0;
    for (auto& S : pd.terms[j]) {
      const Subspace& ks = K.at(S);
      for (std::size_t i = 0; i < S.size(); ++i) {
        std::vector<Obj> T = S;
        T.erase(T.begin() + i);
        std::size_t r0 = 0, t = 0;
        for (; pd.terms[j + 1][t] != T; ++t) r0 += K.at(pd.terms[j + 1][t]).dim();
        const Subspace& kt = K.at(T);
        for (std::size_t c = 0; c < ks.dim(); ++c) {
          Vec v = kt.coords(ks.basis().col(c));
          for (std::size_t r = 0; r < v.size(); ++r) th.set(r0 + r, c0 + c, i % 2 ? -static_cast<long long>(v[r]) : v[r]);
        }
      }
      c0 += ks.dim();
    }
    pd.theta.push_back(th);
  }

  // Pair values in the target.
  const auto& pairs = pd.terms.back();
  std::optional<Obj> beta = po.beta;
  if (!beta) {
    auto joins = p.minimal_joins(po.gamma);
    if (!joins.empty()) beta = joins.front();
  }
  if (beta) {
    std::size_t hb = homology(d.at(*beta), k + 1).dim;
    pd.psi = Matrix(f, hb, pd.term_dims.back());
    pd.indeterminacy = Subspace(f, hb);
    std::size_t c0 = 0;
    for (std::size_t t = 0; t < pairs.size(); ++t) {
      FamilyValue fv = family_value(d, {po.alpha, pairs[t], *beta}, k, pd.bases.back()[t]);
      pd.psi.put(0, c0, fv.value);
      pd.indeterminacy = sum(pd.indeterminacy, fv.indeterminacy);
      c0 += fv.classes.cols();
    }
  } else {
    pd.issues.push_back("no join: evaluation skipped");
  }

  // Realization through the fan colimit.
  std::vector<Obj> sub = interval_below(p, po.alpha, po.gamma);
  SubColimit sc = colimit_over(d, sub);
  Homology hc = homology(sc.colim.complex, k + 1);
  Matrix img(f, hc.dim, 0);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    Homology hx = homology(d.at(sub[i]), k + 1);
    if (!hx.dim || !hc.dim) continue;
    img = img.hcat(hc.project * (sc.colim.cocone[i].size() > static_cast<std::size_t>(k + 1)
                                     ? sc.colim.cocone[i][k + 1]
                                     : Matrix(f, sc.colim.complex.dim(k + 1), d.at(sub[i]).dim(k + 1))) *
                   hx.reps);
  }
  Subspace I = Subspace::span(img);
  Matrix qp = quotient_projection(I);
  pd.hocolim_dim = hc.dim - I.dim();
  pd.to_hocolim = Matrix(f, pd.hocolim_dim, pd.term_dims.back());
  Homology ha = homology(d.at(po.alpha), k);
  auto pos = [&](Obj x) { return static_cast<std::size_t>(std::find(sub.begin(), sub.end(), x) - sub.begin()); };
  auto cocone = [&](Obj x) {
    const Comps& c = sc.colim.cocone[pos(x)];
    return static_cast<int>(c.size()) > k + 1 ? c[k + 1]
                                              : Matrix(f, sc.colim.complex.dim(k + 1), d.at(x).dim(k + 1));
  };
  std::size_t c0 = 0;
  for (std::size_t t = 0; t < pairs.size(); ++t) {
    const Matrix& B = pd.bases.back()[t];
    for (std::size_t c = 0; c < B.cols(); ++c) {
      Vec z = ha.reps.apply(B.col(c));
      Vec cyc(sc.colim.complex.dim(k + 1), 0);
      for (int side = 0; side < 2; ++side) {
        Obj g = pairs[t][side];
        auto b = solve(d.at(g).d(k + 1), d.map(po.alpha, g, k).apply(z));
        if (!b) throw std::logic_error("inclusion_exclusion: kernel class does not bound");
        Vec img_b = cocone(g).apply(*b);
        cyc = side == 0 ? vadd(f, cyc, img_b) : vsub(f, cyc, img_b);
      }
      if (pd.hocolim_dim) pd.to_hocolim.set_col(c0 + c, qp.apply(hc.project.apply(cyc)));
    }
    c0 += B.cols();
  }

  // Exactness.
  bool ok = true;
  auto need = [&](bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      pd.issues.push_back(msg);
    }
  };
  std::vector<Matrix> maps = pd.theta;
  maps.push_back(pd.to_hocolim);
  for (std::size_t j = 0; j + 1 < maps.size(); ++j)
    need((maps[j + 1] * maps[j]).is_zero(), "composite " + std::to_string(j) + " is nonzero");
  need(rank(maps[0]) == pd.term_dims[0], "first map is not injective");
  for (std::size_t j = 1; j < maps.size(); ++j)
    need(pd.term_dims[j] - rank(maps[j]) == rank(maps[j - 1]),
         "not exact at term " + std::to_string(j));
  need(rank(pd.to_hocolim) == pd.hocolim_dim, "last map is not onto the colimit classes");
  pd.exact = ok;

  pd.coordinated = true;
  if (beta && pd.theta.size() >= 1) {
    Matrix comp = pd.psi * pd.theta.back();
    for (std::size_t c = 0; c < comp.cols(); ++c)
      if (!pd.indeterminacy.contains(comp.col(c))) pd.coordinated = false;
    if (!pd.coordinated) pd.issues.push_back("pair values are not coordinated");
  }
  return pd;
}

GlobalDerived global_derived(const Diagram& d, int k, std::size_t max_gamma) {
  const Poset& p = d.index();
  const Field& f = d.field();
  GlobalDerived g;
  g.index = derived_index(p, max_gamma);
  g.degree = k;
  const auto& nodes = g.index.nodes;
  std::vector<Subspace> K(nodes.size());
  std::vector<Matrix> pb(nodes.size());  // pullback: basis of the preimage in H_k(alpha')
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const IndexNode& n = nodes[i];
    GradedVS v;
    if (n.kind == NodeKind::Base) {
      for (int j = 0; j <= k + 1; ++j) v.dims.push_back(homology(d.at(n.base), j).dim);
    } else if (n.kind == NodeKind::Kernel) {
      K[i] = kernel_of(d, n.base, n.gamma, k);
      v.dims.assign(k + 1, 0);
      v.dims[k] = K[i].dim();
    } else if (n.kind == NodeKind::Pullback) {
      // Kernel nodes precede their pullbacks.
      const IndexNode& kn = nodes[n.kernel_node];
      Subspace pre = preimage(hmap(d, n.base, kn.base, k), K[n.kernel_node]);
      pb[i] = pre.basis();
      v.dims.assign(k + 1, 0);
      v.dims[k] = pre.dim();
    }
    while (!v.dims.empty() && v.dims.back() == 0) v.dims.pop_back();
    g.values.push_back(v);
  }
  auto coords_into = [&](const Subspace& from, const Subspace& to, long long sign) {
    Matrix m(f, to.dim(), from.dim());
    for (std::size_t c = 0; c < from.dim(); ++c) {
      Vec v = to.coords(from.basis().col(c));
      for (std::size_t r = 0; r < v.size(); ++r) m.set(r, c, sign * static_cast<long long>(v[r]));
    }
    return m;
  };

  std::map<std::size_t, std::vector<std::size_t>> evals_of;  // kernel node -> evaluation indices
  for (std::size_t e = 0; e < g.index.edges.size(); ++e) {
    const IndexEdge& ed = g.index.edges[e];
    const IndexNode& a = nodes[ed.from];
    const IndexNode& b = nodes[ed.to];
    GradedMap gm = GradedMap::zero(f, g.values[ed.from], g.values[ed.to]);
    switch (ed.kind) {
      case EdgeKind::Base:
        for (int j = 0; j <= k + 1; ++j) {
          Matrix m = hmap(d, a.base, b.base, j);
          if (!m.is_zero()) gm.set(0, j, m);
        }
        break;
      case EdgeKind::FormalDiff: {
        std::size_t i = 0;
        while (i < a.gamma.size() && std::find(b.gamma.begin(), b.gamma.end(), a.gamma[i]) != b.gamma.end()) ++i;
        Matrix m = coords_into(K[ed.from], K[ed.to], i % 2 ? -1 : 1);
        if (!m.is_zero()) gm.set(0, k, m);
        break;
      }
      case EdgeKind::KernelToRoot:
        if (!K[ed.from].basis().is_zero()) gm.set(0, k, K[ed.from].basis());
        break;
      case EdgeKind::Evaluation: {
        FamilyValue fv = family_value(d, {a.base, a.gamma, b.base}, k, K[ed.from].basis());
        if (!fv.value.is_zero()) gm.set(1, k, fv.value);
        evals_of[ed.from].push_back(g.evaluations.size());
        g.evaluation_edges.push_back(e);
        g.evaluations.push_back(fv);
        break;
      }
      case EdgeKind::PathMorphism: {
        auto asg = path_morphisms(p, {a.base, a.gamma, std::nullopt}, {b.base, b.gamma, std::nullopt});
        long long sign = asg && (*asg)[0] == 1 ? -1 : 1;
        Matrix m = coords_into(K[ed.from], K[ed.to], sign);
        if (!m.is_zero()) gm.set(0, k, m);
        break;
      }
      case EdgeKind::PullbackLeg: {
        if (b.kind == NodeKind::Kernel) {
          Matrix h = hmap(d, a.base, b.base, k) * pb[ed.from];
          Matrix m(f, K[ed.to].dim(), h.cols());
          for (std::size_t c = 0; c < h.cols(); ++c) m.set_col(c, K[ed.to].coords(h.col(c)));
          if (!m.is_zero()) gm.set(0, k, m);
        } else if (!pb[ed.from].is_zero()) {
          gm.set(0, k, pb[ed.from]);
        }
        break;
      }
      default:
        break;
    }
    g.arrows.push_back(gm);
  }

  // Compatibility squares along path morphisms.
  for (std::size_t e = 0; e < g.index.edges.size(); ++e) {
    const IndexEdge& ed = g.index.edges[e];
    if (ed.kind != EdgeKind::PathMorphism) continue;
    Matrix phi = g.arrows[e].at(0, k);
    if (phi.rows() != K[ed.to].dim() || phi.cols() != K[ed.from].dim()) phi = Matrix(f, K[ed.to].dim(), K[ed.from].dim());
    for (std::size_t i1 : evals_of[ed.from])
      for (std::size_t i2 : evals_of[ed.to]) {
        const FamilyValue& v1 = g.evaluations[i1];
        const FamilyValue& v2 = g.evaluations[i2];
        Obj b1 = *v1.path.beta, b2 = *v2.path.beta;
        if (!p.leq(b1, b2)) continue;
        Matrix lhs = hmap(d, b1, b2, k + 1) * v1.value;
        Matrix rhs = v2.value * phi;
        Matrix diff = lhs - rhs;
        for (std::size_t c = 0; c < diff.cols(); ++c)
          if (!v2.indeterminacy.contains(diff.col(c))) {
            g.issues.push_back("square " + nodes[ed.from].label + " -> " + nodes[ed.to].label + " over " +
                               p.label(b1) + " -> " + p.label(b2) + " does not commute");
            break;
          }
      }
  }
  return g;
}

}  // namespace hd
