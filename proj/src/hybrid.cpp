#include <algorithm>
#include <stdexcept>

#include "hodiag/hybrid.hpp"

namespace hd {

namespace {

Matrix comp_or_zero(const Field& f, const Comps& c, int n, std::size_t rows, std::size_t cols) {
  if (n >= 0 && n < static_cast<int>(c.size()) && c[n].rows() == rows && c[n].cols() == cols) return c[n];
  return Matrix(f, rows, cols);
}

bool invertible(const Matrix& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

std::string where(const Poset& p, Obj b, int j) { return p.label(b) + " degree " + std::to_string(j); }

// Restriction of the partial model to the down-set of b, with L at b.
struct Local {
  Diagram d;
  std::vector<Obj> to_local;  // global -> local (or npos)
  std::vector<bool> original; // per local object
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Local local_diagram(const Field& f, const Poset& J, Obj b, const std::vector<ChainComplex>& R,
                    const std::map<std::pair<Obj, Obj>, Comps>& covers, const ChainComplex& L,
                    const std::vector<Obj>& preds, const Colimit& col, const std::vector<bool>& original) {
  Local loc;
  loc.to_local.assign(J.size(), npos);
  std::vector<std::string> labels;
  std::vector<ChainComplex> objs;
  for (Obj a : preds) {
    loc.to_local[a] = labels.size();
    loc.original.push_back(original[a]);
    labels.push_back(J.label(a));
    objs.push_back(R[a]);
  }
  loc.to_local[b] = labels.size();
  loc.original.push_back(original[b]);
  labels.push_back(J.label(b));
  objs.push_back(L);
  std::vector<std::pair<Obj, Obj>> rel;
  std::map<std::pair<Obj, Obj>, Comps> maps;
  for (auto [u, v] : J.covers()) {
    if (loc.to_local[u] == npos || loc.to_local[v] == npos) continue;
    rel.push_back({loc.to_local[u], loc.to_local[v]});
    if (v == b) {
      std::size_t i = std::find(preds.begin(), preds.end(), u) - preds.begin();
      maps[{loc.to_local[u], loc.to_local[v]}] = col.cocone[i];
    } else {
      maps[{loc.to_local[u], loc.to_local[v]}] = covers.at({u, v});
    }
  }
  (void)f;
  loc.d = Diagram(Poset(labels, rel), std::move(objs), std::move(maps));
  return loc;
}

struct PiSolution {
  Matrix pi;
  bool consistent = true;
  bool ambiguous = false;
};

// Find pi (rows x cols) with pi c_i = y_i modulo span(slack_i) for every i.
PiSolution solve_predictions(const Field& f, std::size_t rows, std::size_t cols, const std::vector<Vec>& cs,
                             const std::vector<Vec>& ys, const std::vector<Matrix>& slack) {
  PiSolution out;
  out.pi = Matrix(f, rows, cols);
  std::size_t unknowns = rows * cols;
  std::vector<std::size_t> off;
  for (auto& s : slack) {
    off.push_back(unknowns);
    unknowns += s.cols();
  }
  Matrix A(f, rows * cs.size(), unknowns);
  Vec rhs(rows * cs.size(), 0);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t eq = i * rows + r;
      for (std::size_t c = 0; c < cols; ++c) A.at(eq, r * cols + c) = cs[i][c];
      for (std::size_t s = 0; s < slack[i].cols(); ++s) A.at(eq, off[i] + s) = f.neg(slack[i](r, s));
      rhs[eq] = ys[i][r];
    }
  auto x = solve(A, rhs);
  if (!x) {
    out.consistent = false;
    return out;
  }
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.pi.at(r, c) = (*x)[r * cols + c];
  Matrix N = kernel(A).basis();
  out.ambiguous = !N.block(0, 0, rows * cols, N.cols()).is_zero();
  return out;
}

// Map from the latching object of the model at b to X(b), induced by the
// comparison maps already built below b.
std::optional<Comps> factor_latching(const Diagram& X, Obj b, const std::vector<ChainComplex>& R,
                                     const std::vector<Comps>& phi, const ColimitInput& in,
                                     const Colimit& col) {
  const Field& f = X.field();
  const ChainComplex& Xb = X.at(b);
  std::vector<Comps> legs;
  for (Obj a : X.index().predecessors(b)) {
    Comps leg(std::max(R[a].length(), Xb.length()));
    for (int j = 0; j < static_cast<int>(leg.size()); ++j)
      leg[j] = X.map(a, b, j) * comp_or_zero(f, phi[a], j, X.at(a).dim(j), R[a].dim(j));
    legs.push_back(leg);
  }
  return colimit_factor(f, in, col, Xb, legs);
}

// Extend u: L -> X(b) over the cells of R(b): disks go to chosen bounding
// chains, spheres to representatives of their assigned classes.
Comps extend_over_cells(const ChainComplex& Rb, const ChainComplex& L, const ChainComplex& Xb,
                        const Comps& u, const std::vector<CellNote>& cells, const std::string& where_b,
                        std::vector<std::string>& failures) {
  const Field& f = Xb.field();
  Comps ph(Rb.length());
  std::size_t cell = 0;
  for (int j = 0; j < Rb.length(); ++j) {
    Matrix m(f, Xb.dim(j), Rb.dim(j));
    m.put(0, 0, comp_or_zero(f, u, j, Xb.dim(j), L.dim(j)));
    std::size_t col_ix = L.dim(j);
    Homology HXj = homology(Xb, j);
    for (; cell < cells.size() && cells[cell].degree == j; ++cell, ++col_ix) {
      const CellNote& cn = cells[cell];
      if (cn.disk) {
        Vec target = ph[j - 1].apply(Rb.d(j).col(col_ix));
        auto s = solve(Xb.d(j), target);
        if (!s) {
          failures.push_back("disk boundary does not bound at " + where_b + " degree " + std::to_string(j));
          continue;
        }
        m.set_col(col_ix, *s);
      } else {
        m.set_col(col_ix, HXj.reps.apply(cn.assigned));
      }
    }
    ph[j] = m;
  }
  return ph;
}

bool meets(const Matrix& pi, const Vec& c, const Vec& y, const Matrix& slack) {
  const Field& f = pi.field();
  Vec diff = vsub(f, pi.apply(c), y);
  return vzero(diff) || Subspace::span(slack).contains(diff);
}

}  // namespace

ExpandedDerived expand(const Tower& t, int k, bool guided) {
  ExpandedDerived e;
  e.k = k;
  const Diagram& X = t.diagram;
  const Poset& J = X.index();
  const Field& f = X.field();
  const std::size_t n = J.size();
  HomologyDiagram HX(X, k);

  std::vector<ChainComplex> R(n);
  std::map<std::pair<Obj, Obj>, Comps> covers;
  e.iota.assign(n, {});
  e.cells.assign(n, {});
  e.stage.assign(n, 0);
  e.latching_inputs.assign(n, {});
  e.latching.assign(n, {});

  std::vector<Comps> phi(n);

  std::vector<const FamilyValue*> fams;
  for (auto& v : t.values) fams.push_back(&v);
  for (auto& v : t.formal) fams.push_back(&v);

  for (Obj b : J.topo_order()) {
    std::vector<Obj> preds = J.predecessors(b);
    ColimitInput in;
    for (Obj a : preds) in.objs.push_back(R[a]);
    for (auto [u, v] : J.covers()) {
      auto iu = std::find(preds.begin(), preds.end(), u);
      auto iv = std::find(preds.begin(), preds.end(), v);
      if (iu == preds.end() || iv == preds.end()) continue;
      in.maps.emplace_back(iu - preds.begin(), iv - preds.begin(), covers.at({u, v}));
    }
    Colimit col = colimit(f, in);
    const ChainComplex L = col.complex.is_zero() ? ChainComplex(f) : col.complex;
    for (Obj g : J.lower_covers(b)) e.stage[b] = std::max(e.stage[b], e.stage[g] + 1);

    std::optional<Comps> u;
    if (guided) {
      u = factor_latching(X, b, R, phi, in, col);
      if (!u) e.diagnostics.push_back("latching cocone does not factor at " + J.label(b));
    }

    std::optional<Local> loc;
    auto local = [&]() -> Local& {
      if (!loc) loc = local_diagram(f, J, b, R, covers, L, preds, col, t.original);
      return *loc;
    };

    // Cells per degree: disk boundaries (in L_{j}) and sphere classes.
    std::vector<std::vector<Vec>> disk_bd(k + 2), sphere_cls(k + 1);
    std::vector<std::vector<std::string>> disk_src(k + 2), sphere_src(k + 1);
    std::vector<Matrix> pis(k + 1);
    for (int j = 0; j <= k; ++j) {
      Homology HL = homology(L, j);
      const std::size_t hx = HX.dim(b, j);
      std::vector<Vec> cs, ys;
      std::vector<Matrix> slack;  // per column: the value is only known modulo these
      for (Obj g : J.lower_covers(b)) {
        std::size_t i = std::find(preds.begin(), preds.end(), g) - preds.begin();
        Homology HR = homology(R[g], j);
        if (HR.dim == 0 || HL.dim == 0) continue;
        Matrix inc = comp_or_zero(f, col.cocone[i], j, L.dim(j), R[g].dim(j));
        Matrix cls = HL.project * inc * HR.reps;
        Matrix pred = HX.map(g, b, j) * e.iota[g][j];
        for (std::size_t c = 0; c < cls.cols(); ++c) {
          cs.push_back(cls.col(c));
          ys.push_back(pred.col(c));
          slack.push_back(Matrix(f, hx, 0));
        }
      }
      for (const FamilyValue* fv : fams) {
        if (!fv->path.beta || *fv->path.beta != b || fv->target_degree() != j) continue;
        if (!fv->defined || fv->classes.cols() == 0) continue;
        const Obj a = fv->path.alpha;
        const Matrix& io = e.iota[a][fv->degree];
        if (!invertible(io)) continue;  // reported at a
        Matrix classes = inverse(io) * fv->classes;
        Local& lc = local();
        PathObject lp{lc.to_local[a], {}, lc.to_local[b]};
        for (Obj g : fv->path.gamma) lp.gamma.push_back(lc.to_local[g]);
        try {
          FamilyValue mv = family_value(lc.d, lp, fv->degree, classes, lc.original);
          if (!mv.defined) {
            e.diagnostics.push_back("family " + describe(J, fv->path) + " undefined on the model");
            continue;
          }
          for (std::size_t c = 0; c < mv.value.cols(); ++c) {
            cs.push_back(mv.value.col(c));
            ys.push_back(fv->value.col(c));
            slack.push_back(fv->indeterminacy.basis());
          }
        } catch (const std::invalid_argument& ex) {
          e.diagnostics.push_back("family " + describe(J, fv->path) + ": " + ex.what());
        }
      }
      Matrix C = Matrix::from_columns(f, HL.dim, cs);
      Matrix pi(f, hx, HL.dim);
      if (HL.dim > 0) {
        if (rank(C) < HL.dim)
          e.diagnostics.push_back("unexplained latching classes at " + where(J, b, j));
        auto sol = solve_predictions(f, hx, HL.dim, cs, ys, slack);
        if (!sol.consistent)
          e.diagnostics.push_back("inconsistent predictions at " + where(J, b, j));
        else if (sol.ambiguous)
          e.notes.push_back("predictions fix the map only up to indeterminacy at " + where(J, b, j));
        pi = sol.pi;
        if (u) {
          Matrix truth = HX.at(b, j).project * comp_or_zero(f, *u, j, X.at(b).dim(j), L.dim(j)) * HL.reps;
          for (std::size_t i = 0; i < cs.size(); ++i)
            if (!meets(truth, cs[i], ys[i], slack[i])) {
              e.diagnostics.push_back("comparison map violates a prediction at " + where(J, b, j));
              break;
            }
          pi = truth;
        }
      }
      pis[j] = pi;
      Matrix dead = kernel(pi).basis();
      for (std::size_t c = 0; c < dead.cols(); ++c) {
        disk_bd[j + 1].push_back((HL.reps * Matrix::column(f, dead.col(c))).col(0));
        disk_src[j + 1].push_back("kills a latching class in degree " + std::to_string(j));
      }
      Matrix fresh = complement(image(pi)).basis();
      for (std::size_t c = 0; c < fresh.cols(); ++c) {
        sphere_cls[j].push_back(fresh.col(c));
        sphere_src[j].push_back("new class in degree " + std::to_string(j));
      }
    }

    // R(b) = L + disks + spheres, cells ordered disks then spheres per degree.
    int len = std::max(L.length(), 0);
    for (int j = 0; j <= k + 1; ++j) {
      if (!disk_bd[j].empty()) len = std::max(len, j + 1);
      if (j <= k && !sphere_cls[j].empty()) len = std::max(len, j + 1);
    }
    std::vector<std::size_t> dims(len);
    for (int j = 0; j < len; ++j) {
      dims[j] = L.dim(j) + (j <= k + 1 ? disk_bd[j].size() : 0) + (j <= k ? sphere_cls[j].size() : 0);
    }
    std::vector<Matrix> d(len);
    for (int j = 1; j < len; ++j) {
      Matrix m(f, dims[j - 1], dims[j]);
      m.put(0, 0, L.d(j));
      if (j <= k + 1)
        for (std::size_t c = 0; c < disk_bd[j].size(); ++c) {
          const Vec& v = disk_bd[j][c];
          for (std::size_t r = 0; r < v.size(); ++r) m.at(r, L.dim(j) + c) = v[r];
        }
      d[j] = m;
    }
    R[b] = ChainComplex(f, dims, d);
    for (int j = 0; j < len; ++j) {
      if (j <= k + 1)
        for (std::size_t c = 0; c < disk_bd[j].size(); ++c) e.cells[b].push_back({j, true, disk_src[j][c], {}});
      if (j <= k)
        for (std::size_t c = 0; c < sphere_cls[j].size(); ++c)
          e.cells[b].push_back({j, false, sphere_src[j][c], sphere_cls[j][c]});
    }
    for (Obj g : J.lower_covers(b)) {
      std::size_t i = std::find(preds.begin(), preds.end(), g) - preds.begin();
      Comps m(std::max(len, R[g].length()));
      for (int j = 0; j < static_cast<int>(m.size()); ++j) {
        Matrix inc(f, R[b].dim(j), L.dim(j));
        for (std::size_t r = 0; r < L.dim(j); ++r) inc.at(r, r) = 1;
        m[j] = inc * comp_or_zero(f, col.cocone[i], j, L.dim(j), R[g].dim(j));
      }
      covers[{g, b}] = m;
    }

    e.iota[b].assign(k + 1, Matrix());
    for (int j = 0; j <= k; ++j) {
      Homology HR = homology(R[b], j);
      Homology HL = homology(L, j);
      const std::size_t hx = HX.dim(b, j);
      Matrix G(f, HR.dim, 0), Y(f, hx, 0);
      if (HL.dim > 0) {
        Matrix inc(f, R[b].dim(j), L.dim(j));
        for (std::size_t r = 0; r < L.dim(j); ++r) inc.at(r, r) = 1;
        G = G.hcat(HR.project * inc * HL.reps);
        Y = Y.hcat(pis[j]);
      }
      for (std::size_t c = 0; c < sphere_cls[j].size(); ++c) {
        Vec u(R[b].dim(j), 0);
        u[L.dim(j) + disk_bd[j].size() + c] = 1;
        G = G.hcat(HR.project * Matrix::column(f, u));
        Y = Y.hcat(Matrix::column(f, sphere_cls[j][c]));
      }
      auto sol = solve_all(G.transpose(), Y.transpose());
      if (!sol) {
        e.diagnostics.push_back("no homology comparison at " + where(J, b, j));
        e.iota[b][j] = Matrix(f, hx, HR.dim);
        continue;
      }
      e.iota[b][j] = sol->transpose();
      if (!invertible(e.iota[b][j]))
        e.diagnostics.push_back("homology comparison not invertible at " + where(J, b, j));
    }
    if (u) phi[b] = extend_over_cells(R[b], L, X.at(b), *u, e.cells[b], J.label(b), e.diagnostics);
    e.latching_inputs[b] = std::move(in);
    e.latching[b] = std::move(col);
  }
  e.model = Diagram(J, R, covers);
  return e;
}

Reconstruction reconstruct(const Tower& t, const ExpandedDerived& e) {
  Reconstruction rc;
  const Diagram& X = t.diagram;
  const Diagram& M = e.model;
  const Poset& J = X.index();
  const Field& f = X.field();
  rc.phi.assign(J.size(), ChainMap());
  rc.omega.assign(J.size(), {});
  std::vector<Comps> phi(J.size());
  for (Obj b : J.topo_order()) {
    const ChainComplex& Rb = M.at(b);
    const ChainComplex& Xb = X.at(b);
    const Colimit& col = e.latching[b];
    std::optional<Comps> u = factor_latching(X, b, M.objects(), phi, e.latching_inputs[b], col);
    if (!u) {
      rc.failures.push_back("latching cocone does not factor at " + J.label(b));
      u = Comps();
    }
    Comps ph = extend_over_cells(Rb, col.complex, Xb, *u, e.cells[b], J.label(b), rc.failures);
    phi[b] = ph;
    std::string defect = chain_map_defect(Rb, Xb, ph);
    if (!defect.empty()) {
      rc.failures.push_back("not a chain map at " + J.label(b) + ": " + defect);
      continue;
    }
    rc.phi[b] = ChainMap(Rb, Xb, ph);
    for (Obj g : J.lower_covers(b)) {
      for (int j = 0; j < std::max(Rb.length(), M.at(g).length()); ++j) {
        Matrix lhs = comp_or_zero(f, ph, j, Xb.dim(j), Rb.dim(j)) * M.map(g, b, j);
        Matrix rhs = X.map(g, b, j) * comp_or_zero(f, phi[g], j, X.at(g).dim(j), M.at(g).dim(j));
        if (!(lhs == rhs)) {
          rc.failures.push_back("square " + J.label(g) + " -> " + J.label(b) + " fails in degree " +
                                std::to_string(j));
          break;
        }
      }
    }
    rc.omega[b].assign(e.k + 1, Matrix());
    for (int j = 0; j <= e.k; ++j) {
      Matrix h = induced(homology(Rb, j), homology(Xb, j), comp_or_zero(f, ph, j, Xb.dim(j), Rb.dim(j)));
      if (!(h == e.iota[b][j])) rc.failures.push_back("homology map differs from prediction at " + where(J, b, j));
      if (!invertible(h)) {
        rc.failures.push_back("not a homology isomorphism at " + where(J, b, j));
        continue;
      }
      rc.omega[b][j] = inverse(h);
    }
  }
  return rc;
}

HybridApprox hybridize(const Diagram& x, int k, std::size_t max_gamma) {
  HybridApprox h;
  h.level = k;
  const Diagram src = minimal_cofibrant_check(x).ok() ? x : minimal_cofibrant_replace(x).model;
  Tower t = build_tower(src, k, max_gamma);
  h.index = t.index;
  for (Obj a = 0; a < t.diagram.size(); ++a) {
    GradedVS g;
    for (int j = 0; j < k; ++j) g.dims.push_back(homology(t.diagram.at(a), j).dim);
    h.low.push_back(g);
  }
  ExpandedDerived e = expand(t, k, true);
  for (auto& d : e.diagnostics) h.issues.push_back(d);
  h.high = conn_cover_diagram(e.model, k).diagram;
  for (auto& v : t.formal)
    if (v.target_degree() <= k) h.formal.push_back(v);
  CofibrancyReport rep = minimal_cofibrant_check(h.high);
  h.issues.insert(h.issues.end(), rep.issues.begin(), rep.issues.end());
  h.hybrid = rep.ok() && e.ok();
  return h;
}

TheoremAReport verify_theorem_a(const Diagram& x, int k, std::size_t max_gamma) {
  TheoremAReport r;
  r.k = k;
  Diagram src = x;
  if (!minimal_cofibrant_check(x).ok()) {
    Replacement rep = minimal_cofibrant_replace(x);
    r.replaced = true;
    for (auto& q : rep.to_original)
      if (!is_quasi_iso(q, k)) r.failures.push_back("replacement is not a weak equivalence");
    src = rep.model;
  }
  Tower t = build_tower(src, k, max_gamma);
  r.tower_objects = t.diagram.size();
  ExpandedDerived e = expand(t, k, true);
  for (auto& s : e.diagnostics) r.failures.push_back(s);
  Reconstruction rc = reconstruct(t, e);
  for (auto& s : rc.failures) r.failures.push_back(s);
  r.certified = r.failures.empty();
  return r;
}

}  // namespace hd
