#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "hodiag/diagram.hpp"

namespace hd {

namespace {

Matrix at_or_zero(const Field& f, const Comps& c, int n, std::size_t rows, std::size_t cols) {
  if (n >= 0 && n < static_cast<int>(c.size())) return c[n];
  return Matrix(f, rows, cols);
}

// Colimit of the partially built model over the strict predecessors of b.
struct PredColimit {
  std::vector<Obj> preds;
  ColimitInput in;
  Colimit colim;
};

PredColimit pred_colimit(const Poset& p, Obj b, const std::vector<ChainComplex>& objs,
                         const std::map<std::pair<Obj, Obj>, Comps>& covers,
                         const Field& f) {
  PredColimit pc;
  pc.preds = p.predecessors(b);
  for (Obj x : pc.preds) pc.in.objs.push_back(objs[x]);
  for (std::size_t i = 0; i < pc.preds.size(); ++i)
    for (std::size_t j = 0; j < pc.preds.size(); ++j)
      if (p.is_cover(pc.preds[i], pc.preds[j])) pc.in.maps.emplace_back(i, j, covers.at({pc.preds[i], pc.preds[j]}));
  pc.colim = colimit(f, pc.in);
  return pc;
}

// Composite of model maps x -> b through any chain of covers, computed from
// a partially built cover table.
Comps model_comps(const Poset& p, const std::vector<ChainComplex>& objs,
                  const std::map<std::pair<Obj, Obj>, Comps>& covers, Obj a, Obj b) {
  const Field& f = objs[a].field();
  if (a == b) {
    Comps id;
    for (int n = 0; n < objs[a].length(); ++n) id.push_back(Matrix::identity(f, objs[a].dim(n)));
    return id;
  }
  for (Obj c : p.lower_covers(b)) {
    if (!p.leq(a, c)) continue;
    Comps first = model_comps(p, objs, covers, a, c);
    const Comps& second = covers.at({c, b});
    const int len = std::max({objs[a].length(), objs[b].length(), objs[c].length()});
    Comps out;
    for (int n = 0; n < len; ++n)
      out.push_back(at_or_zero(f, second, n, objs[b].dim(n), objs[c].dim(n)) *
                    at_or_zero(f, first, n, objs[c].dim(n), objs[a].dim(n)));
    return out;
  }
  throw std::logic_error("model_comps: objects not related");
}

Comps compose_comps(const Field& f, const Comps& first, const Comps& second, const ChainComplex& a,
                    const ChainComplex& b, const ChainComplex& c) {
  const int len = std::max({a.length(), b.length(), c.length()});
  Comps out;
  for (int n = 0; n < len; ++n)
    out.push_back(at_or_zero(f, second, n, c.dim(n), b.dim(n)) * at_or_zero(f, first, n, b.dim(n), a.dim(n)));
  return out;
}

}  // namespace

Replacement reedy_cofibrant_replace(const Diagram& d) {
  const Poset& p = d.index();
  const Field& f = d.field();
  Replacement out;
  std::vector<ChainComplex> objs(d.size());
  std::vector<Comps> rho(d.size());
  std::map<std::pair<Obj, Obj>, Comps> covers;
  for (Obj b : p.topo_order()) {
    const ChainComplex& X = d.at(b);
    PredColimit pc = pred_colimit(p, b, objs, covers, f);
    if (pc.preds.empty()) {
      objs[b] = X;
      rho[b] = ChainMap::identity(X).f;
      continue;
    }
    const ChainComplex& L = pc.colim.complex;
    std::vector<Comps> legs;
    for (std::size_t i = 0; i < pc.preds.size(); ++i)
      legs.push_back(compose_comps(f, rho[pc.preds[i]], d.comps(pc.preds[i], b), objs[pc.preds[i]],
                                   d.at(pc.preds[i]), X));
    auto lam = colimit_factor(f, pc.in, pc.colim, X, legs);
    if (!lam) throw std::logic_error("reedy replacement: cocone does not factor");
    // Mapping cylinder: cone of g = (id, -lambda): L -> L + X.
    ChainComplex LX = direct_sum(L, X);
    Comps g;
    const int len = std::max(L.length(), X.length());
    for (int n = 0; n < len; ++n) {
      Matrix m(f, L.dim(n) + X.dim(n), L.dim(n));
      m.put(0, 0, Matrix::identity(f, L.dim(n)));
      m.put(L.dim(n), 0, -at_or_zero(f, *lam, n, X.dim(n), L.dim(n)));
      g.push_back(m);
    }
    ChainMap gm(L, LX, g);
    ChainComplex cyl = cone(gm);
    Comps incl, r;
    for (int n = 0; n < cyl.length(); ++n) {
      Matrix i(f, cyl.dim(n), L.dim(n));
      i.put(0, 0, Matrix::identity(f, L.dim(n)));
      incl.push_back(i);
      Matrix q(f, X.dim(n), cyl.dim(n));
      q.put(0, 0, at_or_zero(f, *lam, n, X.dim(n), L.dim(n)));
      q.put(0, L.dim(n), Matrix::identity(f, X.dim(n)));
      r.push_back(q);
    }
    objs[b] = cyl;
    rho[b] = r;
    for (std::size_t i = 0; i < pc.preds.size(); ++i)
      if (p.is_cover(pc.preds[i], b))
        covers[{pc.preds[i], b}] = compose_comps(f, pc.colim.cocone[i], incl, objs[pc.preds[i]], L, cyl);
  }
  out.model = Diagram(p, objs, covers);
  for (Obj a = 0; a < d.size(); ++a) {
    out.to_original.emplace_back(objs[a], d.at(a), rho[a]);
    if (!is_quasi_iso(out.to_original.back())) {
      out.quasi_iso = false;
      out.diagnostics.push_back("replacement at " + p.label(a) + " is not a quasi-isomorphism");
    }
  }
  for (Obj b = 0; b < d.size(); ++b) {
    Latching l = latching(out.model, b);
    for (int n = 0; n < l.colim.complex.length(); ++n)
      if (rank(l.map[n]) != l.colim.complex.dim(n)) {
        out.latching_injective = false;
        out.diagnostics.push_back("latching map at " + p.label(b) + " not injective in degree " +
                                  std::to_string(n));
      }
  }
  out.minimal = false;
  return out;
}

Replacement minimal_cofibrant_replace(const Diagram& d) {
  const Poset& p = d.index();
  const Field& f = d.field();
  Replacement out;
  std::vector<ChainComplex> objs(d.size());
  std::vector<Comps> phi(d.size());
  std::map<std::pair<Obj, Obj>, Comps> covers;
  // Per object and degree: sphere cell columns (offset, count) in the model basis.
  std::vector<std::map<int, std::pair<std::size_t, std::size_t>>> spheres(d.size());
  const int top = d.length() + 1;

  for (Obj b : p.topo_order()) {
    const ChainComplex& X = d.at(b);
    PredColimit pc = pred_colimit(p, b, objs, covers, f);
    const ChainComplex& L = pc.colim.complex;
    std::vector<Comps> legs;
    for (std::size_t i = 0; i < pc.preds.size(); ++i)
      legs.push_back(compose_comps(f, phi[pc.preds[i]], d.comps(pc.preds[i], b), objs[pc.preds[i]],
                                   d.at(pc.preds[i]), X));
    auto lam = colimit_factor(f, pc.in, pc.colim, X, legs);
    if (!lam) throw std::logic_error("minimal replacement: cocone does not factor");

    // attach[m]: cycles of L in degree m to be coned off; sph[m]: new sphere reps in X_m.
    std::vector<std::vector<Vec>> attach(top + 1), sph(top + 1);
    for (int m = 0; m <= top; ++m) {
      Homology HL = homology(L, m);
      Homology HX = homology(X, m);
      Matrix lm = at_or_zero(f, *lam, m, X.dim(m), L.dim(m));
      Matrix pi = HX.project * lm * HL.reps;
      Subspace ker = kernel(pi);
      // Prefer classes carried by sphere cells of predecessors.
      Subspace chosen(f, HL.dim);
      for (std::size_t i = 0; i < pc.preds.size(); ++i) {
        auto it = spheres[pc.preds[i]].find(m);
        if (it == spheres[pc.preds[i]].end()) continue;
        Matrix cc = at_or_zero(f, pc.colim.cocone[i], m, L.dim(m), objs[pc.preds[i]].dim(m));
        for (std::size_t s = 0; s < it->second.second; ++s) {
          Vec z = cc.col(it->second.first + s);
          Vec cls = HL.project.apply(z);
          if (!ker.contains(cls) || chosen.contains(cls)) continue;
          chosen = sum(chosen, Subspace::span(Matrix::column(f, cls)));
          attach[m].push_back(z);
        }
      }
      Matrix rest = quotient_basis(chosen, ker);
      if (rest.cols()) {
        out.minimal = false;
        std::ostringstream os;
        os << "at " << p.label(b) << ": " << rest.cols() << " class(es) in degree " << m
           << " die without coming from a predecessor sphere";
        out.diagnostics.push_back(os.str());
      }
      for (std::size_t j = 0; j < rest.cols(); ++j) attach[m].push_back(HL.reps.apply(rest.col(j)));
      Subspace im = image(pi);
      Matrix co = quotient_basis(im, Subspace::full(f, HX.dim));
      for (std::size_t j = 0; j < co.cols(); ++j) sph[m].push_back(HX.reps.apply(co.col(j)));
    }
    // Assemble: degree n = L_n + disks (attached to cycles of degree n-1) + spheres.
    std::vector<std::size_t> dims(top + 2, 0);
    auto ndisk = [&](int n) { return n >= 1 && n - 1 <= top ? attach[n - 1].size() : 0; };
    auto nsph = [&](int n) { return n <= top ? sph[n].size() : 0; };
    for (int n = 0; n <= top + 1; ++n) dims[n] = L.dim(n) + ndisk(n) + nsph(n);
    std::vector<Matrix> dd(dims.size(), Matrix());
    for (int n = 1; n <= top + 1; ++n) {
      Matrix m(f, dims[n - 1], dims[n]);
      m.put(0, 0, L.d(n));
      for (std::size_t j = 0; j < ndisk(n); ++j)
        for (std::size_t i = 0; i < L.dim(n - 1); ++i) m.at(i, L.dim(n) + j) = attach[n - 1][j][i];
      dd[n] = m;
    }
    ChainComplex R(f, dims, dd);
    Comps ph;
    for (int n = 0; n < R.length(); ++n) {
      Matrix m(f, X.dim(n), R.dim(n));
      m.put(0, 0, at_or_zero(f, *lam, n, X.dim(n), L.dim(n)));
      for (std::size_t j = 0; j < ndisk(n); ++j) {
        Vec target = at_or_zero(f, *lam, n - 1, X.dim(n - 1), L.dim(n - 1)).apply(attach[n - 1][j]);
        auto y = solve(X.d(n), target);
        if (!y) throw std::logic_error("minimal replacement: dying class is not a boundary");
        m.set_col(L.dim(n) + j, *y);
      }
      for (std::size_t j = 0; j < nsph(n); ++j) m.set_col(L.dim(n) + ndisk(n) + j, sph[n][j]);
      ph.push_back(m);
    }
    for (int n = 0; n <= top; ++n)
      if (nsph(n)) spheres[b][n] = {L.dim(n) + ndisk(n), nsph(n)};
    objs[b] = R;
    phi[b] = ph;
    for (std::size_t i = 0; i < pc.preds.size(); ++i) {
      if (!p.is_cover(pc.preds[i], b)) continue;
      Comps c;
      for (int n = 0; n < std::max(R.length(), objs[pc.preds[i]].length()); ++n) {
        Matrix inc(f, R.dim(n), L.dim(n));
        inc.put(0, 0, Matrix::identity(f, L.dim(n)));
        c.push_back(inc * at_or_zero(f, pc.colim.cocone[i], n, L.dim(n), objs[pc.preds[i]].dim(n)));
      }
      covers[{pc.preds[i], b}] = c;
    }
  }
  out.model = Diagram(p, objs, covers);
  for (Obj a = 0; a < d.size(); ++a) {
    out.to_original.emplace_back(objs[a], d.at(a), phi[a]);
    if (!is_quasi_iso(out.to_original.back())) {
      out.quasi_iso = false;
      out.diagnostics.push_back("model at " + p.label(a) + " is not quasi-isomorphic");
    }
  }
  CofibrancyReport rep = minimal_cofibrant_check(out.model);
  out.latching_injective = rep.latching_mono;
  for (auto& s : rep.issues) out.diagnostics.push_back(s);
  return out;
}

CofibrancyReport minimal_cofibrant_check(const Diagram& d) {
  CofibrancyReport rep;
  const Poset& p = d.index();
  const Field& f = d.field();
  for (Obj b = 0; b < d.size(); ++b) {
    const ChainComplex& X = d.at(b);
    if (!split_spheres_disks(X).verified) {
      rep.splittable = false;
      rep.issues.push_back("(a) " + p.label(b) + ": sphere/disk splitting failed");
    }
    Latching l = latching(d, b);
    const ChainComplex& L = l.colim.complex;
    for (int n = 0; n < std::max(L.length(), X.length()); ++n) {
      Matrix lm = at_or_zero(f, l.map, n, X.dim(n), L.dim(n));
      if (rank(lm) != L.dim(n)) {
        rep.latching_mono = false;
        rep.issues.push_back("(c) " + p.label(b) + ": latching map not injective in degree " +
                             std::to_string(n));
      }
      Subspace B = image(X.d(n + 1));
      Subspace Zl = map_subspace(lm, kernel(L.d(n)));
      if (!Zl.contains(B)) {
        rep.disks_coned = false;
        rep.issues.push_back("(b) " + p.label(b) + ": boundaries in degree " + std::to_string(n) +
                             " do not come from latching cycles");
      }
    }
  }
  return rep;
}

}  // namespace hd
