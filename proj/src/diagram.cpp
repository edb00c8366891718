#include "hodiag/diagram.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hd {

namespace {

Matrix comp_at(const Field& f, const Comps& c, int n, std::size_t rows, std::size_t cols) {
  if (n >= 0 && n < static_cast<int>(c.size())) return c[n];
  return Matrix(f, rows, cols);
}

Comps compose(const Field& f, const ChainComplex& a, const ChainComplex& c, const Comps& first,
              const ChainComplex& b, const Comps& second) {
  // second after first: a -> b -> c
  const int len = std::max({a.length(), b.length(), c.length()});
  Comps out;
  for (int n = 0; n < len; ++n)
    out.push_back(comp_at(f, second, n, c.dim(n), b.dim(n)) * comp_at(f, first, n, b.dim(n), a.dim(n)));
  return out;
}

Comps normalize(const ChainComplex& s, const ChainComplex& t, const Comps& c) {
  const int len = std::max(s.length(), t.length());
  Comps out;
  for (int n = 0; n < len; ++n) out.push_back(comp_at(s.field(), c, n, t.dim(n), s.dim(n)));
  return out;
}

Comps identity_comps(const ChainComplex& c) {
  Comps out;
  for (int n = 0; n < c.length(); ++n) out.push_back(Matrix::identity(c.field(), c.dim(n)));
  return out;
}

}  // namespace

Diagram::Diagram(Poset index, std::vector<ChainComplex> objects,
                 std::map<std::pair<Obj, Obj>, Comps> cover_maps)
    : index_(std::move(index)), objects_(std::move(objects)) {
  if (objects_.size() != index_.size())
    throw std::invalid_argument("diagram has " + std::to_string(objects_.size()) +
                                " complexes for " + std::to_string(index_.size()) + " objects");
  if (!objects_.empty()) field_ = objects_[0].field();
  for (auto& c : objects_)
    if (!(c.field() == field_)) throw std::invalid_argument("complexes over different fields");
  for (auto [a, b] : index_.covers()) {
    auto it = cover_maps.find({a, b});
    const std::string edge = index_.label(a) + "<" + index_.label(b);
    Comps c = it == cover_maps.end() ? Comps{} : it->second;
    std::string err = chain_map_defect(objects_[a], objects_[b], c);
    if (!err.empty()) throw std::invalid_argument("map " + edge + ": " + err);
    cover_[{a, b}] = normalize(objects_[a], objects_[b], c);
  }
  for (auto& [key, c] : cover_maps)
    if (!index_.is_cover(key.first, key.second))
      throw std::invalid_argument("map " + index_.label(key.first) + "<" + index_.label(key.second) +
                                  " is not along a Hasse cover");
  for (Obj b : index_.topo_order()) {
    comp_[{b, b}] = identity_comps(objects_[b]);
    for (Obj a : index_.predecessors(b)) {
      for (Obj c : index_.lower_covers(b)) {
        if (!index_.leq(a, c)) continue;
        comp_[{a, b}] = compose(field_, objects_[a], objects_[b], comp_.at({a, c}), objects_[c],
                                cover_.at({c, b}));
        break;
      }
    }
  }
}

const Comps& Diagram::comps(Obj a, Obj b) const {
  auto it = comp_.find({a, b});
  if (it == comp_.end())
    throw std::invalid_argument("no arrow " + index_.label(a) + " -> " + index_.label(b));
  return it->second;
}

Matrix Diagram::map(Obj a, Obj b, int n) const {
  return comp_at(field_, comps(a, b), n, objects_[b].dim(n), objects_[a].dim(n));
}

ChainMap Diagram::chain_map(Obj a, Obj b) const { return ChainMap(objects_[a], objects_[b], comps(a, b)); }

int Diagram::length() const {
  int l = 0;
  for (auto& c : objects_) l = std::max(l, c.length());
  return l;
}

std::string validate(const Diagram& d) {
  const Poset& p = d.index();
  for (auto& [key, c] : d.cover_maps()) {
    std::string err = chain_map_defect(d.at(key.first), d.at(key.second), c);
    if (!err.empty()) return "map " + p.label(key.first) + "<" + p.label(key.second) + ": " + err;
  }
  for (Obj b : p.topo_order())
    for (Obj a : p.predecessors(b)) {
      std::optional<Obj> first;
      for (Obj c : p.lower_covers(b)) {
        if (!p.leq(a, c)) continue;
        if (!first) {
          first = c;
          continue;
        }
        for (int n = 0; n < d.length(); ++n) {
          Matrix via1 = d.map(*first, b, n) * d.map(a, *first, n);
          Matrix via2 = d.map(c, b, n) * d.map(a, c, n);
          if (!(via1 == via2)) {
            std::ostringstream os;
            os << "square " << p.label(a) << " -> " << p.label(b) << " via " << p.label(*first)
               << " and " << p.label(c) << " does not commute in degree " << n;
            return os.str();
          }
        }
      }
    }
  return {};
}

// ---- homology diagram ----

HomologyDiagram::HomologyDiagram(const Diagram& d, int max_degree) : d_(d) {
  top_ = max_degree < 0 ? d.length() : max_degree;
  h_.resize(d.size());
  for (Obj a = 0; a < d.size(); ++a)
    for (int k = 0; k <= top_; ++k) h_[a].push_back(homology(d.at(a), k));
}

const Homology& HomologyDiagram::at(Obj a, int k) const {
  if (k < 0 || k > top_) throw std::out_of_range("homology degree out of range");
  return h_[a][k];
}

std::size_t HomologyDiagram::dim(Obj a, int k) const {
  if (k < 0 || k > top_) return 0;
  return h_[a][k].dim;
}

Matrix HomologyDiagram::map(Obj a, Obj b, int k) const {
  auto key = std::make_tuple(a, b, k);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  Matrix m = induced(at(a, k), at(b, k), d_.map(a, b, k));
  cache_.emplace(key, m);
  return m;
}

// ---- colimits ----

Colimit colimit(const Field& f, const ColimitInput& in) {
  Colimit out;
  int len = 0;
  for (auto& c : in.objs) len = std::max(len, c.length());
  std::vector<std::vector<std::size_t>> off(len + 1);
  std::vector<std::size_t> total(len + 1, 0);
  for (int n = 0; n <= len; ++n) {
    for (auto& c : in.objs) {
      off[n].push_back(total[n]);
      total[n] += c.dim(n);
    }
  }
  std::vector<std::size_t> qdims(len, 0);
  for (int n = 0; n < len; ++n) {
    std::vector<Vec> rel;
    for (auto& [i, j, fm] : in.maps) {
      Matrix m = comp_at(f, fm, n, in.objs[j].dim(n), in.objs[i].dim(n));
      for (std::size_t v = 0; v < in.objs[i].dim(n); ++v) {
        Vec r(total[n], 0);
        r[off[n][i] + v] = 1;
        for (std::size_t w = 0; w < in.objs[j].dim(n); ++w)
          r[off[n][j] + w] = f.sub(r[off[n][j] + w], m(w, v));
        rel.push_back(r);
      }
    }
    Subspace R = Subspace::span(Matrix::from_columns(f, total[n], rel));
    Matrix Q = complement(R).basis();
    out.relations.push_back(R.basis());
    out.lift.push_back(Q);
    qdims[n] = Q.cols();
    if (total[n] == 0)
      out.project.push_back(Matrix(f, 0, 0));
    else
      out.project.push_back(inverse(Q.hcat(R.basis())).block(0, 0, Q.cols(), total[n]));
  }
  auto big_d = [&](int n) {
    Matrix D(f, total[n - 1], total[n]);
    for (std::size_t i = 0; i < in.objs.size(); ++i)
      D.put(off[n - 1][i], off[n][i], in.objs[i].d(n));
    return D;
  };
  std::vector<Matrix> d(len, Matrix());
  for (int n = 1; n < len; ++n) d[n] = out.project[n - 1] * big_d(n) * out.lift[n];
  out.complex = ChainComplex(f, qdims, d);
  for (std::size_t i = 0; i < in.objs.size(); ++i) {
    Comps c;
    for (int n = 0; n < len; ++n) {
      Matrix inc(f, total[n], in.objs[i].dim(n));
      inc.put(off[n][i], 0, Matrix::identity(f, in.objs[i].dim(n)));
      c.push_back(out.project[n] * inc);
    }
    out.cocone.push_back(normalize(in.objs[i], out.complex, c));
  }
  return out;
}

std::optional<Comps> colimit_factor(const Field& f, const ColimitInput& in, const Colimit& c,
                                    const ChainComplex& target, const std::vector<Comps>& legs) {
  const int len = std::max(c.complex.length(), target.length());
  Comps u;
  for (int n = 0; n < len; ++n) {
    std::size_t tot = 0;
    for (auto& o : in.objs) tot += o.dim(n);
    Matrix F(f, target.dim(n), tot);
    std::size_t off = 0;
    for (std::size_t i = 0; i < in.objs.size(); ++i) {
      F.put(0, off, comp_at(f, legs[i], n, target.dim(n), in.objs[i].dim(n)));
      off += in.objs[i].dim(n);
    }
    if (n < static_cast<int>(c.lift.size())) {
      if (!(F * c.relations[n]).is_zero()) return std::nullopt;
      u.push_back(F * c.lift[n]);
    } else {
      u.push_back(Matrix(f, target.dim(n), 0));
    }
  }
  if (!chain_map_defect(c.complex, target, u).empty()) return std::nullopt;
  return u;
}

namespace {
ColimitInput restrict_to(const Diagram& d, const std::vector<Obj>& sub) {
  ColimitInput in;
  for (Obj x : sub) in.objs.push_back(d.at(x));
  const Poset& p = d.index();
  for (std::size_t i = 0; i < sub.size(); ++i)
    for (std::size_t j = 0; j < sub.size(); ++j) {
      if (!p.less(sub[i], sub[j])) continue;
      bool cover = true;
      for (Obj z : sub) cover = cover && !(p.less(sub[i], z) && p.less(z, sub[j]));
      if (cover) in.maps.emplace_back(i, j, d.comps(sub[i], sub[j]));
    }
  return in;
}
}  // namespace

SubColimit colimit_over(const Diagram& d, const std::vector<Obj>& sub) {
  SubColimit out;
  out.sub = sub;
  ColimitInput in = restrict_to(d, sub);
  out.colim = colimit(d.field(), in);
  for (Obj b : d.index().upper_bounds(sub)) {
    std::vector<Comps> legs;
    for (Obj x : sub) legs.push_back(d.comps(x, b));
    auto u = colimit_factor(d.field(), in, out.colim, d.at(b), legs);
    if (!u) {
      out.universal_ok = false;
      continue;
    }
    // u after each cocone leg must reproduce the diagram map.
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (int n = 0; n < d.length(); ++n) {
        Matrix lhs = comp_at(d.field(), *u, n, d.at(b).dim(n), out.colim.complex.dim(n)) *
                     comp_at(d.field(), out.colim.cocone[i], n, out.colim.complex.dim(n), d.at(sub[i]).dim(n));
        if (!(lhs == d.map(sub[i], b, n))) out.universal_ok = false;
      }
    out.to_upper[b] = *u;
  }
  return out;
}

Latching latching(const Diagram& d, Obj b) {
  Latching out;
  out.preds = d.index().predecessors(b);
  ColimitInput in = restrict_to(d, out.preds);
  out.colim = colimit(d.field(), in);
  std::vector<Comps> legs;
  for (Obj x : out.preds) legs.push_back(d.comps(x, b));
  auto u = colimit_factor(d.field(), in, out.colim, d.at(b), legs);
  if (!u) throw std::logic_error("latching map does not factor: diagram does not commute");
  out.map = *u;
  return out;
}

// ---- truncations ----

DiagramTruncation truncate_diagram(const Diagram& d, int k) {
  const Field& f = d.field();
  std::vector<Truncation> tr;
  std::vector<Matrix> sect;  // section of p at degree k
  std::vector<ChainComplex> objs;
  for (Obj a = 0; a < d.size(); ++a) {
    tr.push_back(truncate(d.at(a), k));
    sect.push_back(complement(image(d.at(a).d(k + 1))).basis());
    objs.push_back(tr.back().complex);
  }
  Diagram out = diagram_from(d.index(), objs, [&](Obj a, Obj b) {
    Comps c;
    for (int n = 0; n <= k; ++n) {
      Matrix s = n < k ? Matrix::identity(f, d.at(a).dim(n)) : sect[a];
      c.push_back(tr[b].map.at(n) * d.map(a, b, n) * s);
    }
    return c;
  });
  std::vector<ChainMap> maps;
  for (auto& t : tr) maps.push_back(t.map);
  return {out, maps};
}

DiagramTruncation conn_cover_diagram(const Diagram& d, int k) {
  const Field& f = d.field();
  std::vector<Truncation> cv;
  std::vector<ChainComplex> objs;
  for (Obj a = 0; a < d.size(); ++a) {
    cv.push_back(conn_cover(d.at(a), k));
    objs.push_back(cv.back().complex);
  }
  Diagram out = diagram_from(d.index(), objs, [&](Obj a, Obj b) {
    Comps c;
    const int len = std::max(objs[a].length(), objs[b].length());
    for (int n = 0; n < len; ++n) {
      if (n < k) {
        c.push_back(Matrix(f, objs[b].dim(n), objs[a].dim(n)));
      } else if (n == k) {
        Subspace Zb = kernel(d.at(b).d(k));
        Matrix img = d.map(a, b, n) * cv[a].map.at(n);
        c.push_back(img.select_rows(Zb.pivots()));
      } else {
        c.push_back(d.map(a, b, n));
      }
    }
    return c;
  });
  std::vector<ChainMap> maps;
  for (auto& t : cv) maps.push_back(t.map);
  return {out, maps};
}

bool is_k_formal(const Diagram& d, int k) {
  for (auto& c : d.objects())
    for (int n = 1; n <= k; ++n)
      if (!c.d(n).is_zero()) return false;
  return true;
}

bool is_k_hybrid(const Diagram& d, int k) {
  return is_k_formal(d, k) && minimal_cofibrant_check(conn_cover_diagram(d, k).diagram).ok();
}

// ---- stage-2 Ind extension ----

IndExtension extend_ind2(const Diagram& d, const ExtendedIndex& idx) {
  Poset P = idx.as_poset();
  std::vector<ChainComplex> objs;
  std::map<std::size_t, SubColimit> colims;
  for (std::size_t i = 0; i < idx.nodes.size(); ++i) {
    const IndexNode& nd = idx.nodes[i];
    if (nd.kind == NodeKind::Base) {
      objs.push_back(d.at(nd.base));
    } else if (nd.kind == NodeKind::Colimit) {
      colims[i] = colimit_over(d, nd.members);
      objs.push_back(colims[i].colim.complex);
    } else {
      throw std::invalid_argument("extend_ind2: index has non-colimit formal objects");
    }
  }
  const Poset& base = d.index();
  auto member_pos = [&](std::size_t c, Obj x) -> std::optional<std::size_t> {
    auto& m = idx.nodes[c].members;
    auto it = std::find(m.begin(), m.end(), x);
    if (it == m.end()) return std::nullopt;
    return static_cast<std::size_t>(it - m.begin());
  };
  Diagram out = diagram_from(P, objs, [&](Obj u, Obj v) -> Comps {
    const IndexNode& nu = idx.nodes[u];
    const IndexNode& nv = idx.nodes[v];
    if (nu.kind == NodeKind::Base && nv.kind == NodeKind::Base) return d.comps(nu.base, nv.base);
    if (nu.kind == NodeKind::Base) {
      const SubColimit& sc = colims.at(v);
      for (std::size_t i = 0; i < sc.sub.size(); ++i)
        if (base.leq(nu.base, sc.sub[i]))
          return compose(d.field(), d.at(nu.base), objs[v], d.comps(nu.base, sc.sub[i]), d.at(sc.sub[i]),
                         sc.colim.cocone[i]);
      throw std::logic_error("extend_ind2: base object not below colimit");
    }
    if (nv.kind == NodeKind::Base) {
      const SubColimit& sc = colims.at(u);
      auto it = sc.to_upper.find(nv.base);
      if (it == sc.to_upper.end()) throw std::logic_error("extend_ind2: missing universal map");
      return it->second;
    }
    const SubColimit& su = colims.at(u);
    const SubColimit& sv = colims.at(v);
    ColimitInput in = restrict_to(d, su.sub);
    std::vector<Comps> legs;
    for (Obj x : su.sub) {
      auto pos = member_pos(v, x);
      if (!pos) throw std::logic_error("extend_ind2: nested colimit is not a sub-diagram");
      legs.push_back(sv.colim.cocone[*pos]);
    }
    auto f = colimit_factor(d.field(), in, su.colim, objs[v], legs);
    if (!f) throw std::logic_error("extend_ind2: nested colimit map does not factor");
    return *f;
  });
  return {idx, out};
}

}  // namespace hd
