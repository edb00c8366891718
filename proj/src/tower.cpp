#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "hodiag/hybrid.hpp"

namespace hd {

namespace {

// Antichains of size 2..limit among candidates (sorted by label). With strict
// set, throws std::length_error when a larger antichain exists.
void antichains(const Poset& p, const std::vector<Obj>& cand, std::size_t limit, bool strict, std::size_t from,
                std::vector<Obj>& cur, std::vector<std::vector<Obj>>& out) {
  if (cur.size() >= 2) out.push_back(cur);
  for (std::size_t i = from; i < cand.size(); ++i) {
    bool ok = true;
    for (Obj c : cur) ok = ok && !p.comparable(c, cand[i]);
    if (!ok) continue;
    if (cur.size() == limit) {
      if (strict) throw std::length_error("antichain above " + p.label(cur.front()) + " exceeds the size limit");
      continue;
    }
    cur.push_back(cand[i]);
    antichains(p, cand, limit, strict, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<const FamilyValue*> Tower::level(int j) const {
  std::vector<const FamilyValue*> out;
  for (auto& v : values)
    if (v.target_degree() == j) out.push_back(&v);
  return out;
}

Tower build_tower(const Diagram& x, int k, std::size_t max_gamma) {
  Tower t;
  t.base = x.index();
  t.top = k;
  t.index.base = x.index();
  for (Obj a = 0; a < x.size(); ++a) {
    t.index.nodes.push_back({NodeKind::Base, x.index().label(a), a, {}, 0, {}});
    t.created.push_back(0);
    t.original.push_back(true);
  }
  for (auto [a, b] : x.index().covers()) t.index.edges.push_back({a, b, EdgeKind::Base});
  t.diagram = x;

  for (int w = 0; w < k; ++w) {
    const Poset J = t.diagram.index();
    const Diagram X = t.diagram;
    std::map<std::vector<Obj>, std::size_t> by_members;
    for (std::size_t i = 0; i < t.index.nodes.size(); ++i)
      if (t.index.nodes[i].kind == NodeKind::Colimit) {
        auto key = t.index.nodes[i].members;
        std::sort(key.begin(), key.end());
        by_members[key] = i;
      }
    std::vector<IndexNode> fresh;
    std::set<std::string> taken(J.labels().begin(), J.labels().end());
    struct Pending {
      Obj alpha;
      std::vector<Obj> gamma;
      std::size_t node;
      Matrix classes;
    };
    std::vector<Pending> pending;

    for (Obj alpha : J.topo_order()) {
      if (homology(X.at(alpha), w).dim == 0) continue;
      std::vector<Obj> cand;
      for (Obj u = 0; u < J.size(); ++u)
        if (t.original[u] && J.less(alpha, u)) cand.push_back(u);
      std::sort(cand.begin(), cand.end(), [&](Obj a, Obj b) { return J.label(a) < J.label(b); });
      std::vector<std::vector<Obj>> fams;
      std::vector<Obj> cur;
      // Families of size s only matter while w + s - 1 <= k.
      const std::size_t needed = std::max<std::size_t>(2, static_cast<std::size_t>(k - w + 1));
      antichains(J, cand, std::min(needed, max_gamma), needed > max_gamma, 0, cur, fams);
      for (auto& g : fams) {
        Subspace K = kernel_of(X, alpha, g, w);
        if (K.dim() == 0) continue;
        const int order = static_cast<int>(g.size()) - 1;
        if (w + order <= k) {
          std::vector<Obj> ub;
          for (Obj u : J.upper_bounds(g))
            if (t.original[u]) ub.push_back(u);
          for (Obj u : ub) {
            bool minimal = true;
            for (Obj v : ub) minimal = minimal && !J.less(v, u);
            if (minimal) t.values.push_back(family_value(X, {alpha, g, u}, w, K.basis(), t.original));
          }
        }
        if (g.size() == 2 && w + 1 <= k) {
          // Down-closure of the pair, so that everything below the new object
          // maps into it through a member and the extension stays commutative.
          std::vector<Obj> mem;
          for (Obj e2 : J.topo_order())
            if (J.leq(e2, g[0]) || J.leq(e2, g[1])) mem.push_back(e2);
          std::vector<Obj> key = mem;
          std::sort(key.begin(), key.end());
          std::size_t node;
          auto it = by_members.find(key);
          if (it != by_members.end()) {
            node = it->second;
          } else {
            node = t.index.nodes.size() + fresh.size();
            by_members[key] = node;
            std::string label = "colim[" + J.label(g[0]) + "," + J.label(g[1]) + "]";
            if (taken.count(label)) label += "/" + std::to_string(w + 1);
            taken.insert(label);
            fresh.push_back({NodeKind::Colimit, label, alpha, g, 0, mem});
          }
          pending.push_back({alpha, g, node, K.basis()});
        }
      }
    }
    if (!fresh.empty()) {
      ExtendedIndex idx;
      idx.base = J;
      for (Obj a = 0; a < J.size(); ++a) idx.nodes.push_back({NodeKind::Base, J.label(a), a, {}, 0, {}});
      for (auto [a, b] : J.covers()) idx.edges.push_back({a, b, EdgeKind::Base});
      std::vector<IndexEdge> added;
      for (std::size_t i = 0; i < fresh.size(); ++i) {
        const std::size_t node = J.size() + i;
        idx.nodes.push_back(fresh[i]);
        for (Obj m : fresh[i].members) added.push_back({m, node, EdgeKind::ColimitIn});
        for (Obj u : J.upper_bounds(fresh[i].gamma)) added.push_back({node, u, EdgeKind::ColimitOut});
      }
      idx.edges.insert(idx.edges.end(), added.begin(), added.end());
      IndExtension ext = extend_ind2(X, idx);
      for (auto& n : fresh) {
        t.index.nodes.push_back(n);
        t.created.push_back(w + 1);
        t.original.push_back(false);
      }
      t.index.edges.insert(t.index.edges.end(), added.begin(), added.end());
      t.diagram = ext.diagram;
    }
    for (auto& pd : pending)
      t.formal.push_back(family_value(t.diagram, {pd.alpha, pd.gamma, pd.node}, w, pd.classes));
  }
  std::sort(t.index.edges.begin(), t.index.edges.end());
  return t;
}

DerivedLevel derived_k(const Tower& t, int k) {
  DerivedLevel d;
  d.k = k;
  for (auto& v : t.values)
    if (v.target_degree() == k) d.values.push_back(v);
  for (auto& v : t.formal)
    if (v.target_degree() == k) d.formal.push_back(v);
  return d;
}

}  // namespace hd
