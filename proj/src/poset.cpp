#include "hodiag/poset.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace hd {

Poset::Poset(std::vector<std::string> labels, const std::vector<std::pair<Obj, Obj>>& relations)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  for (Obj i = 0; i < n; ++i)
    if (!index_.emplace(labels_[i], i).second)
      throw std::invalid_argument("duplicate object label '" + labels_[i] + "'");
  le_.assign(n, std::vector<bool>(n, false));
  for (Obj i = 0; i < n; ++i) le_[i][i] = true;
  for (auto [a, b] : relations) {
    if (a >= n || b >= n) throw std::invalid_argument("relation endpoint out of range");
    if (a == b) throw std::invalid_argument("self-relation on '" + labels_[a] + "'");
    le_[a][b] = true;
  }
  // Warshall closure.
  for (Obj k = 0; k < n; ++k)
    for (Obj i = 0; i < n; ++i)
      if (le_[i][k])
        for (Obj j = 0; j < n; ++j)
          if (le_[k][j]) le_[i][j] = true;
  for (Obj i = 0; i < n; ++i)
    for (Obj j = i + 1; j < n; ++j)
      if (le_[i][j] && le_[j][i])
        throw std::invalid_argument("relations contain a cycle through '" + labels_[i] + "' and '" +
                                    labels_[j] + "'");
  for (Obj a = 0; a < n; ++a)
    for (Obj b = 0; b < n; ++b) {
      if (!less(a, b)) continue;
      bool cover = true;
      for (Obj c = 0; c < n && cover; ++c)
        if (less(a, c) && less(c, b)) cover = false;
      if (cover) covers_.emplace_back(a, b);
    }
  // Kahn's algorithm, smallest label first.
  std::vector<std::size_t> indeg(n, 0);
  for (auto [a, b] : covers_) ++indeg[b];
  std::set<std::pair<std::string, Obj>> ready;
  for (Obj i = 0; i < n; ++i)
    if (!indeg[i]) ready.emplace(labels_[i], i);
  while (!ready.empty()) {
    Obj a = ready.begin()->second;
    ready.erase(ready.begin());
    topo_.push_back(a);
    for (auto [x, y] : covers_)
      if (x == a && --indeg[y] == 0) ready.emplace(labels_[y], y);
  }
}

Poset Poset::from_labels(std::vector<std::string> labels,
                         const std::vector<std::pair<std::string, std::string>>& rel) {
  std::map<std::string, Obj> idx;
  for (Obj i = 0; i < labels.size(); ++i) idx[labels[i]] = i;
  std::vector<std::pair<Obj, Obj>> r;
  for (auto& [a, b] : rel) {
    auto ia = idx.find(a), ib = idx.find(b);
    if (ia == idx.end()) throw std::invalid_argument("unknown object '" + a + "'");
    if (ib == idx.end()) throw std::invalid_argument("unknown object '" + b + "'");
    r.emplace_back(ia->second, ib->second);
  }
  return Poset(std::move(labels), r);
}

std::optional<Obj> Poset::index_of(const std::string& l) const {
  auto it = index_.find(l);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Obj Poset::at(const std::string& l) const {
  auto i = index_of(l);
  if (!i) throw std::invalid_argument("unknown object '" + l + "'");
  return *i;
}

bool Poset::is_cover(Obj a, Obj b) const {
  return std::binary_search(covers_.begin(), covers_.end(), std::make_pair(a, b));
}

std::vector<Obj> Poset::predecessors(Obj b) const {
  std::vector<Obj> out;
  for (Obj a : topo_)
    if (less(a, b)) out.push_back(a);
  return out;
}

std::vector<Obj> Poset::successors(Obj a) const {
  std::vector<Obj> out;
  for (Obj b : topo_)
    if (less(a, b)) out.push_back(b);
  return out;
}

std::vector<Obj> Poset::lower_covers(Obj b) const {
  std::vector<Obj> out;
  for (Obj a : topo_)
    if (is_cover(a, b)) out.push_back(a);
  return out;
}

std::vector<Obj> Poset::upper_covers(Obj a) const {
  std::vector<Obj> out;
  for (Obj b : topo_)
    if (is_cover(a, b)) out.push_back(b);
  return out;
}

std::vector<Obj> Poset::upper_bounds(const std::vector<Obj>& s) const {
  std::vector<Obj> out;
  for (Obj b : topo_) {
    bool ok = true;
    for (Obj x : s) ok = ok && leq(x, b);
    if (ok) out.push_back(b);
  }
  return out;
}

std::vector<Obj> Poset::minimal_joins(const std::vector<Obj>& s) const {
  std::vector<Obj> ub;
  for (Obj b : upper_bounds(s))
    if (std::find(s.begin(), s.end(), b) == s.end()) ub.push_back(b);
  std::vector<Obj> out;
  for (Obj b : ub) {
    bool minimal = true;
    for (Obj c : ub) minimal = minimal && !less(c, b);
    if (minimal) out.push_back(b);
  }
  std::sort(out.begin(), out.end(), [&](Obj x, Obj y) { return labels_[x] < labels_[y]; });
  return out;
}

bool Poset::is_antichain(const std::vector<Obj>& s) const {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (s[i] == s[j] || comparable(s[i], s[j])) return false;
  return true;
}

Lattice validate_lattice(const Poset& p) {
  Lattice l;
  l.level.assign(p.size(), 0);
  for (Obj a : p.topo_order()) {
    for (Obj c : p.lower_covers(a)) l.level[a] = std::max(l.level[a], l.level[c] + 1);
    if (p.lower_covers(a).empty()) l.minima.push_back(a);
    if (p.upper_covers(a).empty()) l.maxima.push_back(a);
  }
  return l;
}

std::string describe(const Poset& p, const PathObject& po) {
  std::string s = "(" + p.label(po.alpha) + ", {";
  for (std::size_t i = 0; i < po.gamma.size(); ++i) s += (i ? "," : "") + p.label(po.gamma[i]);
  s += "}";
  if (po.beta) s += ", " + p.label(*po.beta);
  return s + ")";
}

std::vector<std::vector<Obj>> antichains_above(const Poset& p, Obj alpha, std::optional<Obj> beta,
                                               std::size_t max_gamma) {
  std::vector<Obj> cand;
  for (Obj x = 0; x < p.size(); ++x)
    if (p.less(alpha, x) && (!beta || p.less(x, *beta))) cand.push_back(x);
  std::sort(cand.begin(), cand.end(), [&](Obj a, Obj b) { return p.label(a) < p.label(b); });
  std::vector<std::vector<Obj>> out;
  std::vector<Obj> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() >= 2) out.push_back(cur);
    for (std::size_t i = start; i < cand.size(); ++i) {
      bool ok = true;
      for (Obj c : cur) ok = ok && !p.comparable(c, cand[i]);
      if (!ok) continue;
      if (cur.size() + 1 > max_gamma)
        throw std::length_error("incomparable family above '" + p.label(alpha) +
                                "' exceeds max_gamma = " + std::to_string(max_gamma));
      cur.push_back(cand[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  auto key = [&](const std::vector<Obj>& v) {
    std::vector<std::string> k;
    for (Obj x : v) k.push_back(p.label(x));
    return k;
  };
  std::sort(out.begin(), out.end(), [&](auto& a, auto& b) { return key(a) < key(b); });
  return out;
}

std::vector<PathObject> incomparable_families(const Poset& p, Obj alpha, std::optional<Obj> beta,
                                              std::size_t max_gamma) {
  std::vector<PathObject> out;
  for (auto& g : antichains_above(p, alpha, beta, max_gamma)) {
    if (beta) {
      out.push_back({alpha, g, beta});
      continue;
    }
    auto joins = p.minimal_joins(g);
    if (joins.empty()) out.push_back({alpha, g, std::nullopt});
    for (Obj b : joins) out.push_back({alpha, g, b});
  }
  return out;
}

std::optional<std::vector<std::size_t>> path_morphisms(const Poset& p, const PathObject& from,
                                                       const PathObject& to) {
  if (from.alpha != to.alpha) return std::nullopt;
  if (from.beta && to.beta && !p.leq(*from.beta, *to.beta)) return std::nullopt;
  std::vector<std::size_t> assign;
  for (Obj g : from.gamma) {
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < to.gamma.size() && !hit; ++i)
      if (p.leq(g, to.gamma[i])) hit = i;
    if (!hit) return std::nullopt;
    assign.push_back(*hit);
  }
  return assign;
}

std::vector<Obj> interval_below(const Poset& p, Obj alpha, const std::vector<Obj>& gamma) {
  std::vector<Obj> out;
  for (Obj e : p.topo_order()) {
    if (!p.leq(alpha, e)) continue;
    bool below = false;
    for (Obj g : gamma) below = below || p.leq(e, g);
    if (below) out.push_back(e);
  }
  return out;
}

namespace {
std::string join_labels(const Poset& p, const std::vector<Obj>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + p.label(v[i]);
  return s;
}
}  // namespace

std::string kernel_label(const Poset& p, Obj alpha, const std::vector<Obj>& gamma) {
  return "K[" + p.label(alpha) + ";" + join_labels(p, gamma) + "]";
}

std::string colimit_label(const Poset& p, Obj alpha, const std::vector<Obj>& gamma) {
  return "colim[" + p.label(alpha) + ";" + join_labels(p, gamma) + "]";
}

Poset ExtendedIndex::as_poset() const {
  std::vector<std::string> labels;
  for (auto& n : nodes) labels.push_back(n.label);
  std::vector<std::pair<Obj, Obj>> rel;
  for (auto& e : edges) rel.emplace_back(e.from, e.to);
  return Poset(labels, rel);
}

std::optional<std::size_t> ExtendedIndex::find(const std::string& label) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].label == label) return i;
  return std::nullopt;
}

namespace {
ExtendedIndex base_index(const Poset& p) {
  ExtendedIndex ix;
  ix.base = p;
  for (Obj a = 0; a < p.size(); ++a) ix.nodes.push_back({NodeKind::Base, p.label(a), a, {}, 0, {}});
  for (auto [a, b] : p.covers()) ix.edges.push_back({a, b, EdgeKind::Base});
  return ix;
}

// Pairs (a', b') with a' <= b'_{sigma} for an injective sigma.
bool pair_leq(const Poset& p, const std::vector<Obj>& from, const std::vector<Obj>& to) {
  return (p.leq(from[0], to[0]) && p.leq(from[1], to[1])) ||
         (p.leq(from[0], to[1]) && p.leq(from[1], to[0]));
}
}  // namespace

ExtendedIndex derived_index(const Poset& p, std::size_t max_gamma) {
  ExtendedIndex ix = base_index(p);
  std::map<std::pair<Obj, std::vector<Obj>>, std::size_t> kern;
  for (Obj alpha : p.topo_order()) {
    for (auto& g : antichains_above(p, alpha, std::nullopt, max_gamma)) {
      if (p.minimal_joins(g).empty()) continue;
      kern[{alpha, g}] = ix.nodes.size();
      ix.nodes.push_back({NodeKind::Kernel, kernel_label(p, alpha, g), alpha, g, 0, {}});
    }
  }
  for (auto& [key, node] : kern) {
    auto& [alpha, g] = key;
    ix.edges.push_back({node, alpha, EdgeKind::KernelToRoot});
    if (g.size() >= 3) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::vector<Obj> s = g;
        s.erase(s.begin() + i);
        ix.edges.push_back({node, kern.at({alpha, s}), EdgeKind::FormalDiff});
      }
    } else {
      for (Obj b : p.minimal_joins(g)) ix.edges.push_back({node, b, EdgeKind::Evaluation});
      for (auto& [key2, node2] : kern) {
        if (key2.first != alpha || key2.second.size() != 2 || node2 == node) continue;
        if (pair_leq(p, g, key2.second)) ix.edges.push_back({node, node2, EdgeKind::PathMorphism});
      }
    }
  }
  // One layer of formal pullbacks along covers alpha' -> alpha.
  std::vector<std::pair<std::pair<Obj, std::vector<Obj>>, std::size_t>> ks(kern.begin(), kern.end());
  for (auto& [key, node] : ks) {
    for (Obj a2 : p.lower_covers(key.first)) {
      std::size_t pb = ix.nodes.size();
      IndexNode n{NodeKind::Pullback, "PB[" + p.label(a2) + ";" + ix.nodes[node].label + "]", a2,
                  key.second, node, {}};
      ix.nodes.push_back(n);
      ix.edges.push_back({pb, node, EdgeKind::PullbackLeg});
      ix.edges.push_back({pb, a2, EdgeKind::PullbackLeg});
    }
  }
  std::sort(ix.edges.begin(), ix.edges.end());
  ix.as_poset();  // validates acyclicity
  return ix;
}

ExtendedIndex ind2_index(const Poset& p, std::size_t max_gamma) {
  ExtendedIndex ix = base_index(p);
  std::map<std::vector<Obj>, std::size_t> seen;
  std::vector<std::size_t> colims;
  for (Obj alpha : p.topo_order()) {
    for (auto& g : antichains_above(p, alpha, std::nullopt, max_gamma)) {
      std::vector<Obj> mem = interval_below(p, alpha, g);
      std::vector<Obj> key = mem;
      std::sort(key.begin(), key.end());
      if (seen.count(key)) continue;
      std::size_t node = ix.nodes.size();
      seen[key] = node;
      colims.push_back(node);
      ix.nodes.push_back({NodeKind::Colimit, colimit_label(p, alpha, g), alpha, g, 0, mem});
      for (Obj m : mem) ix.edges.push_back({m, node, EdgeKind::ColimitIn});
      for (Obj b : p.upper_bounds(g)) ix.edges.push_back({node, b, EdgeKind::ColimitOut});
    }
  }
  for (std::size_t a : colims)
    for (std::size_t b : colims) {
      if (a == b) continue;
      auto& ma = ix.nodes[a].members;
      auto& mb = ix.nodes[b].members;
      if (ma.size() >= mb.size()) continue;
      bool sub = true;
      for (Obj x : ma) sub = sub && std::find(mb.begin(), mb.end(), x) != mb.end();
      if (sub) ix.edges.push_back({a, b, EdgeKind::ColimitNest});
    }
  std::sort(ix.edges.begin(), ix.edges.end());
  ix.as_poset();
  return ix;
}

}  // namespace hd
