#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hodiag/chain.hpp"
#include "hodiag/poset.hpp"

namespace hd {

using Comps = std::vector<Matrix>;  // per-degree components of a chain map

// Functor from a finite poset to chain complexes: one complex per object and
// one chain map per Hasse cover. Composites along every a <= b are cached.
class Diagram {
 public:
  Diagram() = default;
  // Checks component shapes and the chain-map condition on every cover (throws
  // std::invalid_argument naming the edge). Commutativity is checked by validate().
  Diagram(Poset index, std::vector<ChainComplex> objects,
          std::map<std::pair<Obj, Obj>, Comps> cover_maps);

  const Poset& index() const { return index_; }
  const Field& field() const { return field_; }
  std::size_t size() const { return objects_.size(); }
  const ChainComplex& at(Obj a) const { return objects_[a]; }
  const std::vector<ChainComplex>& objects() const { return objects_; }
  const std::map<std::pair<Obj, Obj>, Comps>& cover_maps() const { return cover_; }
  // Composite a -> b (identity when a == b). Throws if a is not below b.
  const Comps& comps(Obj a, Obj b) const;
  Matrix map(Obj a, Obj b, int n) const;
  ChainMap chain_map(Obj a, Obj b) const;
  int length() const;  // max length over objects

 private:
  Field field_;
  Poset index_;
  std::vector<ChainComplex> objects_;
  std::map<std::pair<Obj, Obj>, Comps> cover_;
  std::map<std::pair<Obj, Obj>, Comps> comp_;
};

// Empty when every arrow is a chain map and every pair of parallel paths agrees;
// otherwise names the first violation.
std::string validate(const Diagram& d);

// Objectwise homology with induced maps on the deterministic representatives.
class HomologyDiagram {
 public:
  HomologyDiagram() = default;
  HomologyDiagram(const Diagram& d, int max_degree = -1);
  const Homology& at(Obj a, int k) const;
  std::size_t dim(Obj a, int k) const;
  Matrix map(Obj a, Obj b, int k) const;  // H_k(a) -> H_k(b)
  int max_degree() const { return top_; }
  const Diagram& diagram() const { return d_; }

 private:
  Diagram d_;
  int top_ = 0;
  std::vector<std::vector<Homology>> h_;
  mutable std::map<std::tuple<Obj, Obj, int>, Matrix> cache_;
};

// Colimit of a finite diagram of complexes given by objects and maps along
// pairs i -> j (any generating set of relations).
struct Colimit {
  ChainComplex complex;
  std::vector<Comps> cocone;  // cocone[i]: objs[i] -> colimit
  Comps lift;                 // per degree: colimit basis as vectors of the direct sum
  Comps project;              // per degree: direct sum -> colimit
  Comps relations;            // per degree: basis of the relation subspace
};
struct ColimitInput {
  std::vector<ChainComplex> objs;
  std::vector<std::tuple<std::size_t, std::size_t, Comps>> maps;
};
Colimit colimit(const Field& f, const ColimitInput& in);
// Factor a cocone (maps objs[i] -> target) through the colimit. Returns nullopt
// when the cocone does not respect the relations.
std::optional<Comps> colimit_factor(const Field& f, const ColimitInput& in, const Colimit& c,
                                    const ChainComplex& target, const std::vector<Comps>& legs);

struct SubColimit {
  std::vector<Obj> sub;
  Colimit colim;
  // Universal maps to every common upper bound of sub in the index.
  std::map<Obj, Comps> to_upper;
  bool universal_ok = true;
};
SubColimit colimit_over(const Diagram& d, const std::vector<Obj>& sub);

// Latching object of b (colimit over strict predecessors) and the latching map.
struct Latching {
  Colimit colim;
  std::vector<Obj> preds;
  Comps map;  // colim -> X(b)
};
Latching latching(const Diagram& d, Obj b);

struct Replacement {
  Diagram model;
  std::vector<ChainMap> to_original;  // objectwise weak equivalences
  bool latching_injective = true;
  bool quasi_iso = true;
  bool minimal = true;
  std::vector<std::string> diagnostics;
};

Replacement reedy_cofibrant_replace(const Diagram& d);
Replacement minimal_cofibrant_replace(const Diagram& d);

struct CofibrancyReport {
  bool splittable = true;    // clause (a)
  bool disks_coned = true;   // clause (b), boundaries come from latching cycles
  bool latching_mono = true; // clause (c)
  std::vector<std::string> issues;
  bool ok() const { return splittable && disks_coned && latching_mono; }
};
CofibrancyReport minimal_cofibrant_check(const Diagram& d);

// Objectwise truncation / connected cover with induced maps.
struct DiagramTruncation {
  Diagram diagram;
  std::vector<ChainMap> maps;  // original -> truncation, or cover -> original
};
DiagramTruncation truncate_diagram(const Diagram& d, int k);
DiagramTruncation conn_cover_diagram(const Diagram& d, int k);

bool is_k_formal(const Diagram& d, int k);
bool is_k_hybrid(const Diagram& d, int k);

// Diagram over the index extended by formal colimit objects.
struct IndExtension {
  ExtendedIndex index;
  Diagram diagram;  // over index.as_poset()
};
IndExtension extend_ind2(const Diagram& d, const ExtendedIndex& idx);

// Build a diagram over a poset from objects and a map function defined on covers.
template <class F>
Diagram diagram_from(const Poset& p, std::vector<ChainComplex> objs, F&& cover_map) {
  std::map<std::pair<Obj, Obj>, Comps> m;
  for (auto [a, b] : p.covers()) m[{a, b}] = cover_map(a, b);
  return Diagram(p, std::move(objs), std::move(m));
}

}  // namespace hd
