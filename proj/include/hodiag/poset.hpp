#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

namespace hd {

using Obj = std::size_t;

// Finite poset given by labels and generating relations a < b. The Hasse
// diagram is recovered by transitive reduction.
class Poset {
 public:
  Poset() = default;
  // Throws std::invalid_argument on duplicate labels, unknown endpoints or cycles.
  Poset(std::vector<std::string> labels, const std::vector<std::pair<Obj, Obj>>& relations);
  static Poset from_labels(std::vector<std::string> labels,
                           const std::vector<std::pair<std::string, std::string>>& rel);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(Obj a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<Obj> index_of(const std::string& l) const;
  Obj at(const std::string& l) const;

  bool leq(Obj a, Obj b) const { return le_[a][b]; }
  bool less(Obj a, Obj b) const { return a != b && le_[a][b]; }
  bool comparable(Obj a, Obj b) const { return le_[a][b] || le_[b][a]; }
  // Hasse edges (a, b) with a covered by b, sorted.
  const std::vector<std::pair<Obj, Obj>>& covers() const { return covers_; }
  bool is_cover(Obj a, Obj b) const;
  // Objects in a linear extension, ties broken by label.
  const std::vector<Obj>& topo_order() const { return topo_; }
  std::vector<Obj> predecessors(Obj b) const;  // strict, in topo order
  std::vector<Obj> successors(Obj a) const;    // strict, in topo order
  std::vector<Obj> lower_covers(Obj b) const;
  std::vector<Obj> upper_covers(Obj a) const;
  // Minimal elements among common strict upper bounds of all of s.
  std::vector<Obj> minimal_joins(const std::vector<Obj>& s) const;
  std::vector<Obj> upper_bounds(const std::vector<Obj>& s) const;  // b >= every s
  bool is_antichain(const std::vector<Obj>& s) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, Obj> index_;
  std::vector<std::vector<bool>> le_;
  std::vector<std::pair<Obj, Obj>> covers_;
  std::vector<Obj> topo_;
};

struct Lattice {
  std::vector<Obj> minima, maxima;
  std::vector<int> level;  // longest Hasse chain from a minimum
};
Lattice validate_lattice(const Poset& p);

// (alpha, Gamma, beta): Gamma an antichain above alpha, beta a common join.
struct PathObject {
  Obj alpha = 0;
  std::vector<Obj> gamma;  // sorted by label
  std::optional<Obj> beta;
  bool operator==(const PathObject&) const = default;
};

std::string describe(const Poset& p, const PathObject& po);

// All antichains of size >= 2 strictly above alpha (and strictly below beta when
// given), each emitted once per minimal join (or with the given beta). Throws
// std::length_error if some antichain exceeds max_gamma.
std::vector<PathObject> incomparable_families(const Poset& p, Obj alpha,
                                              std::optional<Obj> beta = std::nullopt,
                                              std::size_t max_gamma = 4);
// Antichains only (no join expansion), sorted.
std::vector<std::vector<Obj>> antichains_above(const Poset& p, Obj alpha,
                                               std::optional<Obj> beta, std::size_t max_gamma);

// Witness for (alpha, G', b') -> (alpha, G, b): assignment[j] = index into G of
// some gamma_i >= gamma'_j. Lexicographically first assignment.
std::optional<std::vector<std::size_t>> path_morphisms(const Poset& p, const PathObject& from,
                                                       const PathObject& to);

enum class NodeKind { Base, Kernel, Pullback, Colimit };

struct IndexNode {
  NodeKind kind = NodeKind::Base;
  std::string label;
  Obj base = 0;                 // Base: the object; Kernel/Pullback: alpha (resp. alpha')
  std::vector<Obj> gamma;       // Kernel: Gamma'; Colimit: Gamma
  std::size_t kernel_node = 0;  // Pullback: the kernel node pulled back
  std::vector<Obj> members;     // Colimit: the sub-poset
};

enum class EdgeKind {
  Base,          // Hasse cover in the base poset
  FormalDiff,    // K_S -> K_{S minus s}, degree +1
  KernelToRoot,  // j_alpha
  Evaluation,    // K_pair -> beta, degree +1
  PathMorphism,  // K_pair' -> K_pair
  PullbackLeg,   // PB -> K or PB -> alpha'
  ColimitIn,     // member -> colimit
  ColimitOut,    // colimit -> upper bound
  ColimitNest    // nested colimits
};

struct IndexEdge {
  std::size_t from, to;
  EdgeKind kind;
  bool operator<(const IndexEdge& o) const {
    return std::tie(from, to, kind) < std::tie(o.from, o.to, o.kind);
  }
};

// Base poset extended by formal objects. Validated to be acyclic.
struct ExtendedIndex {
  Poset base;
  std::vector<IndexNode> nodes;  // base objects first, in base index order
  std::vector<IndexEdge> edges;
  Poset as_poset() const;
  std::optional<std::size_t> find(const std::string& label) const;
};

ExtendedIndex derived_index(const Poset& p, std::size_t max_gamma = 4);
ExtendedIndex ind2_index(const Poset& p, std::size_t max_gamma = 4);

// {e : alpha <= e <= some gamma}, in topo order.
std::vector<Obj> interval_below(const Poset& p, Obj alpha, const std::vector<Obj>& gamma);
std::string kernel_label(const Poset& p, Obj alpha, const std::vector<Obj>& gamma);
std::string colimit_label(const Poset& p, Obj alpha, const std::vector<Obj>& gamma);

}  // namespace hd
