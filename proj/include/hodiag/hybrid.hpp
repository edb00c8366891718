#pragma once

#include <string>
#include <vector>

#include "hodiag/derived.hpp"

namespace hd {

// Iterated extension of a cofibrant diagram by formal colimit objects.
// Level w adds, for every object alpha of the previous level and every pair of
// incomparable original objects above it whose degree-w kernel is nonzero, the
// colimit over everything below the pair. Families rooted anywhere are
// evaluated on original targets; pair families are also evaluated into their
// new colimit object (the formal differentials).
struct Tower {
  Poset base;                 // the original index
  int top = 0;                // highest total degree recorded
  ExtendedIndex index;        // base nodes first, then colimit nodes in creation order
  std::vector<int> created;   // per node: level that created it (0 for original objects)
  std::vector<bool> original; // per node
  Diagram diagram;            // over index.as_poset()
  std::vector<FamilyValue> values;  // targets are original objects
  std::vector<FamilyValue> formal;  // targets are colimit objects
  // Values of total degree j (degree of the root classes plus order).
  std::vector<const FamilyValue*> level(int j) const;
};

Tower build_tower(const Diagram& x, int k, std::size_t max_gamma = 4);

struct CellNote {
  int degree = 0;
  bool disk = false;      // disk cells kill latching classes, spheres add classes
  std::string source;     // what the cell accounts for
  Vec assigned;           // spheres: the class they stand for, in tower coordinates
};

// Minimally cofibrant diagram rebuilt from the homology maps and family values
// of a tower only: each object is the latching colimit plus disks on the
// classes predicted to die and spheres on the predicted cokernel.
struct ExpandedDerived {
  int k = 0;
  Diagram model;                                  // over the tower index
  std::vector<std::vector<Matrix>> iota;          // iota[x][j]: H_j(model) -> H_j(tower), j <= k
  std::vector<std::vector<CellNote>> cells;       // per object
  std::vector<std::size_t> stage;                 // per object: longest chain below it
  std::vector<ColimitInput> latching_inputs;      // per object
  std::vector<Colimit> latching;                  // per object
  std::vector<std::string> diagnostics;
  std::vector<std::string> notes;  // maps fixed only up to indeterminacy
  bool ok() const { return diagnostics.empty(); }
};
// With guided set, maps that the derived data fix only up to indeterminacy are
// taken from the comparison with the tower diagram, after checking that the
// comparison satisfies every prediction.
ExpandedDerived expand(const Tower& t, int k, bool guided = false);

// Comparison model -> tower diagram built cell by cell, and its homology check.
struct Reconstruction {
  std::vector<ChainMap> phi;                 // per object
  std::vector<std::vector<Matrix>> omega;    // homology inverses, j <= k
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
Reconstruction reconstruct(const Tower& t, const ExpandedDerived& e);

// The k-th derived layer: values of total degree k and formal differentials into degree k.
struct DerivedLevel {
  int k = 0;
  std::vector<FamilyValue> values;
  std::vector<FamilyValue> formal;
};
DerivedLevel derived_k(const Tower& t, int k);

// Level-k hybrid: formal homology below k, the connected cover at and above k,
// and the formal differentials recorded between them.
struct HybridApprox {
  int level = 0;
  ExtendedIndex index;
  std::vector<GradedVS> low;     // H_{<level} per node
  Diagram high;                  // connected cover <level>
  std::vector<FamilyValue> formal;
  bool hybrid = false;           // low part formal and high part minimally cofibrant
  std::vector<std::string> issues;
};
HybridApprox hybridize(const Diagram& x, int k, std::size_t max_gamma = 4);

struct TheoremAReport {
  int k = 0;
  bool replaced = false;      // input was replaced by a minimal model first
  bool certified = false;
  std::size_t tower_objects = 0;
  std::vector<std::string> failures;
};
// Rebuild the diagram from derived data through degree k and certify that the
// comparison maps are H_{<=k} isomorphisms at every original object.
TheoremAReport verify_theorem_a(const Diagram& x, int k, std::size_t max_gamma = 4);

}  // namespace hd
