#pragma once

#include <map>
#include <string>
#include <vector>

#include "hodiag/diagram.hpp"

namespace hd {

// Ker(H_k X(alpha) -> H_k X(g)) intersected over g in gamma, in H_k(alpha)
// coordinates. Empty gamma gives all of H_k(alpha).
Subspace kernel_of(const Diagram& d, Obj alpha, const std::vector<Obj>& gamma, int k);

struct KernelFamily {
  Obj alpha = 0;
  int degree = 0;
  std::map<std::vector<Obj>, Subspace> kernels;  // every nonempty sub-family, sorted
  const Subspace& at(std::vector<Obj> gamma) const;
};
KernelFamily kernels(const Diagram& d, Obj alpha, int k, const std::vector<PathObject>& families);

// Value of a family (alpha, Gamma, beta) on classes of H_k X(alpha) that die in
// every gamma. A class is lifted to bounding chains in each gamma; for every
// sub-family S the signed sum of the lifts of its faces is lifted again in a
// join of S below beta, and the signed sum over the faces of Gamma is read off
// in H_{k+|Gamma|-1} X(beta). All lifts are solved for jointly, so the value is
// defined exactly when the lower-order values can be made to vanish.
struct FamilyValue {
  PathObject path;
  int degree = 0;          // k
  int order = 1;           // |Gamma| - 1
  Matrix classes;          // H_k(alpha) coordinates, one column per input class
  Matrix value;            // H_{k+order}(beta) x #classes
  Subspace indeterminacy;  // in H_{k+order}(beta)
  bool defined = true;
  std::string note;
  int target_degree() const { return degree + order; }
  // Rank of the value modulo the indeterminacy.
  std::size_t rank() const;
};

// Value on a basis of K^alpha_Gamma (beta must be set).
FamilyValue family_value(const Diagram& d, const PathObject& po, int k);
// Value on the given classes (each must lie in K^alpha_Gamma). When join_ok is
// nonempty, joins of sub-families are only taken among objects it marks.
FamilyValue family_value(const Diagram& d, const PathObject& po, int k, const Matrix& classes,
                         const std::vector<bool>& join_ok = {});
// Order-one value of a pair; throws std::invalid_argument unless |Gamma| = 2.
FamilyValue eval_value(const Diagram& d, const PathObject& pair, int k);

// Signed inclusion-exclusion chain of kernels for one family
//   K_Gamma -> (+) K_{|Gamma|-1} -> ... -> (+) K_pairs -> H_{k+1}
// with its realization through the homotopy colimit of the fan {alpha} + Gamma.
struct PartialDerived {
  PathObject path;
  int degree = 0;
  std::vector<std::vector<std::vector<Obj>>> terms;  // terms[j]: sub-families of size |Gamma|-j
  std::vector<std::vector<Matrix>> bases;            // matching kernel bases
  std::vector<std::size_t> term_dims;
  std::vector<Matrix> theta;      // terms[j] -> terms[j+1]
  Matrix psi;                     // pairs -> H_{k+1} X(beta)
  Subspace indeterminacy;         // of psi
  Matrix to_hocolim;              // pairs -> H_{k+1}(hocolim) mod images of H_{k+1}(gamma)
  std::size_t hocolim_dim = 0;    // dimension of that quotient
  bool exact = false;             // chain exact with injective start and surjective end
  bool coordinated = false;       // psi o theta vanishes modulo indeterminacy
  std::vector<std::string> issues;
};
PartialDerived inclusion_exclusion(const Diagram& d, const PathObject& po, int k);

// Derived diagram in degree k over derived_index(I): base objects carry
// H_{<=k+1}, kernel objects K^alpha_G' in degree k, pullbacks the fiber
// products, and arrows are homology maps (shift 0), formal differentials and
// evaluations (shift +1).
struct GlobalDerived {
  ExtendedIndex index;
  int degree = 0;
  std::vector<GradedVS> values;           // per node
  std::vector<GradedMap> arrows;          // per index edge
  std::vector<std::size_t> evaluation_edges;
  std::vector<FamilyValue> evaluations;   // parallel to evaluation_edges
  std::vector<std::string> issues;        // failed compatibility squares
  bool compatible() const { return issues.empty(); }
};
GlobalDerived global_derived(const Diagram& d, int k, std::size_t max_gamma = 4);

}  // namespace hd
