#include <stdexcept>

#include "doctest.h"
#include "hodiag/derived.hpp"
#include "hodiag/generators.hpp"

using namespace hd;

namespace {
Field F5(5);

Poset square_poset() {
  return Poset::from_labels({"s", "a", "b", "t"}, {{"s", "a"}, {"s", "b"}, {"a", "t"}, {"b", "t"}});
}

PathObject po(const Poset& p, const std::string& a, std::vector<std::string> g, const std::string& b) {
  PathObject x;
  x.alpha = p.at(a);
  for (auto& l : g) x.gamma.push_back(p.at(l));
  x.beta = p.at(b);
  return x;
}

// Brute-force kernel: common null vectors of the stacked homology maps.
std::size_t brute_kernel_dim(const Diagram& d, Obj a, const std::vector<Obj>& g, int k) {
  Homology ha = homology(d.at(a), k);
  Matrix stack(d.field(), 0, ha.dim);
  for (Obj x : g) stack = stack.vcat(induced(ha, homology(d.at(x), k), d.map(a, x, k)));
  return ha.dim - rank(stack);
}

// Value of a pair read through the pushout: the signed difference of lifts is
// a cycle of the colimit over {s, a, b}, pushed to t by the universal map.
Matrix pushout_oracle(const Diagram& d, const PathObject& pair, int k, const Matrix& classes) {
  const Poset& p = d.index();
  std::vector<Obj> sub{pair.alpha, pair.gamma[0], pair.gamma[1]};
  SubColimit sc = colimit_over(d, sub);
  Homology ha = homology(d.at(pair.alpha), k);
  Homology hb = homology(d.at(*pair.beta), k + 1);
  const Comps& up = sc.to_upper.at(*pair.beta);
  Matrix out(d.field(), hb.dim, classes.cols());
  for (std::size_t c = 0; c < classes.cols(); ++c) {
    Vec z = ha.reps.apply(classes.col(c));
    Vec cyc(sc.colim.complex.dim(k + 1), 0);
    for (int side = 0; side < 2; ++side) {
      Obj g = pair.gamma[side];
      Vec b = *solve(d.at(g).d(k + 1), d.map(pair.alpha, g, k).apply(z));
      Vec im = sc.colim.cocone[side + 1][k + 1].apply(b);
      cyc = side == 0 ? vadd(d.field(), cyc, im) : vsub(d.field(), cyc, im);
    }
    REQUIRE(sc.colim.complex.d(k + 1).apply(cyc) == Vec(sc.colim.complex.dim(k), 0));
    if (hb.dim) out.set_col(c, hb.project.apply(up[k + 1].apply(cyc)));
  }
  (void)p;
  return out;
}
}  // namespace

TEST_CASE("kernels at the initial vertex of the 3-cube are everything") {
  for (std::size_t v = 1; v <= 3; ++v) {
    Diagram d = gen_cube(F5, 3, v);
    const Poset& p = d.index();
    Obj a = p.at("111");
    std::vector<Obj> facets{p.at("011"), p.at("101"), p.at("110")};
    KernelFamily kf = kernels(d, a, 0, {{a, facets, p.at("000")}});
    CHECK(kf.kernels.size() == 7);
    for (auto& [g, K] : kf.kernels) CHECK(K.dim() == v);
    CHECK(kf.at({facets[2], facets[0]}).dim() == v);
  }
}

TEST_CASE("injective maps have no kernels") {
  Poset p = square_poset();
  ChainComplex s = sphere(F5, 2, 0);
  Diagram d = diagram_from(p, {s, s, s, s}, [&](Obj, Obj) { return Comps{Matrix::identity(F5, 2)}; });
  KernelFamily kf = kernels(d, p.at("s"), 0, {po(p, "s", {"a", "b"}, "t")});
  for (auto& [g, K] : kf.kernels) CHECK(K.dim() == 0);
}

TEST_CASE("kernel intersections match direct computation on random fans") {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    Poset p = fan_poset(3);
    Diagram d = random_cofibrant_diagram(F5, p, 2, 2, rng);
    Obj a = p.at("a");
    std::vector<Obj> g{p.at("g1"), p.at("g2"), p.at("g3")};
    for (int k = 0; k <= 2; ++k) {
      KernelFamily kf = kernels(d, a, k, {{a, g, p.at("z")}});
      for (auto& [s, K] : kf.kernels) {
        CHECK(K.dim() == brute_kernel_dim(d, a, s, k));
        // Monotone: adding an object can only shrink the kernel.
        for (auto& [s2, K2] : kf.kernels)
          if (std::includes(s2.begin(), s2.end(), s.begin(), s.end())) CHECK(K.contains(K2));
      }
    }
  }
}

TEST_CASE("the standard square has an isomorphic secondary value, the split one a zero value") {
  for (std::size_t v = 1; v <= 3; ++v) {
    Diagram std_model = gen_minimal(F5, 1, v);
    const Poset& p = std_model.index();
    FamilyValue fv = eval_value(std_model, po(p, "s", {"a0", "b0"}, "t"), 0);
    CHECK(fv.defined);
    CHECK(fv.indeterminacy.dim() == 0);
    CHECK(fv.rank() == v);

    Diagram split = minimal_cofibrant_replace(strict_zero_square(F5, v)).model;
    const Poset& q = split.index();
    FamilyValue fz = eval_value(split, po(q, "s", {"a0", "b0"}, "t"), 0);
    CHECK(fz.rank() == 0);
    CHECK(fz.classes.cols() == v);
  }
}

TEST_CASE("pair values on the 3-cube land in cones and vanish") {
  Diagram d = gen_cube(F5, 3, 2);
  const Poset& p = d.index();
  for (auto [x, y, j] : std::vector<std::tuple<const char*, const char*, const char*>>{
           {"011", "101", "001"}, {"011", "110", "010"}, {"101", "110", "100"}}) {
    FamilyValue fv = eval_value(d, po(p, "111", {x, y}, j), 0);
    CHECK(fv.defined);
    CHECK(fv.value.is_zero());
    CHECK(fv.classes.cols() == 2);
  }
}

TEST_CASE("the third-order value of the 3-cube is an isomorphism") {
  for (std::size_t v = 1; v <= 3; ++v) {
    Diagram d = gen_cube(F5, 3, v);
    const Poset& p = d.index();
    FamilyValue fv = family_value(d, po(p, "111", {"011", "101", "110"}, "000"), 0);
    CHECK(fv.defined);
    CHECK(fv.order == 2);
    CHECK(fv.indeterminacy.dim() == 0);
    CHECK(fv.rank() == v);
  }
}

TEST_CASE("eval_value rejects classes that survive and bad shapes") {
  Diagram d = gen_minimal(F5, 1, 1);
  const Poset& p = d.index();
  CHECK_THROWS_AS(eval_value(d, po(p, "s", {"a0", "b0", "t"}, "t"), 0), std::invalid_argument);
  Diagram c = gen_cube(F5, 2, 1);
  const Poset& q = c.index();
  // The target lies inside the family.
  CHECK_THROWS_AS(eval_value(c, po(q, "11", {"01", "10"}, "01"), 0), std::invalid_argument);
}

TEST_CASE("pair values agree with the pushout oracle on random squares") {
  Rng rng(17);
  Poset p = square_poset();
  int nonzero = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Diagram d = random_cofibrant_diagram(F5, p, 2, 2, rng);
    for (int k = 0; k <= 1; ++k) {
      PathObject pair = po(p, "s", {"a", "b"}, "t");
      FamilyValue fv = eval_value(d, pair, k);
      REQUIRE(fv.defined);
      Matrix oracle = pushout_oracle(d, pair, k, fv.classes);
      Matrix diff = oracle - fv.value;
      for (std::size_t c = 0; c < diff.cols(); ++c) CHECK(fv.indeterminacy.contains(diff.col(c)));
      if (fv.rank() > 0) ++nonzero;
    }
  }
  CHECK(nonzero > 0);
}

TEST_CASE("inclusion-exclusion on a fan of three cones on a common kernel") {
  for (std::size_t w = 1; w <= 3; ++w) {
    Rng rng(w);
    Diagram d = random_fan_diagram(F5, 3, 0, w, 0, rng);
    const Poset& p = d.index();
    PartialDerived pd = inclusion_exclusion(d, po(p, "a", {"g1", "g2", "g3"}, "z"), 0);
    CHECK(pd.exact);
    CHECK(pd.coordinated);
    CHECK(pd.term_dims == std::vector<std::size_t>{w, 3 * w});
    CHECK(pd.hocolim_dim == 2 * w);
  }
}

TEST_CASE("two-term inclusion-exclusion") {
  Diagram d = gen_minimal(F5, 1, 2);
  const Poset& p = d.index();
  PartialDerived pd = inclusion_exclusion(d, po(p, "s", {"a0", "b0"}, "t"), 0);
  CHECK(pd.terms.size() == 1);
  CHECK(pd.theta.empty());
  CHECK(pd.exact);
  CHECK(pd.hocolim_dim == 2);
  CHECK(rank(pd.psi) == 2);
}

TEST_CASE("alternating sum of the inclusion-exclusion chain vanishes on random fans") {
  Rng rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    int m = static_cast<int>(uniform(rng, 2, 4));
    int k = static_cast<int>(uniform(rng, 0, 1));
    Field f(trial % 2 ? 2 : 5);
    Diagram d = random_fan_diagram(f, m, k, uniform(rng, 1, 3), 2, rng);
    const Poset& p = d.index();
    PathObject x;
    x.alpha = p.at("a");
    for (int i = 1; i <= m; ++i) x.gamma.push_back(p.at("g" + std::to_string(i)));
    x.beta = p.at("z");
    PartialDerived pd = inclusion_exclusion(d, x, k);
    CHECK_MESSAGE(pd.exact, (pd.issues.empty() ? "" : pd.issues.front()));
    long alt = 0;
    for (std::size_t j = 0; j < pd.term_dims.size(); ++j) alt += (j % 2 ? -1 : 1) * static_cast<long>(pd.term_dims[j]);
    alt += (pd.term_dims.size() % 2 ? -1 : 1) * static_cast<long>(pd.hocolim_dim);
    CHECK(alt == 0);
  }
}

TEST_CASE("global derived diagram of the 3-cube") {
  Diagram d = gen_cube(F5, 3, 1);
  GlobalDerived g = global_derived(d, 0);
  CHECK(g.compatible());
  const Poset& p = d.index();
  // Base values are the homology in degrees <= 1.
  for (Obj x = 0; x < p.size(); ++x) CHECK(g.values[x].dim(0) == homology(d.at(x), 0).dim);
  std::size_t kernel_nodes = 0;
  for (auto& n : g.index.nodes) kernel_nodes += n.kind == NodeKind::Kernel;
  CHECK(kernel_nodes > 0);
  // Every degree-one value from the initial vertex vanishes: all targets have H_1 = 0.
  for (auto& fv : g.evaluations) CHECK(fv.value.is_zero());
  auto facet_pair = g.index.find(kernel_label(p, p.at("111"), {p.at("011"), p.at("101")}));
  REQUIRE(facet_pair);
  CHECK(g.values[*facet_pair].dim(0) == 1);
}

TEST_CASE("global derived diagram of the zig-zag model: trivial first values") {
  for (int n = 2; n <= 4; ++n) {
    Diagram d = gen_minimal(F5, n, 1);
    GlobalDerived g = global_derived(d, 0);
    CHECK(g.compatible());
    const Poset& p = d.index();
    int from_s = 0;
    for (auto& fv : g.evaluations)
      if (fv.path.alpha == p.at("s")) {
        ++from_s;
        CHECK(fv.rank() == 0);
      }
    CHECK(from_s >= 2);
  }
}

TEST_CASE("chain poset: derived diagram is the homology diagram") {
  Poset p = Poset::from_labels({"x", "y", "z"}, {{"x", "y"}, {"y", "z"}});
  Rng rng(1);
  Diagram d = random_cofibrant_diagram(F5, p, 2, 2, rng);
  GlobalDerived g = global_derived(d, 1);
  CHECK(g.index.nodes.size() == 3);
  CHECK(g.evaluations.empty());
  for (Obj x = 0; x < 3; ++x)
    for (int j = 0; j <= 2; ++j) CHECK(g.values[x].dim(j) == homology(d.at(x), j).dim);
}

TEST_CASE("compatibility squares hold on random diagrams") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    Poset p = random_poset(rng, uniform(rng, 3, 6));
    Diagram d = random_cofibrant_diagram(F5, p, 2, 2, rng);
    GlobalDerived g = global_derived(d, static_cast<int>(uniform(rng, 0, 1)));
    CHECK_MESSAGE(g.compatible(), (g.issues.empty() ? "" : g.issues.front()));
  }
}
