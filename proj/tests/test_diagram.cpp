#include <stdexcept>

#include "doctest.h"
#include "hodiag/diagram.hpp"
#include "hodiag/generators.hpp"

using namespace hd;

namespace {
Field F5(5);
Field F2(2);

std::size_t h(const ChainComplex& c, int n) { return homology(c, n).dim; }

// Square s < a, b < t with every object K(F,0).
Diagram constant_square(const Field& f, bool commute) {
  Poset p = Poset::from_labels({"s", "a", "b", "t"}, {{"s", "a"}, {"s", "b"}, {"a", "t"}, {"b", "t"}});
  ChainComplex k = sphere(f, 1, 0);
  return diagram_from(p, {k, k, k, k}, [&](Obj a, Obj b) {
    Matrix m = Matrix::identity(f, 1);
    if (!commute && p.label(a) == "b" && p.label(b) == "t") m = -m;
    return Comps{m};
  });
}
}  // namespace

TEST_CASE("validate accepts commuting squares and names a failing one") {
  CHECK(validate(constant_square(F5, true)).empty());
  std::string err = validate(constant_square(F5, false));
  CHECK_FALSE(err.empty());
  CHECK(err.find("t") != std::string::npos);
  // Over F_2 the sign flip is invisible.
  CHECK(validate(constant_square(F2, false)).empty());
}

TEST_CASE("diagram constructor rejects a non-chain map") {
  Poset p = Poset::from_labels({"x", "y"}, {{"x", "y"}});
  ChainComplex d1 = disk(F5, 1, 0);
  ChainComplex t(F5, {1, 1}, {Matrix(), Matrix::zero(F5, 1, 1)});
  CHECK_NOTHROW(diagram_from(p, {d1, t}, [&](Obj, Obj) {
    return Comps{Matrix::zero(F5, 1, 1), Matrix::identity(F5, 1)};
  }));
  // Bottom cell kept, top cell killed: f d(top) != d f(top).
  CHECK_THROWS_AS(diagram_from(p, {d1, t}, [&](Obj, Obj) {
                    return Comps{Matrix::identity(F5, 1), Matrix::zero(F5, 1, 1)};
                  }),
                  std::invalid_argument);
}

TEST_CASE("single object diagram") {
  Poset p = Poset::from_labels({"x"}, {});
  Diagram d(p, {sphere(F5, 2, 1)}, {});
  CHECK(validate(d).empty());
  HomologyDiagram hd_(d);
  CHECK(hd_.dim(0, 1) == 2);
  CHECK(hd_.dim(0, 0) == 0);
}

TEST_CASE("cube of cones has spheres at the two ends") {
  for (int n = 2; n <= 4; ++n)
    for (std::size_t v = 1; v <= 2; ++v) {
      Diagram d = gen_cube(F5, n, v);
      CHECK(validate(d).empty());
      const Poset& p = d.index();
      Obj top = p.at(std::string(n, '1')), bot = p.at(std::string(n, '0'));
      for (Obj x = 0; x < p.size(); ++x)
        for (int k = 0; k < n; ++k) {
          std::size_t expect = (x == top && k == 0) || (x == bot && k == n - 1) ? v : 0;
          CHECK(h(d.at(x), k) == expect);
        }
      // Every cover strictly enlarges the cell set.
      for (auto [a, b] : p.covers()) CHECK(d.at(a).total_dim() < d.at(b).total_dim());
    }
}

TEST_CASE("zig-zag models: K(V,0) at the bottom and K(V,n) at the top") {
  for (int n = 1; n <= 4; ++n)
    for (bool split : {false, true}) {
      Diagram d = gen_minimal(F5, n, 2, split);
      CHECK(validate(d).empty());
      const Poset& p = d.index();
      CHECK(h(d.at(p.at("s")), 0) == 2);
      CHECK(h(d.at(p.at("t")), n) == 2);
      for (int i = 0; i < n; ++i) {
        auto lbl = std::to_string(i);
        for (int k = 0; k <= n + 1; ++k) {
          CHECK(h(d.at(p.at("a" + lbl)), k) == 0);
          CHECK(h(d.at(p.at("b" + lbl)), k) == 0);
        }
      }
    }
}

TEST_CASE("homology diagram maps compose along paths") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Poset p = random_poset(rng, 5);
    Diagram d = random_diagram(F5, p, 2, 2, rng);
    CHECK(validate(d).empty());
    HomologyDiagram H(d);
    for (Obj a = 0; a < p.size(); ++a)
      for (Obj b = 0; b < p.size(); ++b)
        for (Obj c = 0; c < p.size(); ++c)
          if (p.leq(a, b) && p.leq(b, c))
            for (int k = 0; k <= H.max_degree(); ++k) CHECK(H.map(b, c, k) * H.map(a, b, k) == H.map(a, c, k));
  }
}

TEST_CASE("pushout of two cones on a sphere is a suspension") {
  for (std::size_t v = 1; v <= 3; ++v)
    for (int k = 0; k <= 2; ++k) {
      ChainComplex s = sphere(F5, v, k);
      ChainComplex c = disk(F5, v, k);
      Matrix inc(F5, c.dim(k), v);
      // The disk's lower cell is the last block in degree k.
      inc.put(c.dim(k) - v, 0, Matrix::identity(F5, v));
      Comps m(k + 1, Matrix());
      for (int n = 0; n < k; ++n) m[n] = Matrix(F5, c.dim(n), s.dim(n));
      m[k] = inc;
      REQUIRE(chain_map_defect(s, c, m).empty());
      ColimitInput in{{s, c, c}, {{0, 1, m}, {0, 2, m}}};
      Colimit L = colimit(F5, in);
      for (int n = 0; n <= k + 2; ++n) CHECK(h(L.complex, n) == (n == k + 1 ? v : 0));
    }
}

TEST_CASE("hocolim of m cones over a common kernel") {
  Rng rng(5);
  for (int m = 2; m <= 4; ++m)
    for (std::size_t w = 1; w <= 3; ++w) {
      Diagram d = random_fan_diagram(F5, m, 1, w, 0, rng);
      CHECK(validate(d).empty());
      std::vector<Obj> sub;
      for (int i = 0; i <= m; ++i) sub.push_back(i);
      SubColimit sc = colimit_over(d, sub);
      CHECK(sc.universal_ok);
      CHECK(h(sc.colim.complex, 2) == (m - 1) * w);
      REQUIRE(sc.to_upper.count(m + 1));
    }
}

TEST_CASE("colimit factorization rejects cocones that break relations") {
  ChainComplex s = sphere(F5, 1, 0);
  ColimitInput in{{s, s}, {{0, 1, Comps{Matrix::identity(F5, 1)}}}};
  Colimit L = colimit(F5, in);
  CHECK(L.complex.total_dim() == 1);
  auto good = colimit_factor(F5, in, L, s, {Comps{Matrix::identity(F5, 1)}, Comps{Matrix::identity(F5, 1)}});
  REQUIRE(good);
  auto bad = colimit_factor(F5, in, L, s, {Comps{Matrix::identity(F5, 1)}, Comps{Matrix::zero(F5, 1, 1)}});
  CHECK_FALSE(bad);
}

TEST_CASE("latching object of the top of the cube") {
  Diagram d = gen_cube(F5, 3, 1);
  Obj top = d.index().at("000");
  Latching L = latching(d, top);
  CHECK(L.preds.size() == 7);
  // The proper faces already cover every cell, so the latching map is an iso.
  CHECK(h(L.colim.complex, 2) == 1);
  CHECK(h(L.colim.complex, 0) == 0);
  CHECK(L.colim.complex.total_dim() == d.at(top).total_dim());
}

TEST_CASE("Reedy replacement is objectwise quasi-iso with injective latching maps") {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    Poset p = random_poset(rng, uniform(rng, 2, 5));
    Diagram d = random_diagram(F5, p, 2, 2, rng);
    Replacement r = reedy_cofibrant_replace(d);
    CHECK(r.quasi_iso);
    CHECK(r.latching_injective);
    CHECK(validate(r.model).empty());
    for (Obj x = 0; x < p.size(); ++x) CHECK(is_quasi_iso(r.to_original[x]));
  }
}

TEST_CASE("minimal replacement passes the cofibrancy check when it reports minimal") {
  Rng rng(22);
  int minimal = 0;
  for (int trial = 0; trial < 25; ++trial) {
    Poset p = random_poset(rng, uniform(rng, 2, 5));
    Diagram d = random_diagram(F5, p, 2, 2, rng);
    Replacement r = minimal_cofibrant_replace(d);
    CHECK(r.quasi_iso);
    CHECK(validate(r.model).empty());
    for (Obj x = 0; x < p.size(); ++x) CHECK(is_quasi_iso(r.to_original[x]));
    if (r.minimal) {
      ++minimal;
      CofibrancyReport rep = minimal_cofibrant_check(r.model);
      CHECK_MESSAGE(rep.ok(), (rep.issues.empty() ? "" : rep.issues.front()));
    }
  }
  CHECK(minimal > 0);
}

TEST_CASE("generated models are minimal cofibrant") {
  CHECK(minimal_cofibrant_check(gen_cube(F5, 3, 2)).ok());
  for (int n = 1; n <= 4; ++n) {
    CHECK(minimal_cofibrant_check(gen_minimal(F5, n, 1)).ok());
    CHECK(minimal_cofibrant_check(gen_minimal(F5, n, 1, true)).ok());
  }
}

TEST_CASE("strict zero square replaces to a split model") {
  Diagram z = strict_zero_square(F5, 2);
  Replacement r = minimal_cofibrant_replace(z);
  CHECK(r.quasi_iso);
  CHECK(r.latching_injective);
  const Diagram& m = r.model;
  CHECK(h(m.at(m.index().at("t")), 1) == 2);
  CHECK(h(m.at(m.index().at("s")), 0) == 2);
}

TEST_CASE("truncation and connective cover homology, objectwise") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    Poset p = random_poset(rng, uniform(rng, 2, 4));
    Diagram d = random_cofibrant_diagram(F5, p, 3, 2, rng);
    int k = static_cast<int>(uniform(rng, 0, 3));
    DiagramTruncation t = truncate_diagram(d, k);
    DiagramTruncation c = conn_cover_diagram(d, k);
    CHECK(validate(t.diagram).empty());
    CHECK(validate(c.diagram).empty());
    for (Obj x = 0; x < p.size(); ++x)
      for (int n = 0; n <= 4; ++n) {
        CHECK(h(t.diagram.at(x), n) == (n <= k ? h(d.at(x), n) : 0));
        CHECK(h(c.diagram.at(x), n) == (n >= k ? h(d.at(x), n) : 0));
        if (n <= k) CHECK(induced(t.maps[x], n).rows() == h(d.at(x), n));
      }
  }
}

TEST_CASE("formality and hybrid checks") {
  Diagram cube = gen_cube(F5, 3, 1);
  CHECK_FALSE(is_k_formal(cube, 1));
  CHECK(is_k_formal(truncate_diagram(strict_zero_square(F5, 1), 1).diagram, 1));
  Diagram z = strict_zero_square(F5, 1);
  CHECK(is_k_formal(z, 2));
  CHECK(is_k_hybrid(minimal_cofibrant_replace(z).model, 0));
}

TEST_CASE("Ind extension adds colimit objects with universal maps") {
  Diagram d = gen_cube(F5, 3, 1);
  ExtendedIndex idx = ind2_index(d.index());
  IndExtension ext = extend_ind2(d, idx);
  CHECK(validate(ext.diagram).empty());
  CHECK(ext.diagram.size() == idx.nodes.size());
  CHECK(ext.diagram.size() > d.size());
}
