#include <stdexcept>

#include "doctest.h"
#include "hodiag/chain.hpp"
#include "hodiag/random.hpp"

using namespace hd;

namespace {
Field F5(5);

ChainComplex zero_chain3() {
  // F_5 <-0- F_5 <-0- F_5
  return ChainComplex(F5, {1, 1, 1}, {Matrix(), Matrix::zero(F5, 1, 1), Matrix::zero(F5, 1, 1)});
}

long euler(const ChainComplex& c) {
  long e = 0;
  for (int n = 0; n < c.length(); ++n) e += (n % 2 ? -1 : 1) * static_cast<long>(c.dim(n));
  return e;
}

long euler_h(const ChainComplex& c) {
  long e = 0;
  for (int n = 0; n < c.length(); ++n) e += (n % 2 ? -1 : 1) * static_cast<long>(homology(c, n).dim);
  return e;
}

std::size_t h(const ChainComplex& c, int n) { return homology(c, n).dim; }

// Class in H_n(t) carried to H_{n-1}(loop t).
Matrix to_loop_homology(const ChainComplex& t, int n) {
  ChainComplex om = loop(t);
  Homology ht = homology(t, n);
  Homology ho = homology(om, n - 1);
  Matrix reps = ht.reps;
  if (n - 1 == 0) {
    Subspace z1 = kernel(t.d(1));
    Matrix c(t.field(), z1.dim(), reps.cols());
    for (std::size_t j = 0; j < reps.cols(); ++j) c.set_col(j, z1.coords(reps.col(j)));
    reps = c;
  }
  return ho.project * reps;
}
}  // namespace

TEST_CASE("validation rejects bad differentials") {
  CHECK_THROWS_WITH_AS(ChainComplex(F5, {1, 1, 1},
                                    {Matrix(), Matrix::identity(F5, 1), Matrix::identity(F5, 1)}),
                       "d o d != 0 in degree 2", std::invalid_argument);
  CHECK_THROWS(ChainComplex(F5, {1, 2}, {Matrix(), Matrix::identity(F5, 1)}));
}

TEST_CASE("homology examples") {
  ChainComplex k0 = sphere(F5, 2, 0);
  CHECK(h(k0, 0) == 2);
  CHECK(h(k0, 1) == 0);
  ChainComplex ck = disk(F5, 1, 0);
  CHECK(betti(ck).empty());
  ChainComplex z = zero_chain3();
  CHECK(betti(z) == std::vector<std::size_t>{1, 1, 1});
  // project is a retraction vanishing on boundaries
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    ChainComplex c = random_complex(F5, 3, 3, rng);
    for (int n = 0; n < c.length(); ++n) {
      Homology hh = homology(c, n);
      CHECK(hh.project * hh.reps == Matrix::identity(F5, hh.dim));
      CHECK((hh.project * c.d(n + 1)).is_zero());
      CHECK((c.d(n) * hh.reps).is_zero());
    }
  }
}

TEST_CASE("sphere and disk") {
  CHECK(sphere(F5, 1, 0).dims() == std::vector<std::size_t>{1});
  ChainComplex d = disk(F5, 2, 1);
  CHECK(d.dims() == std::vector<std::size_t>{0, 2, 2});
  CHECK(d.d(2) == Matrix::identity(F5, 2));
  CHECK(sphere(F5, 0, 3).is_zero());
}

TEST_CASE("cone and suspension examples") {
  ChainComplex s = sphere(F5, 1, 0);
  ChainComplex c = cone(ChainMap::identity(s));
  CHECK(c.dims() == std::vector<std::size_t>{1, 1});
  CHECK(betti(c).empty());
  CHECK(reduced_suspend(s, 1) == sphere(F5, 1, 1));
  ChainComplex x = ChainComplex(F5, {2, 1}, {Matrix(), Matrix::from_rows(F5, {{1}, {0}})});
  CHECK(h(x, 0) == 1);
  CHECK(h(x, 1) == 0);
  ChainComplex sx = suspend(x);
  CHECK(h(sx, 1) == 1);
  CHECK(h(sx, 0) == 0);
}

TEST_CASE("truncation and connected cover examples") {
  CHECK(truncate(disk(F5, 1, 0), 0).complex.is_zero());
  CHECK(conn_cover(sphere(F5, 1, 2), 1).complex == sphere(F5, 1, 2));
  ChainComplex c(F5, {1, 1}, {Matrix(), Matrix::zero(F5, 1, 1)});
  Truncation t = truncate(c, 0);
  Truncation cv = conn_cover(c, 1);
  CHECK(t.complex == sphere(F5, 1, 0));
  CHECK(cv.complex == sphere(F5, 1, 1));
  CHECK(h(t.complex, 0) + h(cv.complex, 1) == h(c, 0) + h(c, 1));
}

TEST_CASE("split_spheres_disks examples") {
  auto s1 = split_spheres_disks(disk(F5, 1, 0));
  REQUIRE(s1.summands.size() == 1);
  CHECK(s1.summands[0].kind == SummandKind::Disk);
  CHECK(s1.summands[0].degree == 0);
  ChainComplex c(F5, {2, 1}, {Matrix(), Matrix::from_rows(F5, {{1}, {0}})});
  auto s2 = split_spheres_disks(c);
  REQUIRE(s2.summands.size() == 2);
  CHECK(s2.summands[0].kind == SummandKind::Disk);
  CHECK(s2.summands[1].kind == SummandKind::Sphere);
  CHECK(s2.summands[1].degree == 0);
  CHECK(s2.verified);
  auto s3 = split_spheres_disks(sphere(F5, 3, 2));
  REQUIRE(s3.summands.size() == 1);
  CHECK(s3.summands[0].dimV == 3);
  CHECK(s3.summands[0].degree == 2);
}

TEST_CASE("fiber examples") {
  ChainComplex c = ChainComplex(F5, {1, 2, 1}, {Matrix(), Matrix::from_rows(F5, {{0, 0}}),
                                                Matrix::from_rows(F5, {{1}, {0}})});
  CHECK(betti(fiber(ChainMap::identity(c)).complex).empty());
  Fiber lf = fiber(ChainMap::zero(ChainComplex(F5), c));
  for (int n = 0; n < 3; ++n) CHECK(h(lf.complex, n) == h(c, n + 1));
  ChainComplex s = sphere(F5, 1, 0);
  CHECK(fiber(ChainMap::zero(s, ChainComplex(F5))).complex == s);
}

TEST_CASE("random constructions stay valid; Euler characteristic") {
  Rng rng(2);
  for (int t = 0; t < 500; ++t) {
    Field f(random_prime(rng, {2, 3, 5}));
    ChainComplex a = random_complex(f, 3, 3, rng);
    ChainComplex b = random_complex(f, 3, 3, rng);
    ChainMap m = random_chain_map(a, b, rng);
    // Constructors validate d o d = 0 and would throw otherwise.
    ChainComplex c = cone(m);
    Fiber fb = fiber(m);
    ChainComplex s = suspend(a, 2);
    CHECK(euler(a) == euler_h(a));
    CHECK(euler(c) == euler_h(c));
    CHECK(euler_h(s) == euler_h(a));
    CHECK(euler_h(c) == euler_h(b) - euler_h(a));
    (void)fb;
  }
}

TEST_CASE("splitting reassembles the complex") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    ChainComplex c = random_complex(F5, 4, 3, rng);
    Splitting sp = split_spheres_disks(c);
    CHECK(sp.verified);
    for (int n = 0; n < c.length(); ++n) {
      std::size_t spheres = 0, disks = 0;
      for (auto& s : sp.summands) {
        if (s.kind == SummandKind::Sphere && s.degree == n) spheres += s.dimV;
        if (s.kind == SummandKind::Disk && s.degree == n) disks += s.dimV;
      }
      CHECK(spheres == h(c, n));
      CHECK(disks == rank(c.d(n + 1)));
    }
  }
}

TEST_CASE("truncation and cover homology") {
  Rng rng(4);
  for (int t = 0; t < 200; ++t) {
    ChainComplex c = random_complex(F5, 4, 3, rng);
    for (int k = 0; k < 5; ++k) {
      Truncation tr = truncate(c, k);
      Truncation cv = conn_cover(c, k);
      for (int i = 0; i < 6; ++i) {
        CHECK(h(tr.complex, i) == (i <= k ? h(c, i) : 0));
        CHECK(h(cv.complex, i) == (i >= k ? h(c, i) : 0));
      }
      for (int i = 0; i <= k; ++i) {
        Matrix m = induced(tr.map, i);
        CHECK(rank(m) == h(c, i));
      }
      for (int i = k; i < 5; ++i) CHECK(rank(induced(cv.map, i)) == h(c, i));
    }
  }
}

TEST_CASE("fiber long exact sequence") {
  Rng rng(5);
  for (int t = 0; t < 200; ++t) {
    Field f(random_prime(rng, {2, 5}));
    ChainComplex a = random_complex(f, 3, 3, rng);
    ChainComplex b = random_complex(f, 3, 3, rng);
    ChainMap m = random_chain_map(a, b, rng);
    Fiber fb = fiber(m);
    for (int n = 0; n < 5; ++n) {
      Matrix i_n = induced(fb.from_loop, n);  // H_n(loop b) -> H_n(Fib)
      Matrix p_n = induced(fb.to_source, n);  // H_n(Fib) -> H_n(a)
      Matrix f_n = induced(m, n);             // H_n(a) -> H_n(b)
      CHECK((p_n * i_n).is_zero());
      CHECK((f_n * p_n).is_zero());
      CHECK(h(fb.complex, n) - rank(p_n) == rank(i_n));
      CHECK(h(a, n) - rank(f_n) == rank(p_n));
      if (n >= 1) {
        Matrix i_prev = induced(fb.from_loop, n - 1);
        Matrix conn = to_loop_homology(b, n);
        CHECK((i_prev * conn * f_n).is_zero());
        CHECK(h(b, n) - rank(i_prev * conn) == rank(f_n));
      }
    }
  }
}

TEST_CASE("graded maps compose with additive shifts") {
  GradedVS a{{1, 1}}, b{{1, 1, 1}}, c{{1, 1, 1, 1}};
  GradedMap f{F5, a, b, {}};
  f.set(0, 0, Matrix::identity(F5, 1));
  f.set(1, 0, Matrix::from_rows(F5, {{2}}));
  GradedMap g{F5, b, c, {}};
  g.set(1, 0, Matrix::from_rows(F5, {{3}}));
  g.set(1, 1, Matrix::from_rows(F5, {{4}}));
  GradedMap gf = f.then(g);
  CHECK(gf.at(1, 0) == Matrix::from_rows(F5, {{3}}));
  CHECK(gf.at(2, 0) == Matrix::from_rows(F5, {{8}}));
  CHECK(gf.at(0, 0).is_zero());
  CHECK_THROWS(f.set(-1, 1, Matrix::identity(F5, 1)));
}
