// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// `acceptance N` runs criterion N alone.
// All comparisons are exact (finite fields); the only tolerance is the time
// budget on the double complex corpus.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hodiag/derived.hpp"
#include "hodiag/generators.hpp"
#include "hodiag/hybrid.hpp"
#include "hodiag/specseq.hpp"

using namespace hd;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

std::size_t h(const ChainComplex& c, int n) { return homology(c, n).dim; }

PathObject path(const Poset& p, const std::string& a, std::vector<std::string> g, const std::string& b) {
  PathObject x{p.at(a), {}, p.at(b)};
  for (auto& l : g) x.gamma.push_back(p.at(l));
  return x;
}

// d d = 0 checked directly on the matrices.
bool squares_to_zero(const ChainComplex& c) {
  for (int n = 2; n < c.length(); ++n)
    if (!(c.d(n - 1) * c.d(n)).is_zero()) return false;
  return true;
}

bool all_square_to_zero(const Diagram& d) {
  for (Obj x = 0; x < d.size(); ++x)
    if (!squares_to_zero(d.at(x))) return false;
  return true;
}

// Fan corpus shared by the inclusion-exclusion and hocolim criteria.
struct FanCase {
  elem p;
  int m, k;
  std::size_t w, extra;
  std::uint64_t seed;
};

std::vector<FanCase> fan_corpus() {
  Rng rng(4242);
  std::vector<FanCase> out;
  for (int i = 0; i < 50; ++i) {
    FanCase c;
    c.p = random_prime(rng, {2, 3, 5});
    c.m = static_cast<int>(uniform(rng, 2, 4));
    c.k = static_cast<int>(uniform(rng, 0, 1));
    c.w = uniform(rng, 1, 3);
    c.extra = uniform(rng, 0, 2);
    c.seed = rng();
    out.push_back(c);
  }
  return out;
}

Diagram fan_of(const FanCase& c, std::size_t extra) {
  Rng rng(c.seed);
  return random_fan_diagram(Field(c.p), c.m, c.k, c.w, extra, rng);
}

PathObject fan_path(const Poset& p, int m) {
  PathObject x{p.at("a"), {}, p.at("z")};
  for (int i = 1; i <= m; ++i) x.gamma.push_back(p.at("g" + std::to_string(i)));
  return x;
}

std::size_t rank_mod(const Subspace& ind, const Matrix& v) { return sum(ind, Subspace::span(v)).dim() - ind.dim(); }

void square_value(Outcome& o) {
  for (elem p : {2, 5})
    for (std::size_t v = 1; v <= 3; ++v) {
      Field f(p);
      Diagram standard = gen_minimal(f, 1, v);
      FamilyValue a = eval_value(standard, path(standard.index(), "s", {"a0", "b0"}, "t"), 0);
      Diagram split = minimal_cofibrant_replace(strict_zero_square(f, v)).model;
      FamilyValue b = eval_value(split, path(split.index(), "s", {"a0", "b0"}, "t"), 0);
      const std::string at = "p=" + std::to_string(p) + " dim V=" + std::to_string(v);
      o.require(a.defined && a.rank() == v, "standard rank at " + at);
      o.require(b.defined && b.rank() == 0 && b.classes.cols() == v, "split rank at " + at);
    }
  o.detail << "standard rank dim V, split rank 0 for dim V 1..3, p 2 and 5";
}

const FamilyValue* find(const std::vector<FamilyValue>& vs, const PathObject& po) {
  for (auto& v : vs)
    if (v.path == po) return &v;
  return nullptr;
}

void cube_values(Outcome& o) {
  for (elem p : {2, 3, 5})
    for (std::size_t v = 1; v <= 3; ++v) {
      Tower t = build_tower(gen_cube(Field(p), 3, v), 2);
      const Poset& J = t.diagram.index();
      const std::string at = "p=" + std::to_string(p) + " dim V=" + std::to_string(v);
      const DerivedLevel d1 = derived_k(t, 1), d2 = derived_k(t, 2);
      for (auto& x : d1.values) o.require(x.rank() == 0, "pair value nonzero at " + at);
      // The three values through two faces of the top vertex.
      for (auto [g1, g2, b] : {std::array<const char*, 3>{"011", "101", "001"}, {"011", "110", "010"}, {"101", "110", "100"}}) {
        const FamilyValue* x = find(d1.values, path(J, "111", {g1, g2}, b));
        o.require(x && x->defined && x->rank() == 0, std::string("pair through ") + g1 + ", " + g2 + " at " + at);
      }
      const FamilyValue* top = find(d2.values, path(J, "111", {"011", "101", "110"}, "000"));
      o.require(top && top->defined && top->value.rows() == v && top->value.cols() == v && top->rank() == v &&
                    top->indeterminacy.dim() == 0,
                "triple value not an isomorphism at " + at);
    }
  o.detail << "three pair values vanish, triple value V -> H_2 is an isomorphism, p 2/3/5, dim V 1..3";
}

void zigzag_values(Outcome& o) {
  Field f(5);
  for (int n = 1; n <= 5; ++n)
    for (std::size_t v : {1, 2}) {
      Tower t = build_tower(gen_minimal(f, n, v), n);
      const Poset& J = t.diagram.index();
      for (auto& x : t.values)
        if (x.target_degree() < n) o.require(x.rank() == 0, "value below the top nonzero, n=" + std::to_string(n));
      const std::vector<Obj> top_gamma{J.at("a" + std::to_string(n - 1)), J.at("b" + std::to_string(n - 1))};
      const DerivedLevel top = derived_k(t, n);
      bool iso = false;
      for (auto& x : top.values)
        if (x.defined && *x.path.beta == J.at("t") && x.path.gamma == top_gamma)
          iso = iso || (x.rank() == v && x.value.rows() == v && x.value.cols() == v);
      o.require(iso, "top value not an isomorphism, n=" + std::to_string(n));
    }
  o.detail << "n = 1..5, dim V 1 and 2";
}

void inclusion_exclusion_exact(Outcome& o) {
  int cases = 0;
  for (const FanCase& c : fan_corpus())
    for (std::size_t extra : {std::size_t{0}, c.extra}) {
      Diagram d = fan_of(c, extra);
      PartialDerived pd = inclusion_exclusion(d, fan_path(d.index(), c.m), c.k);
      o.require(pd.exact, "fan " + std::to_string(cases) + (pd.issues.empty() ? "" : ": " + pd.issues[0]));
      // Independent check: the alternating sum of dimensions along the chain vanishes.
      long alt = 0;
      for (std::size_t j = 0; j < pd.term_dims.size(); ++j) alt += (j % 2 ? -1 : 1) * static_cast<long>(pd.term_dims[j]);
      alt += (pd.term_dims.size() % 2 ? -1 : 1) * static_cast<long>(pd.hocolim_dim);
      o.require(alt == 0, "euler characteristic of the chain, fan " + std::to_string(cases));
      ++cases;
    }
  o.detail << cases << " fans (50 bare, 50 with extra spheres), m <= 4, dims <= 3, p in {2,3,5}";
}

void hocolim_law(Outcome& o) {
  int cases = 0;
  for (const FanCase& c : fan_corpus()) {
    Diagram d = fan_of(c, 0);
    std::vector<Obj> sub;
    for (int i = 0; i <= c.m; ++i) sub.push_back(i);
    SubColimit sc = colimit_over(d, sub);
    const std::size_t want = (c.m - 1) * c.w;
    o.require(sc.universal_ok && h(sc.colim.complex, c.k + 1) == want,
              "colimit H_{k+1} at fan " + std::to_string(cases));
    PartialDerived pd = inclusion_exclusion(d, fan_path(d.index(), c.m), c.k);
    o.require(pd.hocolim_dim == want, "hocolim dimension from the chain at fan " + std::to_string(cases));
    ++cases;
  }
  o.detail << cases << " fans of m cones on K(W,k)";
}

void certify_golden(Outcome& o) {
  Field f(5);
  for (int k = 0; k <= 2; ++k) {
    TheoremAReport r = verify_theorem_a(gen_cube(f, 3, 2), k);
    o.require(r.certified, "cube at k=" + std::to_string(k) + (r.failures.empty() ? "" : ": " + r.failures[0]));
  }
  for (int k = 0; k <= 3; ++k) {
    TheoremAReport r = verify_theorem_a(gen_minimal(f, 3, 2), k);
    o.require(r.certified, "zig-zag at k=" + std::to_string(k) + (r.failures.empty() ? "" : ": " + r.failures[0]));
  }
  o.detail << "3-cube at k 0..2, zig-zag n=3 at k 0..3";
}

void double_corpus(Outcome& o) {
  Rng rng(1729);
  Field f(5);
  const auto start = Clock::now();
  std::size_t checks = 0, nonzero_d2 = 0, nonzero_d3 = 0;
  for (int i = 0; i < 100; ++i) {
    DoubleComplex dc = random_double_complex(f, static_cast<int>(uniform(rng, 1, 4)), 3, 3, rng);
    CrossCheck cc = cross_check(dc, 3);
    checks += cc.checks;
    o.require(cc.ok(), "complex " + std::to_string(i) + (cc.ok() ? "" : ": " + cc.failures[0]));
    // E^inf against gr H, and gr H against the homology of the total complex.
    auto pages = classical_pages(dc, dc.width() + 2);
    auto gr = graded_homology(dc);
    o.require(pages.back().dim == gr, "E^inf differs from gr H at complex " + std::to_string(i));
    TotalComplex tot = total(dc);
    for (int n = 0; n <= tot.complex.length(); ++n) {
      std::size_t s = 0;
      for (auto& [pq, v] : gr) s += pq.first + pq.second == n ? v : 0;
      o.require(s == h(tot.complex, n), "gr H does not add up to H(Tot) at complex " + std::to_string(i));
    }
    for (auto& [pq, v] : pages[1].d_rank) nonzero_d2 += v > 0;
    for (auto& [pq, v] : pages[2].d_rank) nonzero_d3 += v > 0;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  o.require(secs <= 120.0, "corpus took " + std::to_string(secs) + " s");
  o.require(nonzero_d2 > 0, "no nonzero d^2 in the corpus");
  o.detail << "100 complexes, " << checks << " checks, nonzero d2 at " << nonzero_d2 << " spots, d3 at "
           << nonzero_d3 << ", " << secs << " s (limit 120 s)";
}

// C_2 = <x> in degree 0, C_1 = disk a -> b on degrees 1, 0, C_0 = <z> in degree 1;
// h_2 x = b, h_1 a = z.
DoubleComplex golden_square(const Field& f) {
  ChainComplex c2(f, {1}, {Matrix()});
  ChainComplex c1(f, {1, 1}, {Matrix(), Matrix::from_rows(f, 1, 1, {{1}})});
  ChainComplex c0(f, {0, 1}, {Matrix(), Matrix(f, 0, 1)});
  return DoubleComplex{f,
                       {c0, c1, c2},
                       {{}, {Matrix(f, 0, 1), Matrix::from_rows(f, 1, 1, {{1}})}, {Matrix::from_rows(f, 1, 1, {{1}})}}};
}

void golden_d2(Outcome& o) {
  for (elem p : {2, 3, 5}) {
    Field f(p);
    DoubleComplex dc = golden_square(f);
    Subspace K = chase_cycles(dc, 2, 2, 0);
    o.require(K.dim() == 1, "kernel of the first map should be the class of x");
    Relation rel = chase_d(dc, 2, 2, 0, K.basis());
    CubeSS c = double_to_cube(dc, 0, 2);
    const Poset& P = c.diagram.index();
    FamilyValue fv = family_value(c.diagram, {P.at("11"), {P.at("01"), P.at("10")}, P.at("00")}, 0, K.basis());
    o.require(fv.defined, "pair value undefined");
    o.require(fv.indeterminacy == rel.indeterminacy, "indeterminacies differ");
    // The pair value carries the face sign -1 on the lift through 10.
    o.require(fv.value == -rel.value, "pair value is not minus the chase value");
    o.require(rank_mod(rel.indeterminacy, rel.value) == 1, "d2 of the golden square should be nonzero");
    o.require(classical_pages(dc, 2)[1].d_rank == std::map<std::pair<int, int>, std::size_t>{{{2, 0}, 1}},
              "classical d2 rank");
  }
  // Same identity on random squares.
  Rng rng(19);
  int cases = 0;
  for (int i = 0; i < 60; ++i) {
    Field f(random_prime(rng, {2, 3, 5}));
    DoubleComplex dc = random_double_complex(f, 3, 3, 3, rng);
    CubeSS c = double_to_cube(dc, 0, 2);
    const Poset& P = c.diagram.index();
    for (int q = 0; q < 3; ++q) {
      Subspace K = chase_cycles(dc, 2, 2, q);
      if (K.dim() == 0) continue;
      Relation rel = chase_d(dc, 2, 2, q, K.basis());
      FamilyValue fv = family_value(c.diagram, {P.at("11"), {P.at("01"), P.at("10")}, P.at("00")}, q, K.basis());
      o.require(fv.defined && fv.indeterminacy == rel.indeterminacy, "random square " + std::to_string(i));
      for (std::size_t j = 0; j < K.dim(); ++j)
        o.require(rel.indeterminacy.contains(vadd(f, fv.value.col(j), rel.value.col(j))),
                  "random square " + std::to_string(i) + " value");
      ++cases;
    }
  }
  o.detail << "golden square at p 2/3/5 and " << cases << " random kernels: chase d2 = -(pair value), "
           << "equal indeterminacy";
}

Diagram random_small_diagram(Rng& rng, std::size_t lo, std::size_t hi, Field& f) {
  f = Field(random_prime(rng, {2, 3, 5}));
  Poset p = random_poset(rng, uniform(rng, lo, hi), 0.45);
  return uniform(rng, 0, 1) ? random_cofibrant_diagram(f, p, 2, 2, rng) : random_diagram(f, p, 2, 2, rng);
}

void property_suites(Outcome& o) {
  // d d = 0 on everything the generators and constructions build.
  Field f5(5);
  std::size_t complexes = 0;
  for (const Diagram& d : {gen_cube(f5, 3, 2), gen_minimal(f5, 4, 2), gen_minimal(f5, 3, 1, true),
                           strict_zero_square(f5, 2), build_tower(gen_cube(f5, 3, 1), 2).diagram}) {
    o.require(all_square_to_zero(d) && validate(d).empty(), "generated diagram");
    complexes += d.size();
  }

  // Cofibration sequences cover_k -> X -> truncation_{k-1} and truncation_k -> truncation_{k-1}.
  Rng rng(606);
  for (int i = 0; i < 200; ++i) {
    Field f(2);
    Diagram d = random_small_diagram(rng, 2, 6, f);
    const int k = static_cast<int>(uniform(rng, 1, 3));
    DiagramTruncation cov = conn_cover_diagram(d, k), lo = truncate_diagram(d, k - 1), hi = truncate_diagram(d, k);
    const std::string at = "diagram " + std::to_string(i);
    o.require(all_square_to_zero(d) && all_square_to_zero(cov.diagram) && all_square_to_zero(lo.diagram) &&
                  all_square_to_zero(hi.diagram),
              "d d != 0 at " + at);
    o.require(validate(cov.diagram).empty() && validate(lo.diagram).empty(), "truncation not a diagram at " + at);
    complexes += 4 * d.size();
    for (Obj x = 0; x < d.size(); ++x)
      for (int n = 0; n <= d.length(); ++n) {
        const std::size_t hx = h(d.at(x), n);
        o.require(hx == h(cov.diagram.at(x), n) + h(lo.diagram.at(x), n), "homology does not split at " + at);
        o.require(h(hi.diagram.at(x), n) == h(lo.diagram.at(x), n) + (n == k ? hx : 0), "tower step at " + at);
        // cover injects and truncation surjects in homology.
        if (h(cov.diagram.at(x), n) > 0) o.require(rank(induced(cov.maps[x], n)) == h(cov.diagram.at(x), n), "cover map at " + at);
        if (h(lo.diagram.at(x), n) > 0) o.require(rank(induced(lo.maps[x], n)) == h(lo.diagram.at(x), n), "truncation map at " + at);
      }
  }

  // Replacement: quasi-isomorphic with injective latching maps.
  Rng rrng(707);
  for (int i = 0; i < 200; ++i) {
    Field f(2);
    Diagram d = random_small_diagram(rrng, 2, 6, f);
    for (bool minimal : {false, true}) {
      Replacement r = minimal ? minimal_cofibrant_replace(d) : reedy_cofibrant_replace(d);
      const std::string at = std::string(minimal ? "minimal" : "reedy") + " replacement " + std::to_string(i);
      o.require(r.quasi_iso && r.latching_injective && validate(r.model).empty() && all_square_to_zero(r.model), at);
      for (Obj x = 0; x < d.size(); ++x) o.require(is_quasi_iso(r.to_original[x]), at + " object map");
      // Independent latching check: the latching map has full column rank in every degree.
      for (Obj b = 0; b < d.size(); ++b) {
        Latching L = latching(r.model, b);
        for (int n = 0; n < static_cast<int>(L.map.size()); ++n)
          o.require(rank(L.map[n]) == L.map[n].cols(), at + " latching rank");
      }
    }
  }

  // Subspace canonicity: permuted and recombined generators give the same basis.
  Rng srng(808);
  for (int i = 0; i < 1000; ++i) {
    Field f(random_prime(srng, {2, 3, 5}));
    const std::size_t n = uniform(srng, 1, 7), k = uniform(srng, 0, 7);
    Matrix g = random_matrix(f, n, k, srng);
    std::vector<std::size_t> perm(k);
    for (std::size_t j = 0; j < k; ++j) perm[j] = j;
    std::shuffle(perm.begin(), perm.end(), srng);
    Matrix g2 = g.select_cols(perm);
    Matrix mix = random_matrix(f, k, k, srng);
    if (rank(mix) == k) g2 = g2 * mix;
    Subspace a = Subspace::span(g), b = Subspace::span(g2);
    o.require(a.basis() == b.basis() && a.dim() == rank(g), "canonicity case " + std::to_string(i));
  }
  o.detail << complexes << " complexes with d d = 0; 200 cofibration-sequence diagrams; 200 replacements "
           << "(Reedy and minimal); 1000 canonicity cases";
}

void certify_scope(Outcome& o) {
  Field f(5);
  int golden = 0, random = 0;
  for (int k = 0; k <= 2; ++k, ++golden) o.require(verify_theorem_a(gen_cube(f, 3, 1), k).certified, "cube");
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k <= n; ++k, ++golden) {
      o.require(verify_theorem_a(gen_minimal(f, n, 1), k).certified, "zig-zag n=" + std::to_string(n));
      o.require(verify_theorem_a(gen_minimal(f, n, 1, true), k).certified, "split zig-zag n=" + std::to_string(n));
    }
  for (int k = 0; k <= 1; ++k, ++golden)
    o.require(verify_theorem_a(strict_zero_square(f, 2), k).certified, "strict zero square");
  Rng rng(1000);
  for (int i = 0; i < 60; ++i, ++random) {
    Field g(2);
    Diagram d = random_small_diagram(rng, 2, 8, g);
    const int k = static_cast<int>(uniform(rng, 0, 3));
    TheoremAReport r = verify_theorem_a(d, k);
    o.require(r.certified, "random " + std::to_string(i) + (r.failures.empty() ? "" : ": " + r.failures[0]));
  }
  o.detail << golden << " golden runs and " << random
           << " random diagrams with at most 8 objects; the general statement is not machine-checked";
}

}  // namespace

// With an argument N, runs criterion N only.
int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria = {
      {"square d2 distinguishes standard from split", square_value},
      {"3-cube pair values vanish, triple value iso", cube_values},
      {"zig-zag values vanish below n, top iso", zigzag_values},
      {"inclusion-exclusion chain exact on fans", inclusion_exclusion_exact},
      {"hocolim of m cones has H_{k+1} = (m-1) dim K", hocolim_law},
      {"reconstruction certifies cube and zig-zag", certify_golden},
      {"chase agrees with classical pages, E^inf = gr H", double_corpus},
      {"golden d2 equals the pair value", golden_d2},
      {"property suites", property_suites},
      {"reconstruction certified on the bounded corpus", certify_scope},
  };
  int failed = 0;
  const std::size_t only = argc > 1 ? std::stoul(argv[1]) : 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && only != i + 1) continue;
    Outcome o;
    const auto start = Clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    failed += !o.pass;
    std::printf("criterion %zu: %s - %s: %s [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
