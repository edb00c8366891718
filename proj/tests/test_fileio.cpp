#include "doctest.h"
#include "hodiag/fileio.hpp"
#include "hodiag/generators.hpp"

using namespace hd;

namespace {

const char* kSquare = R"({
 "field": 5,
 "poset": {"objects": ["a", "b", "c", "d"], "relations": [["a", "b"], ["a", "c"], ["b", "d"], ["c", "d"]]},
 "complexes": {
  "a": {"dims": [1]},
  "b": {"dims": [1, 1], "d": {"1": [[1]]}},
  "c": {"dims": [1, 1], "d": {"1": [[1]]}},
  "d": {"dims": [1, 2], "d": {"1": [[1, 1]]}}
 },
 "maps": {
  "a<b": {"0": [[1]]},
  "a<c": {"0": [[1]]},
  "b<d": {"0": [[1]], "1": [[1], [0]]},
  "c<d": {"0": [[1]], "1": [[0], [1]]}
 }
})";

bool same(const Diagram& a, const Diagram& b) {
  if (a.index().labels() != b.index().labels() || a.index().covers() != b.index().covers()) return false;
  if (!(a.objects() == b.objects())) return false;
  for (auto [x, y] : a.index().covers())
    for (int n = 0; n < std::max(a.length(), b.length()); ++n)
      if (!(a.map(x, y, n) == b.map(x, y, n))) return false;
  return true;
}

}  // namespace

TEST_CASE("square file parses and round-trips") {
  DiagramFile f = parse_file(kSquare);
  REQUIRE(f.diagram);
  CHECK(f.field.p == 5);
  CHECK(f.diagram->size() == 4);
  CHECK(f.diagram->at(f.diagram->index().at("d")).dim(1) == 2);
  const std::string s = serialize(f);
  DiagramFile g = parse_file(s);
  CHECK(same(*f.diagram, *g.diagram));
  CHECK(serialize(g) == s);
}

TEST_CASE("generated diagrams round-trip") {
  Field f(3);
  for (auto d : {gen_cube(f, 3, 2), gen_minimal(f, 3, 1), gen_minimal(f, 2, 2, true), strict_zero_square(f, 2)}) {
    DiagramFile x{f, d, {}, {}};
    const std::string s = serialize(x);
    DiagramFile y = parse_file(s);
    REQUIRE(y.diagram);
    CHECK(same(d, *y.diagram));
    CHECK(serialize(y) == s);
  }
}

TEST_CASE("double and filtered sections round-trip") {
  Rng rng(9);
  Field f(5);
  DoubleComplex dc = random_double_complex(f, 3, 2, 2, rng);
  DiagramFile x{f, {}, dc, column_filtration(dc)};
  const std::string s = serialize(x);
  DiagramFile y = parse_file(s);
  REQUIRE(y.double_complex);
  REQUIRE(y.filtered);
  for (int p = 0; p < dc.width(); ++p) {
    CHECK(y.double_complex->columns[p] == dc.columns[p]);
    for (int q = 0; q < 3; ++q) CHECK(y.double_complex->h(p, q) == dc.h(p, q));
  }
  CHECK(y.filtered->stages == x.filtered->stages);
  CHECK(serialize(y) == s);
}

TEST_CASE("a prime on the command line overrides the file") {
  DiagramFile f = parse_file(kSquare, 2);
  CHECK(f.field.p == 2);
  // d of object d becomes [1 1] mod 2; still a valid diagram.
  CHECK(f.diagram->at(f.diagram->index().at("d")).d(1) == Matrix::from_rows(Field(2), {{1, 1}}));
}

TEST_CASE("errors carry a position") {
  SUBCASE("syntax") {
    try {
      parse_file("{\n \"field\": 5,\n \"poset\": [\n}");
      FAIL("no error");
    } catch (const FileError& e) {
      CHECK(e.line == 4);
    }
  }
  SUBCASE("d d nonzero names the degree and the object") {
    std::string bad = R"({
 "field": 5,
 "poset": {"objects": ["x"]},
 "complexes": {
  "x": {"dims": [1, 1, 1], "d": {"1": [[1]], "2": [[1]]}}
 }
})";
    try {
      parse_file(bad);
      FAIL("no error");
    } catch (const FileError& e) {
      CHECK(e.section == "complexes");
      CHECK(e.object == "x");
      CHECK(e.line == 5);
      CHECK(std::string(e.what()).find("degree 2") != std::string::npos);
    }
  }
  SUBCASE("map off the Hasse diagram") {
    std::string bad = kSquare;
    bad.replace(bad.find("\"a<b\""), 5, "\"a<d\"");
    try {
      parse_file(bad);
      FAIL("no error");
    } catch (const FileError& e) {
      CHECK(e.section == "maps");
      CHECK(e.object == "a<d");
    }
  }
  SUBCASE("non-commuting square") {
    std::string bad = kSquare;
    bad.replace(bad.find("[[0], [1]]"), 10, "[[1], [0]]");
    bad.replace(bad.find("\"a<c\": {\"0\": [[1]]}"), 19, "\"a<c\": {\"0\": [[2]]}");
    CHECK_THROWS_AS(parse_file(bad), FileError);
  }
  SUBCASE("shape mismatch") {
    std::string bad = kSquare;
    bad.replace(bad.find("[[1, 1]]"), 8, "[[1]]");
    try {
      parse_file(bad);
      FAIL("no error");
    } catch (const FileError& e) {
      CHECK(e.object == "d");
    }
  }
  SUBCASE("not a prime") { CHECK_THROWS_AS(parse_file(kSquare, 4), FileError); }
}
