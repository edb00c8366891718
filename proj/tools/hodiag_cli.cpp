// Command-line front end: reads a diagram / double / filtered complex file and
// reports homology, cofibrancy, derived data, hybridization, reconstruction and
// spectral sequence pages.
//
// Exit status: 0 ok, 1 invalid input, 2 certification failure, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hodiag/fileio.hpp"
#include "hodiag/generators.hpp"
#include "hodiag/hybrid.hpp"
#include "json.hpp"

using namespace hd;
using json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string input, output = "text", write;
  std::optional<elem> prime;
  std::uint64_t seed = 1;
  std::size_t max_gamma = 4;
  int level = 1, page = 3, count = 20, n = 3;
  std::size_t dim = 1;
  std::string kind = "cube";
};

struct Report {
  json data = json::object();
  std::vector<std::string> lines;
  int status = 0;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DiagramFile load(const Options& o) {
  if (o.input.empty()) throw InputError("--input is required for this command");
  return read_file(o.input, o.prime);
}

const Diagram& need_diagram(const DiagramFile& f) {
  if (!f.diagram) throw InputError("the input has no poset section");
  return *f.diagram;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

std::string family(const Poset& p, const FamilyValue& v) {
  std::string g;
  for (Obj x : v.path.gamma) g += (g.empty() ? "" : ",") + p.label(x);
  return p.label(v.path.alpha) + " -> {" + g + "} -> " + (v.path.beta ? p.label(*v.path.beta) : "?");
}

json value_json(const Poset& p, const FamilyValue& v) {
  json g = json::array();
  for (Obj x : v.path.gamma) g.push_back(p.label(x));
  return {{"alpha", p.label(v.path.alpha)},
          {"gamma", g},
          {"beta", v.path.beta ? p.label(*v.path.beta) : ""},
          {"degree", v.degree},
          {"order", v.order},
          {"classes", v.classes.cols()},
          {"defined", v.defined},
          {"rank", v.defined ? v.rank() : 0},
          {"indeterminacy", v.indeterminacy.dim()}};
}

Report cmd_homology(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  auto table = [&](const std::string& key, const std::vector<std::pair<std::string, ChainComplex>>& rows) {
    json arr = json::array();
    for (auto& [name, c] : rows) {
      auto b = betti(c);
      arr.push_back({{"name", name}, {"betti", b}});
      r.lines.push_back(key + " " + name + ": " + join(b));
    }
    r.data[key] = arr;
  };
  if (f.diagram) {
    std::vector<std::pair<std::string, ChainComplex>> rows;
    for (Obj a = 0; a < f.diagram->size(); ++a) rows.emplace_back(f.diagram->index().label(a), f.diagram->at(a));
    table("object", rows);
  }
  if (f.double_complex) {
    std::vector<std::pair<std::string, ChainComplex>> rows;
    for (int p = 0; p < f.double_complex->width(); ++p) rows.emplace_back(std::to_string(p), f.double_complex->columns[p]);
    rows.emplace_back("total", total(*f.double_complex).complex);
    table("column", rows);
  }
  if (f.filtered) {
    std::vector<std::pair<std::string, ChainComplex>> rows;
    for (std::size_t s = 0; s < f.filtered->stages.size(); ++s) rows.emplace_back(std::to_string(s), f.filtered->stages[s]);
    table("stage", rows);
  }
  return r;
}

Report cmd_cofibrant(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  CofibrancyReport c = minimal_cofibrant_check(need_diagram(f));
  r.data = {{"splittable", c.splittable}, {"disks_coned", c.disks_coned}, {"latching_mono", c.latching_mono},
            {"minimal_cofibrant", c.ok()}, {"issues", c.issues}};
  r.lines.push_back(std::string("minimal cofibrant: ") + (c.ok() ? "yes" : "no"));
  for (auto& i : c.issues) r.lines.push_back("  " + i);
  r.status = c.ok() ? 0 : 2;
  return r;
}

Report cmd_minimal(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  Replacement rep = minimal_cofibrant_replace(need_diagram(f));
  // A non-minimal model is still a valid cofibrant replacement; only report it.
  const bool ok = rep.quasi_iso && rep.latching_injective;
  DiagramFile out{f.field, rep.model, {}, {}};
  r.data = {{"quasi_iso", rep.quasi_iso}, {"latching_injective", rep.latching_injective}, {"minimal", rep.minimal},
            {"diagnostics", rep.diagnostics}, {"model", json::parse(serialize(out))}};
  r.lines.push_back(std::string("replacement: ") + (ok ? "ok" : "failed") + (rep.minimal ? "" : ", not minimal"));
  for (Obj a = 0; a < rep.model.size(); ++a)
    r.lines.push_back("  " + rep.model.index().label(a) + ": dims " + join(rep.model.at(a).dims()));
  for (auto& d : rep.diagnostics) r.lines.push_back("  " + d);
  if (!o.write.empty()) std::ofstream(o.write) << serialize(out);
  r.status = ok ? 0 : 2;
  return r;
}

Report cmd_derived(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  const Diagram& d = need_diagram(f);
  Tower t = build_tower(d, o.level, o.max_gamma);
  const Poset& J = t.diagram.index();
  json vals = json::array(), formal = json::array();
  r.lines.push_back("derived data through total degree " + std::to_string(o.level) + ", " +
                    std::to_string(J.size()) + " objects");
  for (auto& v : t.values) {
    vals.push_back(value_json(J, v));
    r.lines.push_back("  H_" + std::to_string(v.degree) + " " + family(J, v) + "  order " + std::to_string(v.order) +
                      (v.defined ? "  rank " + std::to_string(v.rank()) : "  undefined") + "  indeterminacy " +
                      std::to_string(v.indeterminacy.dim()));
  }
  for (auto& v : t.formal) formal.push_back(value_json(J, v));
  r.lines.push_back("  formal differentials: " + std::to_string(t.formal.size()));
  r.data = {{"level", o.level}, {"objects", J.labels()}, {"values", vals}, {"formal", formal}};
  return r;
}

Report cmd_hybridize(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  HybridApprox h = hybridize(need_diagram(f), o.level, o.max_gamma);
  json low = json::array();
  for (auto& g : h.low) low.push_back(g.dims);
  r.data = {{"level", h.level}, {"hybrid", h.hybrid}, {"objects", h.high.size()}, {"formal", h.formal.size()},
            {"low", low}, {"issues", h.issues}};
  r.lines.push_back("level " + std::to_string(h.level) + " hybrid: " + (h.hybrid ? "yes" : "no"));
  for (auto& i : h.issues) r.lines.push_back("  " + i);
  r.status = h.hybrid ? 0 : 2;
  return r;
}

Report cmd_reconstruct(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  TheoremAReport t = verify_theorem_a(need_diagram(f), o.level, o.max_gamma);
  r.data = {{"level", t.k}, {"replaced", t.replaced}, {"certified", t.certified}, {"tower_objects", t.tower_objects},
            {"failures", t.failures}};
  r.lines.push_back("reconstruction through degree " + std::to_string(t.k) + ": " +
                    (t.certified ? "certified" : "not certified") + (t.replaced ? " (input replaced)" : ""));
  for (auto& x : t.failures) r.lines.push_back("  " + x);
  r.status = t.certified ? 0 : 2;
  return r;
}

json pages_json(const std::vector<SSPage>& pages, std::vector<std::string>& lines) {
  json arr = json::array();
  for (auto& pg : pages) {
    json entries = json::array();
    lines.push_back("E^" + std::to_string(pg.r) + ":");
    for (auto& [k, d] : pg.dim) {
      auto rk = pg.d_rank.count(k) ? pg.d_rank.at(k) : 0;
      auto in = pg.indeterminacy.count(k) ? pg.indeterminacy.at(k) : 0;
      entries.push_back({{"p", k.first}, {"q", k.second}, {"dim", d}, {"rank", rk}, {"indeterminacy", in}});
      lines.push_back("  (" + std::to_string(k.first) + "," + std::to_string(k.second) + ") dim " + std::to_string(d) +
                      "  d rank " + std::to_string(rk) + "  indeterminacy " + std::to_string(in));
    }
    arr.push_back({{"r", pg.r}, {"entries", entries}});
  }
  return arr;
}

Report cmd_ss(const Options& o) {
  Report r;
  DiagramFile f = load(o);
  if (o.page < 1) throw InputError("--page must be at least 1");
  if (f.double_complex) {
    const DoubleComplex& dc = *f.double_complex;
    r.data["double"] = pages_json(chase_pages(dc, o.page), r.lines);
    CrossCheck cc = cross_check(dc, o.page);
    r.data["cross_check"] = {{"checks", cc.checks}, {"ok", cc.ok()}, {"failures", cc.failures}};
    r.lines.push_back("cross-check against subquotient pages: " + std::string(cc.ok() ? "ok" : "FAILED") + " (" +
                      std::to_string(cc.checks) + " checks)");
    for (auto& x : cc.failures) r.lines.push_back("  " + x);
    if (!cc.ok()) r.status = 2;
  }
  if (f.filtered) {
    r.lines.push_back("filtered complex:");
    r.data["filtered"] = pages_json(classical_pages(*f.filtered, o.page), r.lines);
  }
  if (!f.double_complex && !f.filtered) throw InputError("the input has no double or filtered section");
  return r;
}

Report cmd_check(const Options& o) {
  Report r;
  Rng rng(o.seed);
  std::size_t ok = 0, total_cases = 0;
  json fails = json::array();
  auto record = [&](const std::string& suite, int i, const std::string& msg) {
    ++total_cases;
    if (msg.empty()) {
      ++ok;
      return;
    }
    fails.push_back({{"suite", suite}, {"case", i}, {"message", msg}});
    r.lines.push_back("  " + suite + " case " + std::to_string(i) + ": " + msg);
  };
  for (int i = 0; i < o.count; ++i) {
    Field f(random_prime(rng, {2, 3, 5}));
    Poset p = random_poset(rng, uniform(rng, 2, 8), 0.5);
    Diagram d = random_cofibrant_diagram(f, p, 2, 2, rng);
    record("diagram", i, validate(d));
    DiagramFile df{f, d, {}, {}};
    record("round-trip", i, serialize(parse_file(serialize(df))) == serialize(df) ? "" : "file round-trip differs");
    TheoremAReport t = verify_theorem_a(d, static_cast<int>(uniform(rng, 0, 2)), o.max_gamma);
    record("reconstruction", i, t.certified ? "" : (t.failures.empty() ? "not certified" : t.failures[0]));
    DoubleComplex dc = random_double_complex(f, static_cast<int>(uniform(rng, 1, 4)), 3, 3, rng);
    CrossCheck cc = cross_check(dc, 3);
    record("spectral", i, cc.ok() ? "" : cc.failures[0]);
  }
  r.data = {{"seed", o.seed}, {"cases", total_cases}, {"passed", ok}, {"failures", fails}};
  r.lines.insert(r.lines.begin(), "checked " + std::to_string(total_cases) + " cases, " + std::to_string(ok) + " passed");
  r.status = ok == total_cases ? 0 : 2;
  return r;
}

Report cmd_gen(const Options& o) {
  Report r;
  Field f(o.prime.value_or(5));
  Rng rng(o.seed);
  DiagramFile out{f, {}, {}, {}};
  if (o.kind == "cube")
    out.diagram = gen_cube(f, o.n, o.dim);
  else if (o.kind == "minimal")
    out.diagram = gen_minimal(f, o.n, o.dim);
  else if (o.kind == "split")
    out.diagram = gen_minimal(f, o.n, o.dim, true);
  else if (o.kind == "square")
    out.diagram = strict_zero_square(f, o.dim);
  else if (o.kind == "random")
    out.diagram = random_cofibrant_diagram(f, random_poset(rng, static_cast<std::size_t>(o.n), 0.5), 2, o.dim, rng);
  else if (o.kind == "double")
    out.double_complex = random_double_complex(f, o.n, 3, o.dim, rng);
  else if (o.kind == "filtered")
    out.filtered = column_filtration(random_double_complex(f, o.n, 3, o.dim, rng));
  else
    throw InputError("unknown kind '" + o.kind + "'");
  const std::string text = serialize(out);
  r.data = json::parse(text);
  if (o.write.empty()) {
    r.lines.push_back(text);
  } else {
    std::ofstream(o.write) << text;
    r.lines.push_back("wrote " + o.write);
  }
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homotopy diagrams over finite fields: derived data, reconstruction, spectral sequences"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* c, bool input) {
    if (input) c->add_option("-i,--input", o.input, "diagram file")->required();
    c->add_option("--prime", o.prime, "field characteristic, overrides the file");
    c->add_option("--output", o.output, "text or structured")->check(CLI::IsMember({"text", "structured"}));
    c->add_option("--max-gamma", o.max_gamma, "largest antichain considered");
  };
  std::map<std::string, Report (*)(const Options&)> run;
  auto sub = [&](const std::string& name, const std::string& help, Report (*fn)(const Options&), bool input = true) {
    CLI::App* c = app.add_subcommand(name, help);
    common(c, input);
    run[name] = fn;
    return c;
  };
  sub("homology", "objectwise homology", cmd_homology);
  sub("cofibrant", "minimal cofibrancy check", cmd_cofibrant);
  sub("minimal", "minimal cofibrant replacement", cmd_minimal)->add_option("--write", o.write, "save the model");
  sub("derived", "derived diagram values", cmd_derived)->add_option("--level", o.level, "top total degree");
  sub("hybridize", "hybrid approximation", cmd_hybridize)->add_option("--level", o.level, "hybridization level");
  sub("reconstruct", "rebuild from derived data and certify", cmd_reconstruct)
      ->add_option("--level", o.level, "top degree");
  sub("ss", "spectral sequence pages", cmd_ss)->add_option("--page", o.page, "last page");
  {
    CLI::App* c = sub("check", "randomized invariant suites", cmd_check, false);
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--count", o.count, "cases per suite");
  }
  {
    CLI::App* c = sub("gen", "write an example file", cmd_gen, false);
    c->add_option("kind", o.kind, "cube | minimal | split | square | random | double | filtered");
    c->add_option("--n", o.n, "cube dimension, zig-zag length, object or column count");
    c->add_option("--dim", o.dim, "dimension of V, or per-degree bound");
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--write", o.write, "output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  std::string name;
  for (auto* c : app.get_subcommands()) name = c->get_name();
  try {
    Report r = run.at(name)(o);
    if (o.output == "structured") {
      json doc = {{"command", name}, {"status", r.status}, {"result", r.data}};
      std::cout << doc.dump(2) << "\n";
    } else {
      for (auto& l : r.lines) std::cout << l << "\n";
    }
    return r.status;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << " (raise --max-gamma)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
