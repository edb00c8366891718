#include "hodiag/fileio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace hd {

using json = nlohmann::ordered_json;

FileError::FileError(const std::string& msg, int line_, std::string section_, std::string object_)
    : std::runtime_error((line_ > 0 ? "line " + std::to_string(line_) + ": " : std::string()) +
                         (section_.empty() ? "" : "[" + section_ + (object_.empty() ? "" : " " + object_) + "] ") + msg),
      line(line_),
      section(std::move(section_)),
      object(std::move(object_)) {}

namespace {

struct Reader {
  const std::string& text;
  Field f;

  int line_of(const std::string& section, const std::string& object) const {
    std::size_t pos = text.find("\"" + section + "\"");
    if (pos == std::string::npos) return 0;
    if (!object.empty()) {
      std::size_t o = text.find("\"" + object + "\"", pos);
      if (o != std::string::npos) pos = o;
    }
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& section, const std::string& object = "") const {
    throw FileError(msg, line_of(section, object), section, object);
  }

  Matrix matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& section,
                const std::string& object, const std::string& what) const {
    if (!j.is_array()) fail(what + " must be an array of rows", section, object);
    if (j.size() != rows && !(rows == 0 && j.empty()))
      fail(what + " has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows), section, object);
    Matrix m(f, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const json& row = j[r];
      if (!row.is_array() || row.size() != cols)
        fail(what + " row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries", section, object);
      for (std::size_t c = 0; c < cols; ++c) {
        if (!row[c].is_number_integer()) fail(what + " entries must be integers", section, object);
        m.set(r, c, row[c].get<long long>());
      }
    }
    return m;
  }

  // {"n": rows} keyed by degree, with shapes from the given dimension functions.
  template <class Rows, class Cols>
  std::vector<Matrix> graded(const json& j, int len, Rows rows, Cols cols, const std::string& section,
                             const std::string& object) const {
    if (!j.is_object()) fail("expected an object keyed by degree", section, object);
    std::vector<Matrix> out;
    for (int n = 0; n < len; ++n) out.push_back(Matrix(f, rows(n), cols(n)));
    for (auto& [key, val] : j.items()) {
      int n = -1;
      try {
        std::size_t used = 0;
        n = std::stoi(key, &used);
        if (used != key.size()) n = -1;
      } catch (const std::exception&) {
      }
      if (n < 0) fail("degree key '" + key + "' is not a non-negative integer", section, object);
      if (n >= len) {
        if (rows(n) * cols(n) == 0) continue;
        fail("degree " + key + " outside the support", section, object);
      }
      out[n] = matrix(val, rows(n), cols(n), section, object, "degree " + key);
    }
    return out;
  }

  ChainComplex complex(const json& j, const std::string& section, const std::string& object) const {
    if (!j.is_object() || !j.contains("dims")) fail("complex needs \"dims\"", section, object);
    std::vector<std::size_t> dims;
    for (auto& x : j["dims"]) {
      if (!x.is_number_integer() || x.get<long long>() < 0) fail("dims must be non-negative integers", section, object);
      dims.push_back(x.get<std::size_t>());
    }
    const int len = static_cast<int>(dims.size());
    auto dim = [&](int n) { return n < 0 || n >= len ? std::size_t{0} : dims[n]; };
    std::vector<Matrix> d(len, Matrix());
    if (j.contains("d")) {
      d = graded(j["d"], len, [&](int n) { return dim(n - 1); }, [&](int n) { return dim(n); }, section, object);
      if (len > 0 && d[0].rows() * d[0].cols() == 0) d[0] = Matrix();
    } else {
      for (int n = 1; n < len; ++n) d[n] = Matrix(f, dims[n - 1], dims[n]);
    }
    try {
      return ChainComplex(f, dims, d);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), section, object);
    }
  }

  Comps chain_map(const json& j, const ChainComplex& s, const ChainComplex& t, const std::string& section,
                  const std::string& object) const {
    const int len = std::max(s.length(), t.length());
    Comps c = graded(j, len, [&](int n) { return t.dim(n); }, [&](int n) { return s.dim(n); }, section, object);
    if (auto e = chain_map_defect(s, t, c); !e.empty()) fail(e, section, object);
    return c;
  }
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json graded_json(const std::vector<Matrix>& comps, int from) {
  json j = json::object();
  for (int n = from; n < static_cast<int>(comps.size()); ++n)
    if (!comps[n].is_zero()) j[std::to_string(n)] = matrix_json(comps[n]);
  return j;
}

json complex_json(const ChainComplex& c) {
  json j;
  j["dims"] = c.dims();
  std::vector<Matrix> d;
  for (int n = 0; n < c.length(); ++n) d.push_back(n == 0 ? Matrix() : c.d(n));
  j["d"] = graded_json(d, 1);
  return j;
}

std::string inline_dump(const json& j) {
  if (!j.is_array()) return j.dump();
  std::string s = "[";
  for (std::size_t i = 0; i < j.size(); ++i) s += (i ? ", " : "") + inline_dump(j[i]);
  return s + "]";
}

// Arrays nested at most two deep without objects inside are printed on one line.
void pretty(const json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  auto flat = [](const json& x) {
    if (!x.is_array()) return !x.is_object();
    for (auto& e : x)
      for (auto& y : e.is_array() ? e : json::array({e}))
        if (y.is_object() || y.is_array()) return false;
    return true;
  };
  if (j.is_object() && !j.empty()) {
    out += "{\n";
    std::size_t i = 0;
    for (auto& [k, v] : j.items()) {
      out += pad + "  " + json(k).dump() + ": ";
      pretty(v, indent + 2, out);
      out += ++i < j.size() ? ",\n" : "\n";
    }
    out += pad + "}";
  } else if (j.is_array() && !j.empty() && !flat(j)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad + "  ";
      pretty(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
  } else {
    out += inline_dump(j);
  }
}

}  // namespace

DiagramFile parse_file(const std::string& text, std::optional<elem> prime) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw FileError(std::string("syntax error: ") + e.what(), line, "", "");
  }
  if (!doc.is_object()) throw FileError("document must be a JSON object", 1, "", "");

  DiagramFile out;
  Reader rd{text, Field()};
  try {
    if (prime) {
      rd.f = Field(*prime);
    } else {
      if (!doc.contains("field") || !doc["field"].is_number_integer()) rd.fail("missing integer \"field\"", "field");
      rd.f = Field(doc["field"].get<elem>());
    }
  } catch (const std::invalid_argument& e) {
    rd.fail(e.what(), "field");
  }
  out.field = rd.f;

  if (doc.contains("poset")) {
    const json& ps = doc["poset"];
    if (!ps.contains("objects") || !ps["objects"].is_array()) rd.fail("poset needs an \"objects\" array", "poset");
    std::vector<std::string> labels;
    for (auto& x : ps["objects"]) {
      if (!x.is_string()) rd.fail("object labels must be strings", "poset");
      labels.push_back(x.get<std::string>());
    }
    std::vector<std::pair<std::string, std::string>> rel;
    if (ps.contains("relations"))
      for (auto& r : ps["relations"]) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_string() || !r[1].is_string())
          rd.fail("relations are pairs of labels", "poset");
        rel.emplace_back(r[0].get<std::string>(), r[1].get<std::string>());
      }
    Poset P;
    try {
      P = Poset::from_labels(labels, rel);
    } catch (const std::invalid_argument& e) {
      rd.fail(e.what(), "poset");
    }
    std::vector<ChainComplex> objs;
    const json empty = json::object();
    const json& cs = doc.contains("complexes") ? doc["complexes"] : empty;
    for (auto& [key, val] : cs.items())
      if (!P.index_of(key)) rd.fail("complex for unknown object", "complexes", key);
    for (const auto& l : labels) {
      if (!cs.contains(l)) rd.fail("missing complex", "complexes", l);
      objs.push_back(rd.complex(cs[l], "complexes", l));
    }
    std::map<std::pair<Obj, Obj>, Comps> maps;
    const json& ms = doc.contains("maps") ? doc["maps"] : empty;
    for (auto& [key, val] : ms.items()) {
      const auto lt = key.find('<');
      if (lt == std::string::npos) rd.fail("map keys have the form \"a<b\"", "maps", key);
      auto a = P.index_of(key.substr(0, lt)), b = P.index_of(key.substr(lt + 1));
      if (!a || !b) rd.fail("map between unknown objects", "maps", key);
      if (!P.is_cover(*a, *b)) rd.fail("maps are given on Hasse covers only", "maps", key);
      maps[{*a, *b}] = rd.chain_map(val, objs[*a], objs[*b], "maps", key);
    }
    for (auto [a, b] : P.covers())
      if (!maps.count({a, b})) {
        Comps z;
        for (int n = 0; n < std::max(objs[a].length(), objs[b].length()); ++n)
          z.push_back(Matrix(rd.f, objs[b].dim(n), objs[a].dim(n)));
        maps[{a, b}] = z;
      }
    try {
      Diagram d(P, objs, maps);
      if (auto e = validate(d); !e.empty()) rd.fail(e, "maps");
      out.diagram = d;
    } catch (const std::invalid_argument& e) {
      rd.fail(e.what(), "maps");
    }
  }

  if (doc.contains("double")) {
    const json& dj = doc["double"];
    DoubleComplex dc{rd.f, {}, {}};
    if (!dj.contains("columns") || !dj["columns"].is_array()) rd.fail("double needs a \"columns\" array", "double");
    int p = 0;
    for (auto& c : dj["columns"]) dc.columns.push_back(rd.complex(c, "double", "column " + std::to_string(p++)));
    dc.horizontal.push_back({});
    const json hs = dj.contains("horizontal") ? dj["horizontal"] : json::array();
    if (hs.size() + 1 != dc.columns.size() && !(dc.columns.empty() && hs.empty()))
      rd.fail("need one horizontal map per adjacent pair of columns", "double");
    for (std::size_t i = 0; i < hs.size(); ++i)
      dc.horizontal.push_back(rd.chain_map(hs[i], dc.columns[i + 1], dc.columns[i], "double", "horizontal " + std::to_string(i)));
    if (dc.columns.empty()) dc.horizontal.clear();
    if (auto e = validate(dc); !e.empty()) rd.fail(e, "double");
    out.double_complex = dc;
  }

  if (doc.contains("filtered")) {
    const json& fj = doc["filtered"];
    FilteredComplex fc{rd.f, {}, {}};
    if (!fj.contains("stages") || !fj["stages"].is_array()) rd.fail("filtered needs a \"stages\" array", "filtered");
    int s = 0;
    for (auto& c : fj["stages"]) fc.stages.push_back(rd.complex(c, "filtered", "stage " + std::to_string(s++)));
    const json is = fj.contains("inclusions") ? fj["inclusions"] : json::array();
    if (is.size() + 1 != fc.stages.size()) rd.fail("need one inclusion per adjacent pair of stages", "filtered");
    for (std::size_t i = 0; i < is.size(); ++i)
      fc.inclusions.push_back(rd.chain_map(is[i], fc.stages[i], fc.stages[i + 1], "filtered", "inclusion " + std::to_string(i)));
    if (auto e = validate(fc); !e.empty()) rd.fail(e, "filtered");
    out.filtered = fc;
  }
  if (!out.diagram && !out.double_complex && !out.filtered)
    throw FileError("no poset, double or filtered section", 0, "", "");
  return out;
}

DiagramFile read_file(const std::string& path, std::optional<elem> prime) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path, 0, "", "");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_file(ss.str(), prime);
}

std::string serialize(const DiagramFile& f) {
  json doc;
  doc["field"] = f.field.p;
  if (f.diagram) {
    const Diagram& d = *f.diagram;
    const Poset& P = d.index();
    json rel = json::array();
    for (auto [a, b] : P.covers()) rel.push_back({P.label(a), P.label(b)});
    doc["poset"] = {{"objects", P.labels()}, {"relations", rel}};
    json cs = json::object();
    for (Obj a = 0; a < d.size(); ++a) cs[P.label(a)] = complex_json(d.at(a));
    doc["complexes"] = cs;
    json ms = json::object();
    for (auto& [e, c] : d.cover_maps()) ms[P.label(e.first) + "<" + P.label(e.second)] = graded_json(c, 0);
    doc["maps"] = ms;
  }
  if (f.double_complex) {
    json cols = json::array(), hs = json::array();
    for (auto& c : f.double_complex->columns) cols.push_back(complex_json(c));
    for (std::size_t p = 1; p < f.double_complex->horizontal.size(); ++p)
      hs.push_back(graded_json(f.double_complex->horizontal[p], 0));
    doc["double"] = {{"columns", cols}, {"horizontal", hs}};
  }
  if (f.filtered) {
    json st = json::array(), inc = json::array();
    for (auto& c : f.filtered->stages) st.push_back(complex_json(c));
    for (auto& c : f.filtered->inclusions) inc.push_back(graded_json(c, 0));
    doc["filtered"] = {{"stages", st}, {"inclusions", inc}};
  }
  std::string out;
  pretty(doc, 0, out);
  return out + "\n";
}

}  // namespace hd
