#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "hodiag/diagram.hpp"
#include "hodiag/specseq.hpp"

namespace hd {

// JSON document with sections
//   "field": p
//   "poset": {"objects": [labels], "relations": [[a, b], ...]}   a < b
//   "complexes": {label: {"dims": [...], "d": {"n": rows}}}
//   "maps": {"a<b": {"n": rows}}                                 Hasse covers only
//   "double": {"columns": [complex...], "horizontal": [{"n": rows}...]}  entry p maps C_{p+1} -> C_p
//   "filtered": {"stages": [complex...], "inclusions": [{"n": rows}...]}
// Matrices are row-major nested integer arrays; omitted degrees are zero.
struct FileError : std::runtime_error {
  int line = 0;  // 1-based; 0 when unknown
  std::string section, object;
  FileError(const std::string& msg, int line, std::string section, std::string object);
};

struct DiagramFile {
  Field field;
  std::optional<Diagram> diagram;
  std::optional<DoubleComplex> double_complex;
  std::optional<FilteredComplex> filtered;
};

// A prime given here overrides the file's field; entries are reduced mod p.
// Throws FileError on syntax, shape or validation errors.
DiagramFile parse_file(const std::string& text, std::optional<elem> prime = {});
DiagramFile read_file(const std::string& path, std::optional<elem> prime = {});
std::string serialize(const DiagramFile& f);

}  // namespace hd
