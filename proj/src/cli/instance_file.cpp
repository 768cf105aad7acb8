#include "subrot/cli/instance_file.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subrot/cli/format.hpp"

namespace subrot::cli {

namespace {

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorKind::InvalidInput, "instance file: " + why); }

Matrix parse_matrix(const Json& doc, const char* field) {
  if (!doc.contains(field)) invalid(std::string("missing field '") + field + "'");
  const Json& rows = doc.at(field);
  if (!rows.is_array() || rows.empty()) invalid(std::string("'") + field + "' must be a nonempty array of rows");
  std::size_t cols = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].empty()) invalid(std::string("'") + field + "' rows must be nonempty arrays");
    if (i == 0) cols = rows[i].size();
    if (rows[i].size() != cols) invalid(std::string("'") + field + "' is not rectangular");
  }
  Matrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const Json& x = rows[i][j];
      if (!x.is_number()) invalid(std::string("'") + field + "' has a non-numeric entry");
      m(i, j) = x.get<double>();
      if (!std::isfinite(m(i, j))) invalid(std::string("'") + field + "' has a non-finite entry");
    }
  }
  return m;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    invalid(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object()) invalid("top level must be an object");

  InstanceFile file;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) invalid("'label' must be a string");
    file.spec.label = doc["label"].get<std::string>();
  }
  if (!doc.contains("layout") || !doc["layout"].is_string()) invalid("missing string field 'layout'");
  const auto layout = doc["layout"].get<std::string>();
  if (layout == "central") {
    file.layout = Layout::Central;
  } else if (layout == "case2") {
    file.layout = Layout::CaseII;
  } else {
    invalid("layout must be \"central\" or \"case2\", got \"" + layout + "\"");
  }

  file.spec.a_plus = DenseSymmetric(parse_matrix(doc, "a_plus"));
  file.spec.a_minus = DenseSymmetric(parse_matrix(doc, "a_minus"));
  file.spec.w = DenseRect(parse_matrix(doc, "w"));
  if (file.spec.w.rows() != file.spec.a_plus.size() || file.spec.w.cols() != file.spec.a_minus.size())
    invalid("'w' must be n_plus x n_minus");

  if (doc.contains("gap_hint") && !doc["gap_hint"].is_null()) {
    const Json& h = doc["gap_hint"];
    if (!h.is_array() || h.size() != 2 || !h[0].is_number() || !h[1].is_number())
      invalid("'gap_hint' must be [alpha, beta]");
    file.gap_hint = std::pair{h[0].get<double>(), h[1].get<double>()};
    if (!(file.gap_hint->first < file.gap_hint->second)) invalid("'gap_hint' needs alpha < beta");
  }
  return file;
}

std::string serialize_instance(const InstanceFile& file) {
  Json doc;
  doc["label"] = file.spec.label;
  doc["layout"] = to_string(file.layout);
  doc["a_plus"] = matrix_json(file.spec.a_plus.matrix());
  doc["a_minus"] = matrix_json(file.spec.a_minus.matrix());
  doc["w"] = matrix_json(file.spec.w.matrix());
  if (file.gap_hint) doc["gap_hint"] = Json::array({file.gap_hint->first, file.gap_hint->second});
  return dump_json(doc);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorKind::InvalidInput, "write to '" + path + "' failed");
}

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace subrot::cli
