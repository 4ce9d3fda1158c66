#include "posmap/io.hpp"

#include <fstream>
#include <sstream>

namespace posmap {

using nlohmann::json;

namespace {

json rows_to_json(const RealMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

int read_dim(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing key \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_integer())
    throw ParseError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

RealMatrix read_rows(const json& j, const char* key, int dim) {
  if (!j.contains(key))
    throw ParseError(std::string("missing key \"") + key + "\"");
  const json& rows = j.at(key);
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw ParseError(std::string("\"") + key + "\" must hold " +
                     std::to_string(dim) + " rows");
  RealMatrix m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw ParseError(std::string("\"") + key + "\"[" + std::to_string(i) +
                       "] must hold " + std::to_string(dim) + " numbers");
    for (int k = 0; k < dim; ++k) {
      if (!row[k].is_number())
        throw ParseError(std::string("\"") + key + "\"[" + std::to_string(i) +
                         "][" + std::to_string(k) + "] is not a number");
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

}  // namespace

json to_json(const DiagonalTypeMap& map) {
  return {{"n", map.n()}, {"a", rows_to_json(map.a())}};
}

json to_json(const OrthogonalMatrix& m) {
  return {{"dim", m.dim()}, {"m", rows_to_json(m.matrix())}};
}

json to_json(const PositivityVerdict& v) {
  json out = {{"status", to_string(v.status)},
              {"margin", v.margin},
              {"witness", v.witness ? json(*v.witness) : json::array()},
              {"method", v.method}};
  if (v.offending_entry)
    out["offending_entry"] = {v.offending_entry->first,
                              v.offending_entry->second};
  return out;
}

DiagonalTypeMap map_from_json(const json& j) {
  const int n = read_dim(j, "n");
  if (n < 2 || n > kMaxDim)
    throw ParseError("\"n\" must lie in [2, 64], got " + std::to_string(n));
  return DiagonalTypeMap(read_rows(j, "a", n));
}

OrthogonalMatrix orthogonal_from_json(const json& j) {
  const int dim = read_dim(j, "dim");
  if (dim < 1 || dim > kMaxDim)
    throw ParseError("\"dim\" must lie in [1, 64], got " + std::to_string(dim));
  return OrthogonalMatrix(read_rows(j, "m", dim));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "JSON parse error at byte " << e.byte << ": " << e.what();
    throw ParseError(os.str());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_json(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace posmap
