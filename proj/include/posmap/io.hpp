#pragma once

// JSON interchange:
//   map:        {"n": <int>, "a": [[row 0], [row 1], ...]}
//   orthogonal: {"dim": <int>, "m": [[row 0], ...]}
//   verdict:    {"status": ..., "margin": ..., "witness": [...], "method": ...}

#include <string>

#include "json.hpp"
#include "posmap/construction.hpp"
#include "posmap/errors.hpp"
#include "posmap/map_core.hpp"
#include "posmap/positivity.hpp"

namespace posmap {

// Malformed JSON input; message carries the byte offset or the offending key.
class ParseError : public Error {
 public:
  using Error::Error;
};

nlohmann::json to_json(const DiagonalTypeMap& map);
nlohmann::json to_json(const OrthogonalMatrix& m);
nlohmann::json to_json(const PositivityVerdict& v);

DiagonalTypeMap map_from_json(const nlohmann::json& j);
OrthogonalMatrix orthogonal_from_json(const nlohmann::json& j);

nlohmann::json parse_json(const std::string& text);
nlohmann::json read_json_file(const std::string& path);

}  // namespace posmap
