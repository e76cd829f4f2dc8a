#pragma once

#include <string>

#include <json.hpp>

#include "monocone/max_quad.hpp"
#include "monocone/operator_model.hpp"

namespace monocone {

using Json = nlohmann::ordered_json;

/// Rational from a "p/q" / decimal string or a JSON number; `where` names the field in errors.
Rational rational_from_json(const Json& j, const std::string& where);
Json rational_to_json(const Rational& q);
QVec qvec_from_json(const Json& j, const std::string& where);
Json qvec_to_json(const QVec& v);
QRows qrows_from_json(const Json& j, const std::string& where);
Json qrows_to_json(const QRows& rows);

HPolyhedron polyhedron_from_json(const Json& j, std::size_t dim, const std::string& where);
Json polyhedron_to_json(const HPolyhedron& P);

OperatorPtr operator_from_json(const Json& j);
Json operator_to_json(const OperatorSpec& T);

MaxQuadFunction function_from_json(const Json& j);
Json function_to_json(const MaxQuadFunction& f);

/// Reads a JSON file; parse errors carry line and column.
Json read_json_file(const std::string& path);

}  // namespace monocone
