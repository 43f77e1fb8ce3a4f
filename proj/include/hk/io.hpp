#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hk/cliquegen.hpp"
#include "hk/gkmp.hpp"
#include "hk/graph.hpp"
#include "hk/hausdorff.hpp"

namespace hk::io {

using nlohmann::json;

/// Parses a JSON document; syntax errors become InputError with position.
json parse(const std::string& text, const std::string& source = "<input>");
json load_file(const std::string& path);
void save_file(const std::string& path, const json& doc);

/// "gkmp", "hausdorff" or "graph"; throws InputError otherwise.
std::string kind_of(const json& doc);

json to_json(const GkmpInstance& inst);
json to_json(const HausdorffInstance& inst);
json to_json(const Graph& g);
json to_json(const ReductionOutput& out);

/// Loaders validate the schema and report the JSON path of the first problem.
GkmpInstance gkmp_from_json(const json& doc);
HausdorffInstance hausdorff_from_json(const json& doc);
Graph graph_from_json(const json& doc);
/// Provenance block of a generated clique instance, if present.
std::optional<Provenance> provenance_from_json(const json& doc);

json point_json(const Point& p, int d);
/// Decimal string of an arbitrary-precision integer.
std::string decimal(const BigInt& v);

}  // namespace hk::io
