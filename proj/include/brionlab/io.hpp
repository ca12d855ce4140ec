#pragma once
// Polytope document: { "dim": int, "vertices": [[float,...],...], "edges": [[int,int],...] }
// "edges" is optional; indices are 0-based; any other key is rejected.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "brionlab/geometry.hpp"

namespace brionlab {

inline Polytope load_polytope(const nlohmann::json& doc) {
  using nlohmann::json;
  if (!doc.is_object()) throw Error("polytope document must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "dim" && key != "vertices" && key != "edges") throw Error("unknown field '" + key + "'");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer()) throw Error("field 'dim' missing or not an integer");
  const auto dim = doc["dim"].get<long long>();
  if (dim < 2) throw Error("field 'dim' must be >= 2");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) throw Error("field 'vertices' missing or not an array");

  std::vector<Vec> vertices;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const auto& row = doc["vertices"][i];
    if (!row.is_array()) throw Error("field 'vertices[" + std::to_string(i) + "]' is not an array");
    if (static_cast<long long>(row.size()) != dim)
      throw Error("field 'vertices[" + std::to_string(i) + "]' has " + std::to_string(row.size()) +
                  " coordinates; dimension mismatch with dim=" + std::to_string(dim));
    Vec v(dim);
    for (long long k = 0; k < dim; ++k) {
      const auto& c = row[static_cast<std::size_t>(k)];
      if (!c.is_number()) throw Error("field 'vertices[" + std::to_string(i) + "]' has a non-numeric entry");
      v[k] = c.get<double>();
    }
    vertices.push_back(std::move(v));
  }
  if (static_cast<long long>(vertices.size()) < dim + 1) throw Error("field 'vertices' needs at least dim+1 points");
  if (vertices.size() > 64) throw Error("field 'vertices' exceeds 64 points");

  std::optional<std::vector<Edge>> edges;
  if (doc.contains("edges")) {
    if (!doc["edges"].is_array()) throw Error("field 'edges' is not an array");
    edges.emplace();
    for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
      const auto& e = doc["edges"][i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        throw Error("field 'edges[" + std::to_string(i) + "]' must be a pair of non-negative integers");
      edges->push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    }
  }
  return Polytope::from_vertices(std::move(vertices), static_cast<std::size_t>(dim), std::move(edges));
}

inline Polytope load_polytope_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed polytope document: ") + e.what());
  }
  return load_polytope(doc);
}

inline Polytope load_polytope_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open polytope file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_polytope_text(ss.str());
}

inline nlohmann::json to_json(const Polytope& p) {
  nlohmann::json doc;
  doc["dim"] = p.dim();
  doc["vertices"] = nlohmann::json::array();
  for (const auto& v : p.vertices()) doc["vertices"].push_back(std::vector<double>(v.data(), v.data() + v.size()));
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : p.edges()) doc["edges"].push_back({e.a, e.b});
  return doc;
}

}  // namespace brionlab
