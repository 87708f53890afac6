#include "spectral_walks/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spectral_walks {

namespace {

using nlohmann::json;

std::string id_of(const json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer() || j.is_number_unsigned()) return j.dump();
  throw GraphFormatError(std::string(what) + " must be a string or integer id");
}

const json& field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw GraphFormatError(std::string("missing field '") + key + "'");
  return *it;
}

}  // namespace

WeightedGraph parse_graph_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw GraphFormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw GraphFormatError("graph document must be a JSON object");

  const json& verts = field(doc, "vertices");
  if (!verts.is_array()) throw GraphFormatError("'vertices' must be an array");
  std::vector<std::string> ids;
  ids.reserve(verts.size());
  for (const auto& v : verts) ids.push_back(id_of(v, "vertex"));

  const json& edges = field(doc, "edges");
  if (!edges.is_array()) throw GraphFormatError("'edges' must be an array");
  std::vector<EdgeSpec<double>> specs;
  specs.reserve(edges.size());
  for (const auto& e : edges) {
    if (!e.is_object()) throw GraphFormatError("edge entries must be objects");
    const json& c = field(e, "c");
    if (!c.is_number()) throw GraphFormatError("edge conductance 'c' must be a number");
    specs.push_back({id_of(field(e, "u"), "edge endpoint u"), id_of(field(e, "v"), "edge endpoint v"), c.get<double>()});
  }
  const std::string origin = id_of(field(doc, "origin"), "origin");
  return WeightedGraph::build(std::move(ids), specs, origin);
}

WeightedGraph load_graph_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GraphFormatError("cannot open graph file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

std::optional<ExactGraph> to_exact(const WeightedGraph& g) {
  std::vector<ExactGraph::Edge> edges;
  edges.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    auto c = Rational::exact_from_double(e.c);
    if (!c) return std::nullopt;
    edges.push_back({e.u, e.v, *c});
  }
  std::vector<std::string> ids(g.ids().begin(), g.ids().end());
  try {
    return ExactGraph::from_indexed(std::move(ids), std::move(edges), g.origin());
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::string graph_to_json(const WeightedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& id : g.ids()) doc["vertices"].push_back(id);
  doc["edges"] = json::array();
  for (const auto& e : g.edges()) doc["edges"].push_back({{"u", g.id(e.u)}, {"v", g.id(e.v)}, {"c", e.c}});
  doc["origin"] = g.id(g.origin());
  return doc.dump();
}

}  // namespace spectral_walks
