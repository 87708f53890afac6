#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "spectral_walks/graph.hpp"

namespace spectral_walks {

/// Malformed graph document (bad JSON or wrong field types). Axiom
/// violations surface as GraphError instead.
class GraphFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parses {"vertices":[id…], "edges":[{"u":id,"v":id,"c":number}…], "origin":id}.
/// Ids may be strings or integers; integers are keyed by their decimal form.
WeightedGraph parse_graph_json(std::string_view text);
WeightedGraph load_graph_json(const std::filesystem::path& path);

/// Exact copy of a graph whose conductances are all exactly representable
/// as 64-bit rationals; nullopt otherwise.
std::optional<ExactGraph> to_exact(const WeightedGraph& g);

std::string graph_to_json(const WeightedGraph& g);

}  // namespace spectral_walks
