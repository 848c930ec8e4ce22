#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "brandmatch/ingestion.hpp"
#include "brandmatch/record.hpp"

namespace brandmatch {

struct GraphNode {
  std::string id;
  ProfileKind kind = ProfileKind::user;  // which dataset list holds the profile

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

/// Undirected labeled edge; endpoints stored with a < b.
struct GraphEdge {
  std::string a;
  std::string b;
  std::string label;
  std::optional<double> weight;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct RawEdge {
  std::string src;
  std::string dst;
  std::string label;
  std::optional<double> weight;
};

/// Edge-list entry rejected during graph construction.
struct EdgeDrop {
  std::size_t line = 0;  // 1-based; 0 for programmatic input
  std::string reason;
};

/// Social graph over dataset profiles. No self-loops, at most one edge per
/// unordered pair and label. Immutable after construction.
class SocialGraph {
 public:
  SocialGraph() = default;

  /// Throws Error(unknown_endpoint) for edges naming absent nodes. Self-loops
  /// and repeated (pair, label) edges are dropped and appended to `drops`.
  SocialGraph(std::vector<GraphNode> nodes, const std::vector<RawEdge>& edges, std::vector<EdgeDrop>* drops = nullptr);

  const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::vector<GraphEdge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(std::string_view id) const;
  const GraphNode* node(std::string_view id) const;

  /// Distinct adjacent ids, ascending. Throws Error(unknown_node).
  std::vector<std::string> neighbors(std::string_view id) const;
  /// Number of incident edges (parallel edges with different labels count
  /// separately). Throws Error(unknown_node).
  std::size_t degree(std::string_view id) const;

  nlohmann::json to_json() const;
  static SocialGraph from_json(const nlohmann::json& j);

  friend bool operator==(const SocialGraph& x, const SocialGraph& y) {
    return x.nodes_ == y.nodes_ && x.edges_ == y.edges_;
  }

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<GraphNode> nodes_;                      // sorted by id
  std::vector<GraphEdge> edges_;                      // sorted by (a, b, label)
  std::vector<std::vector<std::size_t>> incident_;    // node index -> edge indices
};

struct GraphBuildResult {
  SocialGraph graph;
  std::vector<EdgeDrop> drops;
};

/// Parses JSON-lines edges ({src, dst, label, weight?} per line, blank lines
/// ignored). Throws Error(schema_error) with the offending line.
std::vector<std::pair<std::size_t, RawEdge>> parse_edge_lines(std::string_view text);

/// Nodes are every owner_id in the dataset. Unknown endpoints are fatal and
/// name the edge-list line.
GraphBuildResult build_graph_from_text(const Dataset& dataset, std::string_view edge_lines);
GraphBuildResult build_graph(const Dataset& dataset, const std::filesystem::path& edge_file);

void save_graph(const SocialGraph& graph, const std::filesystem::path& path);
SocialGraph load_graph(const std::filesystem::path& path);

struct DegreeStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t isolated = 0;
  std::size_t min_degree = 0;
  std::size_t max_degree = 0;
  double mean_degree = 0.0;
  std::map<std::string, std::size_t> edges_per_label;
};

DegreeStats degree_stats(const SocialGraph& graph);
nlohmann::json to_json(const DegreeStats& stats);

}  // namespace brandmatch
