#include "brandmatch/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "brandmatch/error.hpp"
#include "brandmatch/json_schema.hpp"
#include "brandmatch/unicode.hpp"

namespace brandmatch {

SocialGraph::SocialGraph(std::vector<GraphNode> nodes, const std::vector<RawEdge>& edges, std::vector<EdgeDrop>* drops)
    : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end(), [](const GraphNode& x, const GraphNode& y) { return x.id < y.id; });
  auto dup = std::adjacent_find(nodes_.begin(), nodes_.end(),
                                [](const GraphNode& x, const GraphNode& y) { return x.id == y.id; });
  if (dup != nodes_.end()) throw Error(Errc::duplicate_id, "graph node '" + dup->id + "' listed twice");

  auto drop = [&](std::string reason) {
    if (drops != nullptr) drops->push_back({0, std::move(reason)});
  };
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (const auto& e : edges) {
    if (!contains(e.src)) throw Error(Errc::unknown_endpoint, "edge endpoint '" + e.src + "' is not a profile");
    if (!contains(e.dst)) throw Error(Errc::unknown_endpoint, "edge endpoint '" + e.dst + "' is not a profile");
    if (e.weight && (!std::isfinite(*e.weight) || *e.weight < 0.0)) {
      throw Error(Errc::schema_error, "edge " + e.src + " - " + e.dst + " has a negative or non-finite weight");
    }
    if (e.src == e.dst) {
      drop("self-loop on '" + e.src + "'");
      continue;
    }
    GraphEdge edge{std::min(e.src, e.dst), std::max(e.src, e.dst), e.label, e.weight};
    if (!seen.emplace(edge.a, edge.b, edge.label).second) {
      drop("duplicate " + edge.label + " edge " + edge.a + " - " + edge.b);
      continue;
    }
    edges_.push_back(std::move(edge));
  }
  std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& x, const GraphEdge& y) {
    return std::tie(x.a, x.b, x.label) < std::tie(y.a, y.b, y.label);
  });
  incident_.resize(nodes_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    incident_[index_of(edges_[i].a)].push_back(i);
    incident_[index_of(edges_[i].b)].push_back(i);
  }
}

std::size_t SocialGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const GraphNode& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return nodes_.size();
  return static_cast<std::size_t>(it - nodes_.begin());
}

bool SocialGraph::contains(std::string_view id) const {
  return index_of(id) != nodes_.size();
}

const GraphNode* SocialGraph::node(std::string_view id) const {
  std::size_t i = index_of(id);
  return i == nodes_.size() ? nullptr : &nodes_[i];
}

std::vector<std::string> SocialGraph::neighbors(std::string_view id) const {
  std::size_t i = index_of(id);
  if (i == nodes_.size()) throw Error(Errc::unknown_node, "no node '" + std::string(id) + "'");
  std::vector<std::string> out;
  for (std::size_t e : incident_[i]) out.push_back(edges_[e].a == id ? edges_[e].b : edges_[e].a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t SocialGraph::degree(std::string_view id) const {
  std::size_t i = index_of(id);
  if (i == nodes_.size()) throw Error(Errc::unknown_node, "no node '" + std::string(id) + "'");
  return incident_[i].size();
}

nlohmann::json SocialGraph::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) nodes.push_back({{"id", n.id}, {"kind", to_string(n.kind)}});
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) {
    nlohmann::json j = {{"a", e.a}, {"b", e.b}, {"label", e.label}};
    if (e.weight) j["weight"] = *e.weight;
    edges.push_back(std::move(j));
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

SocialGraph SocialGraph::from_json(const nlohmann::json& j) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/graph.schema.json");
  schema.require_valid(j, "graph");
  std::vector<GraphNode> nodes;
  for (const auto& n : j["nodes"]) {
    nodes.push_back({n["id"].get<std::string>(), parse_profile_kind(n["kind"].get<std::string>())});
  }
  std::vector<RawEdge> edges;
  for (const auto& e : j["edges"]) {
    RawEdge edge{e["a"].get<std::string>(), e["b"].get<std::string>(), e["label"].get<std::string>(), std::nullopt};
    if (e.contains("weight")) edge.weight = e["weight"].get<double>();
    edges.push_back(std::move(edge));
  }
  std::vector<EdgeDrop> drops;
  std::optional<SocialGraph> built;
  try {
    built.emplace(std::move(nodes), edges, &drops);
  } catch (const Error& e) {
    throw Error(Errc::schema_error, std::string("persisted graph is inconsistent: ") + e.what());
  }
  SocialGraph g = std::move(*built);
  if (!drops.empty()) throw Error(Errc::schema_error, "persisted graph is not canonical: " + drops.front().reason);
  return g;
}

// --- construction from files -------------------------------------------------

std::vector<std::pair<std::size_t, RawEdge>> parse_edge_lines(std::string_view text) {
  static const JsonSchema schema = JsonSchema::bundled("schemas/edge.schema.json");
  std::vector<std::pair<std::size_t, RawEdge>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (unicode::trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::schema_error, "edge list line " + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
    }
    try {
      schema.require_valid(j, "edge");
    } catch (const Error& e) {
      throw Error(Errc::schema_error, "edge list line " + std::to_string(line_no) + ": " + e.what());
    }
    RawEdge edge{unicode::nfc(unicode::trim(j["src"].get<std::string>())),
                 unicode::nfc(unicode::trim(j["dst"].get<std::string>())),
                 unicode::fold_case(unicode::trim(j["label"].get<std::string>())), std::nullopt};
    if (j.contains("weight")) edge.weight = j["weight"].get<double>();
    out.emplace_back(line_no, std::move(edge));
  }
  return out;
}

GraphBuildResult build_graph_from_text(const Dataset& dataset, std::string_view edge_lines) {
  std::vector<GraphNode> nodes;
  std::set<std::string_view> ids;
  for (const auto& r : dataset.users) {
    nodes.push_back({r.owner_id, ProfileKind::user});
    ids.insert(r.owner_id);
  }
  for (const auto& r : dataset.pages) {
    nodes.push_back({r.owner_id, ProfileKind::brand_page});
    ids.insert(r.owner_id);
  }

  GraphBuildResult result;
  std::vector<RawEdge> accepted;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  for (auto& [line, edge] : parse_edge_lines(edge_lines)) {
    for (const auto* endpoint : {&edge.src, &edge.dst}) {
      if (!ids.contains(*endpoint)) {
        throw Error(Errc::unknown_endpoint,
                    "edge list line " + std::to_string(line) + ": '" + *endpoint + "' is not a profile in the dataset");
      }
    }
    if (edge.src == edge.dst) {
      result.drops.push_back({line, "self-loop on '" + edge.src + "'"});
      continue;
    }
    auto key = std::make_tuple(std::min(edge.src, edge.dst), std::max(edge.src, edge.dst), edge.label);
    if (!seen.insert(key).second) {
      result.drops.push_back({line, "duplicate " + edge.label + " edge " + std::get<0>(key) + " - " + std::get<1>(key)});
      continue;
    }
    accepted.push_back(std::move(edge));
  }
  result.graph = SocialGraph(std::move(nodes), accepted);
  return result;
}

GraphBuildResult build_graph(const Dataset& dataset, const std::filesystem::path& edge_file) {
  std::ifstream in(edge_file, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + edge_file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return build_graph_from_text(dataset, buf.str());
}

void save_graph(const SocialGraph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  out << graph.to_json().dump(2) << '\n';
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

SocialGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::schema_error, path.string() + ": malformed JSON (" + e.what() + ")");
  }
  return SocialGraph::from_json(j);
}

DegreeStats degree_stats(const SocialGraph& graph) {
  DegreeStats s;
  s.nodes = graph.node_count();
  s.edges = graph.edge_count();
  if (s.nodes == 0) return s;
  s.min_degree = graph.edge_count() * 2 + 1;
  std::size_t total = 0;
  for (const auto& n : graph.nodes()) {
    const std::size_t d = graph.degree(n.id);
    total += d;
    s.isolated += d == 0 ? 1 : 0;
    s.min_degree = std::min(s.min_degree, d);
    s.max_degree = std::max(s.max_degree, d);
  }
  s.mean_degree = static_cast<double>(total) / static_cast<double>(s.nodes);
  for (const auto& e : graph.edges()) ++s.edges_per_label[e.label];
  return s;
}

nlohmann::json to_json(const DegreeStats& s) {
  return {{"nodes", s.nodes},           {"edges", s.edges},           {"isolated_nodes", s.isolated},
          {"min_degree", s.min_degree}, {"max_degree", s.max_degree}, {"mean_degree", s.mean_degree},
          {"edges_per_label", s.edges_per_label}};
}

}  // namespace brandmatch
