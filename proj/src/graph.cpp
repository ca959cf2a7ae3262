#include "agmgan/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>

#include "agmgan/errors.hpp"

namespace agmgan {

Graph Graph::from_edges(int vertex_count, std::span<const std::pair<int, int>> edges) {
  std::vector<std::int64_t> ids(vertex_count);
  std::iota(ids.begin(), ids.end(), std::int64_t{0});
  return from_edges(vertex_count, edges, std::move(ids));
}

Graph Graph::from_edges(int vertex_count, std::span<const std::pair<int, int>> edges,
                        std::vector<std::int64_t> original_ids) {
  if (vertex_count < 0) throw InputError("negative vertex count");
  if (static_cast<int>(original_ids.size()) != vertex_count)
    throw InputError("original-id map size does not match vertex count");

  Graph g;
  g.adjacency_.assign(vertex_count, {});
  g.original_ids_ = std::move(original_ids);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw InputError("edge endpoint out of range");
    if (u == v) continue;  // self-loops dropped
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::int64_t half_edges = 0;
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    half_edges += static_cast<std::int64_t>(nbrs.size());
  }
  g.edge_count_ = half_edges / 2;
  return g;
}

bool Graph::has_edge(int u, int v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(edge_count_));
  for (int u = 0; u < vertex_count(); ++u) {
    for (int v : adjacency_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list: " + path.string());

  std::vector<std::pair<std::int64_t, std::int64_t>> raw;
  std::string line;
  std::int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;  // blank
    if (line[first] == '#') continue;          // comment
    std::istringstream tokens(line);
    std::int64_t u = 0, v = 0;
    std::string extra;
    if (!(tokens >> u >> v) || (tokens >> extra)) {
      throw InputError(path.string() + ":" + std::to_string(line_number) +
                       ": expected two integer tokens");
    }
    raw.emplace_back(u, v);
  }
  if (raw.empty()) throw InputError("empty graph: " + path.string());

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (auto [u, v] : raw) {
    ids.push_back(u);
    ids.push_back(v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::unordered_map<std::int64_t, int> compact;
  compact.reserve(ids.size());
  for (int i = 0; i < static_cast<int>(ids.size()); ++i) compact.emplace(ids[i], i);

  std::vector<std::pair<int, int>> edges;
  edges.reserve(raw.size());
  for (auto [u, v] : raw) edges.emplace_back(compact.at(u), compact.at(v));

  const int vertex_count = static_cast<int>(ids.size());
  Graph g = Graph::from_edges(vertex_count, edges, std::move(ids));
  if (g.edge_count() == 0) throw InputError("graph has no edges: " + path.string());
  return g;
}

}  // namespace agmgan
