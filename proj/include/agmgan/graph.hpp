#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace agmgan {

// Undirected simple graph over compact vertex ids 0..V-1. Neighbor lists are
// sorted ascending; construction symmetrizes, deduplicates and drops
// self-loops. Immutable after construction, so concurrent reads are safe.
class Graph {
 public:
  Graph() = default;

  // Normalizes an edge set into a graph. `original_ids`, when given, maps
  // compact id -> the id used in input/output files; defaults to identity.
  static Graph from_edges(int vertex_count, std::span<const std::pair<int, int>> edges);
  static Graph from_edges(int vertex_count, std::span<const std::pair<int, int>> edges,
                          std::vector<std::int64_t> original_ids);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  std::int64_t edge_count() const { return edge_count_; }

  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool has_edge(int u, int v) const;

  std::int64_t original_id(int v) const { return original_ids_[v]; }
  const std::vector<std::int64_t>& original_ids() const { return original_ids_; }

  // Every edge once, with u < v, ordered lexicographically.
  std::vector<std::pair<int, int>> edges() const;

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::int64_t> original_ids_;
  std::int64_t edge_count_ = 0;
};

// Reads a whitespace-separated edge list: one "u v" pair per line, lines
// starting with '#' ignored, blank lines skipped. Vertex ids may be arbitrary
// integers and are compacted to 0..V-1 in ascending original-id order.
// Throws InputError on malformed lines (with the line number) and on graphs
// that end up with no vertices or no edges.
Graph load_edge_list(const std::filesystem::path& path);

}  // namespace agmgan
