#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "agmgan/graph.hpp"

namespace agmgan {

// Vertex sets per community. Members are original vertex ids when the cover
// came from a file, compact ids when produced in-process; to_compact /
// to_original convert between the two.
struct CommunityAssignment {
  std::vector<std::vector<std::int64_t>> communities;
  int dropped_empty = 0;
};

// File format: one community per line, space-separated original vertex ids;
// '#' comment lines and blank lines are skipped.
CommunityAssignment read_communities(const std::filesystem::path& path);
void write_communities(const std::filesystem::path& path, const CommunityAssignment& a);

// Translates original-id members to compact ids (throws InputError on ids the
// graph does not know) and back.
CommunityAssignment to_compact(const CommunityAssignment& a, const Graph& g);
CommunityAssignment to_original(const CommunityAssignment& a, const Graph& g);

}  // namespace agmgan
