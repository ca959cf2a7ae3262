#pragma once

#include <cstdint>

#include "agmgan/community.hpp"
#include "agmgan/graph.hpp"

namespace agmgan {

// Planted overlapping-community graph: every vertex joins >= 1 communities
// (mean_memberships on average, optionally with a heavy tail), pairs sharing
// a community connect with p_in per shared community, background pairs with
// p_out.
struct PlantedSpec {
  int vertices = 0;
  int communities = 0;
  double mean_memberships = 1.0;
  bool heavy_tail = false;
  double p_in = 0.0;
  double p_out = 0.0;
  std::uint64_t seed = 0;
};

// Expected-edge guard: generation refuses specs whose expected edge count
// exceeds this.
inline constexpr double kMaxExpectedEdges = 1e7;

struct PlantedGraph {
  Graph graph;                      // compact ids == original ids == 0..V-1
  CommunityAssignment ground_truth;  // empty communities dropped
};

// Deterministic for a fixed spec (seed included). Vertices left isolated are
// re-attached to a random member of one of their communities. Throws
// InputError on invalid parameters and GuardError above kMaxExpectedEdges.
PlantedGraph generate(const PlantedSpec& spec);

}  // namespace agmgan
