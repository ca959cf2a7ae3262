#pragma once

#include <optional>
#include <random>
#include <span>
#include <vector>

#include "agmgan/agm.hpp"
#include "agmgan/graph.hpp"
#include "agmgan/sample.hpp"

namespace agmgan {

// Walk root standing in for the already-selected subset: connected to the
// union of the members' neighborhoods and embedded as the entrywise product
// of their generator rows. The union may contain members; candidate
// construction excludes them.
struct VirtualVertex {
  std::vector<int> members;         // selection order
  std::vector<int> sorted_members;  // for exclusion lookups
  std::vector<int> neighbor_union;  // sorted
  AffiliationVector product_vector;
};

VirtualVertex make_virtual_vertex(const Graph& g, const AffiliationMatrix& theta_g,
                                  std::span<const int> members);

// Relevance floor applied to each softmax numerator 1 - exp(-overlap); an
// all-zero row block degenerates to the uniform distribution instead of 0/0.
inline constexpr double kRelevanceFloor = 1e-10;

struct RelevanceDistribution {
  std::vector<int> candidates;
  Eigen::ArrayXd probs;    // normalized, sums to 1
  Eigen::ArrayXd overlap;  // per-candidate summed entrywise product (kept for gradients)
};

// Softmax of 1 - exp(-overlap(g_i, g_cur, g_vv)) over the neighbors of
// `current` minus the already-selected members. At the virtual start
// (current == kVirtualRoot) candidates come from the neighbor union and the
// g_cur factor is absorbed into the product vector. nullopt when every
// candidate is excluded.
std::optional<RelevanceDistribution> relevance_distribution(const Graph& g,
                                                            const AffiliationMatrix& theta_g,
                                                            const VirtualVertex& vv,
                                                            int current);

struct WalkLimits {
  int max_walk = 10;  // real vertices visited per attempt
  int restarts = 5;   // extra attempts after the first
};

// Grows a subset from `root` to subset_size distinct vertices, one random
// walk per added vertex: start at the virtual vertex, hop by relevance
// sampling, and stop (selecting the current vertex) when the sampled vertex
// is the previous one, or immediately when the current vertex has no
// candidates left. nullopt when the first hop has no candidates or every
// restart exceeds max_walk (a generation failure the caller handles).
std::optional<MotifSample> generate_subset(const Graph& g, const AffiliationMatrix& theta_g,
                                           int root, int subset_size, const WalkLimits& limits,
                                           std::mt19937_64& rng);

// Log-probability of the stored walks under theta_g, paths held fixed.
// Reproduces sample.log_prob when theta_g is the generating matrix.
double recompute_log_prob(const Graph& g, const AffiliationMatrix& theta_g,
                          const MotifSample& sample);

// Gradient of recompute_log_prob with respect to every generator row that
// appears in any softmax numerator or denominator along the walks.
RowGradients grad_log_generation(const Graph& g, const AffiliationMatrix& theta_g,
                                 const MotifSample& sample);

}  // namespace agmgan
