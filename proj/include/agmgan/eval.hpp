#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "agmgan/agm.hpp"
#include "agmgan/community.hpp"
#include "agmgan/graph.hpp"

namespace agmgan {

// Symmetric best-match F1 between two covers: for each community on one side
// take the best pairwise F1 on the other, average per side, then average the
// two directions. Throws InputError when either cover is empty.
double f1_score(const CommunityAssignment& truth, const CommunityAssignment& detected);

// Max-normalized overlapping-cover NMI: communities as binary node variables,
// best-match conditional entropies (with the usual acceptance constraint
// h(P11)+h(P00) >= h(P01)+h(P10)), mutual information averaged over both
// directions and normalized by max(H(X), H(Y)). The node universe is the
// union of members of both covers. Returns 1 for identical covers up to
// order; when both covers have zero total entropy (every community covers the
// whole universe) the covers are necessarily identical and 1 is returned.
double overlapping_nmi(const CommunityAssignment& truth, const CommunityAssignment& detected);

// Rank-statistic AUC (Mann-Whitney) with ties averaged; a constant scorer
// gives exactly 0.5.
double auc_from_scores(std::span<const double> positive_scores,
                       std::span<const double> negative_scores);

// Clique-prediction split: m-cliques hidden from the graph until they cover
// the requested fraction of edges (edge-disjoint by construction: a clique is
// only hidden while all of its edges are still present), plus an equal count
// of non-clique negatives.
struct CliquePredictionSplit {
  Graph train_graph;
  std::vector<std::vector<int>> positives;  // hidden cliques (cliques of the original graph)
  std::vector<std::vector<int>> negatives;  // non-cliques of the original graph
  std::int64_t removed_edges = 0;
  double achieved_fraction = 0.0;  // removed_edges / E, best-effort when cliques run out
};

// target_edge_fraction must be in (0, 0.5).
CliquePredictionSplit build_clique_split(const Graph& g, int clique_size,
                                         double target_edge_fraction, std::mt19937_64& rng);

// Trains a logistic scorer on per-community entrywise-product features of the
// embedding rows (train-graph cliques vs sampled non-cliques) and returns the
// rank AUC on the split's test subsets. Throws InputError when either test
// class is empty.
double clique_prediction_auc(const Graph& g, const CliquePredictionSplit& split,
                             const AffiliationMatrix& theta, int clique_size,
                             std::mt19937_64& rng);

// Clique-occurrence statistics. For each size k: probability that k vertices
// drawn from one uniformly chosen community (of size >= k) form a clique,
// the same for k vertices drawn from the whole graph, and the clique
// probability binned by the number of communities the k vertices share,
// scaled so the maximum bin is one. Communities smaller than k are skipped
// and counted. `truth` must use compact vertex ids.
struct MotifStats {
  struct SizeRow {
    int size = 0;
    double within_community = 0.0;
    double global_prob = 0.0;
    std::int64_t skipped_communities = 0;
  };
  struct SharedBin {
    int shared = 0;
    std::int64_t draws = 0;
    double prob = 0.0;
    double normalized = 0.0;
  };
  std::vector<SizeRow> rows;
  std::map<int, std::vector<SharedBin>> shared_bins;  // keyed by size
};

// trials >= 10^4 per size (precondition).
MotifStats motif_community_stats(const Graph& g, const CommunityAssignment& truth,
                                 std::span<const int> sizes, std::int64_t trials,
                                 std::mt19937_64& rng);

}  // namespace agmgan
