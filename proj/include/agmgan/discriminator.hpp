#pragma once

#include <span>
#include <vector>

#include "agmgan/agm.hpp"
#include "agmgan/sample.hpp"

namespace agmgan {

struct DiscriminatorScore {
  std::vector<int> subset;
  double score = 0.0;          // 1 - exp(-overlap of the d rows), in [0, 1)
  double log_score = 0.0;      // log D, overlap floored
  double log_one_minus = 0.0;  // log(1 - D) = -overlap, exact
};

// Order-invariant clique probability of the subset under theta_d. Subset must
// hold at least two distinct vertices.
DiscriminatorScore score_subset(const AffiliationMatrix& theta_d, std::span<const int> subset);

// One ascent pass of per-sample SGD in arrival order: each positive adds
// lr * grad log D, each negative adds lr * grad log(1 - D); touched rows are
// projected onto [0, kAffiliationMax] after each sample.
void update_from_batch(AffiliationMatrix& theta_d, std::span<const MotifSample> positives,
                       std::span<const MotifSample> negatives, double learning_rate);

// Single-sample step of the same objective (positive: log clique_prob,
// negative: log(1 - clique_prob)); also drives the affiliation-model
// pretraining.
void ascend_clique_objective(AffiliationMatrix& theta, std::span<const int> subset,
                             double learning_rate, bool positive);

}  // namespace agmgan
