#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <span>
#include <unordered_map>
#include <vector>

#include "agmgan/community.hpp"
#include "agmgan/graph.hpp"

namespace agmgan {

// Nonnegative V x C affiliation matrix; row v is the membership-strength
// vector of vertex v. Row-major so rows are contiguous.
using AffiliationMatrix = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using AffiliationVector = Eigen::ArrayXd;

// Sparse per-row gradient accumulator (row id -> length-C gradient).
using RowGradients = std::unordered_map<int, AffiliationVector>;

// Box projection applied after every SGD step: the lower bound keeps the
// affiliations nonnegative, the upper bound keeps exp(-overlap) away from
// underflow.
inline constexpr double kAffiliationMax = 1e3;
// Floor for the summed entrywise product before log(1 - exp(-s)); generated
// subsets can have zero affiliation overlap.
inline constexpr double kOverlapFloor = 1e-10;

// Sum over communities of the entrywise product of the given rows
// (the AGM overlap of a vertex subset).
double sum_entrywise_product(std::span<const AffiliationVector> rows);
double sum_entrywise_product(const AffiliationMatrix& theta, std::span<const int> subset);

// Component-wise product of the rows.
AffiliationVector entrywise_product(std::span<const AffiliationVector> rows);
AffiliationVector entrywise_product(const AffiliationMatrix& theta, std::span<const int> subset);

// Product of all rows except the one at `skip`; the per-community partner
// factor in the gradients below.
AffiliationVector product_excluding(std::span<const AffiliationVector> rows, int skip);
AffiliationVector product_excluding(const AffiliationMatrix& theta, std::span<const int> subset,
                                    int skip);

// Probability that the subset forms a clique through community c:
// 1 - exp(-prod_i F_{v_i c}).
double clique_prob_per_community(std::span<const AffiliationVector> rows, int community);

// Probability that the subset forms a clique through any community:
// 1 - exp(-sum_c prod_i F_{v_i c}), identical to 1 - prod_c (1 - p_c).
double clique_prob(std::span<const AffiliationVector> rows);
double clique_prob(const AffiliationMatrix& theta, std::span<const int> subset);

// log(1 - exp(-s)) with s floored at kOverlapFloor.
inline double log_clique_prob_from_overlap(double s) {
  return std::log(-std::expm1(-std::max(s, kOverlapFloor)));
}

// d/dF_target of log clique_prob: per community,
// [exp(-s)/(1-exp(-s))] * prod_{i != target} F_{v_i c}.
AffiliationVector grad_log_clique_prob(std::span<const AffiliationVector> rows, int target);
AffiliationVector grad_log_clique_prob(const AffiliationMatrix& theta,
                                       std::span<const int> subset, int target);

// d/dF_target of log(1 - clique_prob) = -prod_{i != target} F_{v_i c} (exact:
// log(1 - p) is just the negated overlap).
AffiliationVector grad_log_one_minus_clique_prob(std::span<const AffiliationVector> rows,
                                                 int target);
AffiliationVector grad_log_one_minus_clique_prob(const AffiliationMatrix& theta,
                                                 std::span<const int> subset, int target);

// Hard-membership cutoff: a vertex joins community c when its affiliation
// reaches delta, the strength at which the within-community edge probability
// equals the background edge probability epsilon = 2E / (V (V-1)).
struct MembershipThreshold {
  double delta = 0.0;
  double epsilon = 0.0;
};

// delta = sqrt(-ln(1 - epsilon)). Throws InputError when V < 2, E < 1 or
// epsilon >= 1 (complete or near-complete graph).
MembershipThreshold compute_threshold(const Graph& g);

// Community c collects every vertex with g_vc >= delta or d_vc >= delta.
// Communities that end up empty are dropped but counted. Members are compact
// vertex ids.
CommunityAssignment assign_communities(const AffiliationMatrix& theta_g,
                                       const AffiliationMatrix& theta_d,
                                       const MembershipThreshold& t);

// theta.row(r) += scale * grad for every entry, then projection onto
// [0, kAffiliationMax] for the touched rows.
void apply_row_gradients(AffiliationMatrix& theta, const RowGradients& grads, double scale);

inline void clamp_row(AffiliationMatrix& theta, int row) {
  theta.row(row) = theta.row(row).max(0.0).min(kAffiliationMax);
}

// TSV, one row per vertex: original vertex id then C affiliation values with
// 6 significant digits.
void write_embeddings_tsv(const std::filesystem::path& path, const Graph& g,
                          const AffiliationMatrix& theta);

}  // namespace agmgan
