#include "agmgan/discriminator.hpp"

#include <algorithm>

#include "agmgan/errors.hpp"

namespace agmgan {

DiscriminatorScore score_subset(const AffiliationMatrix& theta_d, std::span<const int> subset) {
  if (subset.size() < 2) throw InputError("subset needs at least two vertices");
  std::vector<int> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("duplicate vertices in subset");
  if (sorted.front() < 0 || sorted.back() >= theta_d.rows())
    throw InputError("subset vertex out of range");

  const double s = sum_entrywise_product(theta_d, subset);
  DiscriminatorScore out;
  out.subset.assign(subset.begin(), subset.end());
  out.score = -std::expm1(-s);
  out.log_score = log_clique_prob_from_overlap(s);
  out.log_one_minus = -s;
  return out;
}

void ascend_clique_objective(AffiliationMatrix& theta, std::span<const int> subset,
                             double learning_rate, bool positive) {
  // All row gradients at the pre-update matrix, then one joint apply.
  std::vector<AffiliationVector> grads(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    grads[i] = positive ? grad_log_clique_prob(theta, subset, static_cast<int>(i))
                        : grad_log_one_minus_clique_prob(theta, subset, static_cast<int>(i));
  }
  for (std::size_t i = 0; i < subset.size(); ++i) {
    theta.row(subset[i]) += learning_rate * grads[i].transpose();
    clamp_row(theta, subset[i]);
  }
}

void update_from_batch(AffiliationMatrix& theta_d, std::span<const MotifSample> positives,
                       std::span<const MotifSample> negatives, double learning_rate) {
  if (learning_rate <= 0) throw InputError("learning rate must be positive");
  for (const MotifSample& s : positives)
    ascend_clique_objective(theta_d, s.vertices, learning_rate, true);
  for (const MotifSample& s : negatives)
    ascend_clique_objective(theta_d, s.vertices, learning_rate, false);
}

}  // namespace agmgan
