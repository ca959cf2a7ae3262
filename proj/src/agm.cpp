#include "agmgan/agm.hpp"

#include <cstdio>
#include <fstream>

#include "agmgan/errors.hpp"

namespace agmgan {

namespace {

void check_rows(std::span<const AffiliationVector> rows) {
  if (rows.empty()) throw InputError("affiliation row list is empty");
  for (const auto& r : rows) {
    if (r.size() != rows[0].size())
      throw InputError("affiliation rows differ in length");
  }
}

}  // namespace

AffiliationVector entrywise_product(std::span<const AffiliationVector> rows) {
  check_rows(rows);
  AffiliationVector p = rows[0];
  for (std::size_t i = 1; i < rows.size(); ++i) p *= rows[i];
  return p;
}

AffiliationVector entrywise_product(const AffiliationMatrix& theta, std::span<const int> subset) {
  AffiliationVector p = theta.row(subset[0]).transpose();
  for (std::size_t i = 1; i < subset.size(); ++i) p *= theta.row(subset[i]).transpose();
  return p;
}

double sum_entrywise_product(std::span<const AffiliationVector> rows) {
  return entrywise_product(rows).sum();
}

double sum_entrywise_product(const AffiliationMatrix& theta, std::span<const int> subset) {
  return entrywise_product(theta, subset).sum();
}

AffiliationVector product_excluding(std::span<const AffiliationVector> rows, int skip) {
  check_rows(rows);
  AffiliationVector p = AffiliationVector::Ones(rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(i) != skip) p *= rows[i];
  }
  return p;
}

AffiliationVector product_excluding(const AffiliationMatrix& theta, std::span<const int> subset,
                                    int skip) {
  AffiliationVector p = AffiliationVector::Ones(theta.cols());
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (static_cast<int>(i) != skip) p *= theta.row(subset[i]).transpose();
  }
  return p;
}

double clique_prob_per_community(std::span<const AffiliationVector> rows, int community) {
  check_rows(rows);
  if (community < 0 || community >= rows[0].size())
    throw InputError("community index out of range");
  double prod = 1.0;
  for (const auto& r : rows) prod *= r[community];
  return -std::expm1(-prod);
}

double clique_prob(std::span<const AffiliationVector> rows) {
  return -std::expm1(-sum_entrywise_product(rows));
}

double clique_prob(const AffiliationMatrix& theta, std::span<const int> subset) {
  return -std::expm1(-sum_entrywise_product(theta, subset));
}

AffiliationVector grad_log_clique_prob(std::span<const AffiliationVector> rows, int target) {
  const double s = std::max(sum_entrywise_product(rows), kOverlapFloor);
  // exp(-s) / (1 - exp(-s))
  const double weight = 1.0 / std::expm1(s);
  return weight * product_excluding(rows, target);
}

AffiliationVector grad_log_clique_prob(const AffiliationMatrix& theta,
                                       std::span<const int> subset, int target) {
  const double s = std::max(sum_entrywise_product(theta, subset), kOverlapFloor);
  const double weight = 1.0 / std::expm1(s);
  return weight * product_excluding(theta, subset, target);
}

AffiliationVector grad_log_one_minus_clique_prob(std::span<const AffiliationVector> rows,
                                                 int target) {
  return -product_excluding(rows, target);
}

AffiliationVector grad_log_one_minus_clique_prob(const AffiliationMatrix& theta,
                                                 std::span<const int> subset, int target) {
  return -product_excluding(theta, subset, target);
}

MembershipThreshold compute_threshold(const Graph& g) {
  const double v = g.vertex_count();
  const double e = static_cast<double>(g.edge_count());
  if (g.vertex_count() < 2) throw InputError("threshold needs at least two vertices");
  if (g.edge_count() < 1) throw InputError("threshold needs at least one edge");
  const double epsilon = 2.0 * e / (v * (v - 1.0));
  if (epsilon >= 1.0)
    throw InputError("background edge probability >= 1; graph is (near-)complete");
  MembershipThreshold t;
  t.epsilon = epsilon;
  t.delta = std::sqrt(-std::log1p(-epsilon));
  return t;
}

CommunityAssignment assign_communities(const AffiliationMatrix& theta_g,
                                       const AffiliationMatrix& theta_d,
                                       const MembershipThreshold& t) {
  if (theta_g.rows() != theta_d.rows() || theta_g.cols() != theta_d.cols())
    throw InputError("affiliation matrices differ in shape");
  CommunityAssignment out;
  for (Eigen::Index c = 0; c < theta_g.cols(); ++c) {
    std::vector<std::int64_t> members;
    for (Eigen::Index v = 0; v < theta_g.rows(); ++v) {
      if (theta_g(v, c) >= t.delta || theta_d(v, c) >= t.delta) members.push_back(v);
    }
    if (members.empty()) {
      ++out.dropped_empty;
    } else {
      out.communities.push_back(std::move(members));
    }
  }
  return out;
}

void apply_row_gradients(AffiliationMatrix& theta, const RowGradients& grads, double scale) {
  for (const auto& [row, grad] : grads) {
    theta.row(row) += scale * grad.transpose();
    clamp_row(theta, row);
  }
}

void write_embeddings_tsv(const std::filesystem::path& path, const Graph& g,
                          const AffiliationMatrix& theta) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write embeddings: " + path.string());
  char buf[64];
  for (Eigen::Index v = 0; v < theta.rows(); ++v) {
    out << g.original_id(static_cast<int>(v));
    for (Eigen::Index c = 0; c < theta.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.6g", theta(v, c));
      out << '\t' << buf;
    }
    out << '\n';
  }
}

}  // namespace agmgan
