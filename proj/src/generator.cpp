#include "agmgan/generator.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "agmgan/errors.hpp"
#include "agmgan/random_util.hpp"

namespace agmgan {

namespace {

int sample_index(const Eigen::ArrayXd& probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  double cum = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

// Applies fn(current, chosen) to each softmax decision of the walk: the
// forward hops (virtual root first) and, unless the stop was forced by a dead
// end, the final return-to-previous move.
template <typename Fn>
void for_each_decision(const WalkRecord& walk, Fn&& fn) {
  int current = kVirtualRoot;
  for (int next : walk.path) {
    fn(current, next);
    current = next;
  }
  if (!walk.forced_stop) {
    const int previous = walk.path[walk.path.size() - 2];
    fn(current, previous);
  }
}

// Memoizes relevance distributions per current vertex; valid for one
// generation step since the member set is fixed there.
class DistributionCache {
 public:
  DistributionCache(const Graph& g, const AffiliationMatrix& theta, const VirtualVertex& vv)
      : g_(g), theta_(theta), vv_(vv) {}

  const RelevanceDistribution* at(int current) {
    auto it = cache_.find(current);
    if (it == cache_.end()) {
      auto d = relevance_distribution(g_, theta_, vv_, current);
      if (!d) return nullptr;
      it = cache_.emplace(current, std::move(*d)).first;
    }
    return &it->second;
  }

 private:
  const Graph& g_;
  const AffiliationMatrix& theta_;
  const VirtualVertex& vv_;
  std::unordered_map<int, RelevanceDistribution> cache_;
};

std::optional<WalkRecord> run_walk(DistributionCache& dists, const WalkLimits& limits,
                                   std::mt19937_64& rng) {
  for (int attempt = 0; attempt <= limits.restarts; ++attempt) {
    WalkRecord rec;
    int current = kVirtualRoot;
    int previous = kVirtualRoot;
    while (true) {
      const RelevanceDistribution* dist = dists.at(current);
      if (dist == nullptr) {
        // Dead end: the only available action is returning to the root, so
        // the current vertex is selected with probability one. At the
        // virtual start there is nothing to select and retrying cannot help.
        if (current == kVirtualRoot) return std::nullopt;
        rec.forced_stop = true;
        return rec;
      }
      const int pick = sample_index(dist->probs, rng);
      const int next = dist->candidates[pick];
      rec.log_prob += std::log(dist->probs[pick]);
      if (next == previous) return rec;  // stop move: select the current vertex
      if (static_cast<int>(rec.path.size()) == limits.max_walk) break;  // too long, restart
      rec.path.push_back(next);
      previous = current;
      current = next;
    }
  }
  return std::nullopt;
}

void add_gradient(RowGradients& grads, int row, const AffiliationVector& contribution) {
  auto [it, inserted] = grads.try_emplace(row, AffiliationVector::Zero(contribution.size()));
  it->second += contribution;
}

int index_of(const std::vector<int>& candidates, int vertex) {
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i] == vertex) return static_cast<int>(i);
  }
  throw InputError("stored walk does not match the graph: chosen vertex is not a candidate");
}

}  // namespace

VirtualVertex make_virtual_vertex(const Graph& g, const AffiliationMatrix& theta_g,
                                  std::span<const int> members) {
  VirtualVertex vv;
  vv.members.assign(members.begin(), members.end());
  vv.sorted_members = vv.members;
  std::sort(vv.sorted_members.begin(), vv.sorted_members.end());
  for (int u : members) {
    auto nbrs = g.neighbors(u);
    vv.neighbor_union.insert(vv.neighbor_union.end(), nbrs.begin(), nbrs.end());
  }
  std::sort(vv.neighbor_union.begin(), vv.neighbor_union.end());
  vv.neighbor_union.erase(std::unique(vv.neighbor_union.begin(), vv.neighbor_union.end()),
                          vv.neighbor_union.end());
  vv.product_vector = entrywise_product(theta_g, members);
  return vv;
}

std::optional<RelevanceDistribution> relevance_distribution(const Graph& g,
                                                            const AffiliationMatrix& theta_g,
                                                            const VirtualVertex& vv,
                                                            int current) {
  const std::span<const int> pool =
      current == kVirtualRoot ? std::span<const int>(vv.neighbor_union) : g.neighbors(current);

  RelevanceDistribution d;
  d.candidates.reserve(pool.size());
  for (int v : pool) {
    if (!std::binary_search(vv.sorted_members.begin(), vv.sorted_members.end(), v))
      d.candidates.push_back(v);
  }
  if (d.candidates.empty()) return std::nullopt;

  // Per-community factor shared by every candidate. At the virtual start the
  // current-vertex factor is absorbed into the product vector.
  AffiliationVector shared = vv.product_vector;
  if (current != kVirtualRoot) shared *= theta_g.row(current).transpose();

  const int n = static_cast<int>(d.candidates.size());
  d.overlap.resize(n);
  for (int i = 0; i < n; ++i)
    d.overlap[i] = (theta_g.row(d.candidates[i]).transpose() * shared).sum();

  Eigen::ArrayXd numerators(n);
  for (int i = 0; i < n; ++i)
    numerators[i] = std::max(-std::expm1(-d.overlap[i]), kRelevanceFloor);
  d.probs = numerators / numerators.sum();
  return d;
}

std::optional<MotifSample> generate_subset(const Graph& g, const AffiliationMatrix& theta_g,
                                           int root, int subset_size, const WalkLimits& limits,
                                           std::mt19937_64& rng) {
  if (subset_size < 2) throw InputError("subset size must be at least 2");
  if (root < 0 || root >= g.vertex_count()) throw InputError("root vertex out of range");
  if (g.degree(root) == 0) return std::nullopt;

  MotifSample s;
  s.origin = SampleOrigin::generated;
  s.vertices = {root};
  for (int step = 1; step < subset_size; ++step) {
    const VirtualVertex vv = make_virtual_vertex(g, theta_g, s.vertices);
    DistributionCache dists(g, theta_g, vv);
    auto walk = run_walk(dists, limits, rng);
    if (!walk) return std::nullopt;
    s.log_prob += walk->log_prob;
    s.vertices.push_back(walk->chosen());
    s.walks.push_back(std::move(*walk));
  }
  return s;
}

double recompute_log_prob(const Graph& g, const AffiliationMatrix& theta_g,
                          const MotifSample& sample) {
  if (sample.origin != SampleOrigin::generated || sample.walks.empty())
    throw InputError("log-probability recomputation needs a generated sample with walks");
  double total = 0.0;
  std::vector<int> members(sample.vertices.begin(), sample.vertices.begin() + 1);
  for (const WalkRecord& walk : sample.walks) {
    const VirtualVertex vv = make_virtual_vertex(g, theta_g, members);
    DistributionCache dists(g, theta_g, vv);
    for_each_decision(walk, [&](int current, int chosen) {
      const RelevanceDistribution* d = dists.at(current);
      if (d == nullptr) throw InputError("stored walk does not match the graph");
      total += std::log(d->probs[index_of(d->candidates, chosen)]);
    });
    members.push_back(walk.chosen());
  }
  return total;
}

RowGradients grad_log_generation(const Graph& g, const AffiliationMatrix& theta_g,
                                 const MotifSample& sample) {
  if (sample.origin != SampleOrigin::generated || sample.walks.empty())
    throw InputError("gradient needs a generated sample with walks");

  RowGradients grads;
  const Eigen::Index c = theta_g.cols();
  std::vector<int> members(sample.vertices.begin(), sample.vertices.begin() + 1);

  for (const WalkRecord& walk : sample.walks) {
    const VirtualVertex vv = make_virtual_vertex(g, theta_g, members);
    DistributionCache dists(g, theta_g, vv);

    // Product of the member rows excluding each member in turn; fixed within
    // one generation step.
    std::vector<AffiliationVector> member_excl(members.size());
    for (std::size_t i = 0; i < members.size(); ++i)
      member_excl[i] = product_excluding(theta_g, members, static_cast<int>(i));

    for_each_decision(walk, [&](int current, int chosen) {
      const RelevanceDistribution* d = dists.at(current);
      if (d == nullptr) throw InputError("stored walk does not match the graph");
      const int n = static_cast<int>(d->candidates.size());
      if (n == 1) return;  // probability one, no gradient

      const int k = index_of(d->candidates, chosen);

      // Numerators with the relevance floor; floored entries sit in the flat
      // region and contribute no derivative.
      Eigen::ArrayXd q(n), slope(n);
      for (int i = 0; i < n; ++i) {
        const double raw = -std::expm1(-d->overlap[i]);
        if (raw > kRelevanceFloor) {
          q[i] = raw;
          slope[i] = std::exp(-d->overlap[i]);
        } else {
          q[i] = kRelevanceFloor;
          slope[i] = 0.0;
        }
      }
      const double total = q.sum();

      AffiliationVector shared = vv.product_vector;
      if (current != kVirtualRoot) shared *= theta_g.row(current).transpose();

      // d log p_k = sum_j coef_j dS_j with coef_j = [j==k] slope_k/q_k - slope_j/total.
      AffiliationVector candidate_mix = AffiliationVector::Zero(c);
      for (int j = 0; j < n; ++j) {
        double coef = -slope[j] / total;
        if (j == k) coef += slope[j] / q[j];
        if (coef == 0.0) continue;
        add_gradient(grads, d->candidates[j], coef * shared);
        candidate_mix += coef * theta_g.row(d->candidates[j]).transpose();
      }
      if (current != kVirtualRoot)
        add_gradient(grads, current, candidate_mix * vv.product_vector);
      for (std::size_t i = 0; i < members.size(); ++i) {
        AffiliationVector contribution = candidate_mix * member_excl[i];
        if (current != kVirtualRoot) contribution *= theta_g.row(current).transpose();
        add_gradient(grads, members[i], contribution);
      }
    });

    members.push_back(walk.chosen());
  }
  return grads;
}

}  // namespace agmgan
