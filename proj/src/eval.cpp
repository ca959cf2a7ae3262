#include "agmgan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "agmgan/cliques.hpp"
#include "agmgan/errors.hpp"
#include "agmgan/random_util.hpp"

namespace agmgan {

namespace {

using MemberSet = std::vector<std::int64_t>;  // sorted ascending

std::vector<MemberSet> sorted_cover(const CommunityAssignment& a) {
  std::vector<MemberSet> out;
  out.reserve(a.communities.size());
  for (const auto& community : a.communities) {
    MemberSet s(community.begin(), community.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    out.push_back(std::move(s));
  }
  return out;
}

std::int64_t intersection_size(const MemberSet& a, const MemberSet& b) {
  std::int64_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

// 2PR/(P+R) over member sets, which collapses to 2|A n B| / (|A| + |B|).
double pair_f1(const MemberSet& a, const MemberSet& b) {
  const std::int64_t inter = intersection_size(a, b);
  if (inter == 0) return 0.0;
  return 2.0 * static_cast<double>(inter) / static_cast<double>(a.size() + b.size());
}

double average_best_f1(const std::vector<MemberSet>& from, const std::vector<MemberSet>& to) {
  double sum = 0.0;
  for (const auto& a : from) {
    double best = 0.0;
    for (const auto& b : to) best = std::max(best, pair_f1(a, b));
    sum += best;
  }
  return sum / static_cast<double>(from.size());
}

bool is_clique(const Graph& g, std::span<const int> subset) {
  for (std::size_t i = 0; i + 1 < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      if (!g.has_edge(subset[i], subset[j])) return false;
    }
  }
  return true;
}

std::vector<int> draw_non_clique_subset(const Graph& g, int size, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    std::vector<int> subset = sample_distinct(g.vertex_count(), size, rng);
    if (!is_clique(g, subset)) return subset;
  }
  throw InputError("could not sample a non-clique subset; graph is too dense");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-std::clamp(x, -30.0, 30.0))); }

}  // namespace

double f1_score(const CommunityAssignment& truth, const CommunityAssignment& detected) {
  if (truth.communities.empty()) throw InputError("ground-truth cover is empty");
  if (detected.communities.empty()) throw InputError("detected cover is empty");
  const auto t = sorted_cover(truth);
  const auto d = sorted_cover(detected);
  return 0.5 * (average_best_f1(t, d) + average_best_f1(d, t));
}

double overlapping_nmi(const CommunityAssignment& truth, const CommunityAssignment& detected) {
  if (truth.communities.empty()) throw InputError("ground-truth cover is empty");
  if (detected.communities.empty()) throw InputError("detected cover is empty");
  const auto x = sorted_cover(truth);
  const auto y = sorted_cover(detected);

  // Node universe: union of members across both covers.
  MemberSet universe;
  for (const auto& s : x) universe.insert(universe.end(), s.begin(), s.end());
  for (const auto& s : y) universe.insert(universe.end(), s.begin(), s.end());
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  const double n = static_cast<double>(universe.size());

  auto h = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  auto community_entropy = [&](double size) { return h(size / n) + h(1.0 - size / n); };

  // H(Xi | Yj) with the usual acceptance constraint; falls back to H(Xi) for
  // unmatchable pairs.
  auto conditional = [&](const MemberSet& xi, const MemberSet& yj) {
    const double n11 = static_cast<double>(intersection_size(xi, yj));
    const double n10 = static_cast<double>(xi.size()) - n11;
    const double n01 = static_cast<double>(yj.size()) - n11;
    const double n00 = n - n11 - n10 - n01;
    const double joint = h(n11 / n) + h(n10 / n) + h(n01 / n) + h(n00 / n);
    if (h(n11 / n) + h(n00 / n) >= h(n01 / n) + h(n10 / n))
      return joint - community_entropy(static_cast<double>(yj.size()));
    return community_entropy(static_cast<double>(xi.size()));
  };

  auto direction = [&](const std::vector<MemberSet>& from, const std::vector<MemberSet>& to) {
    double entropy = 0.0, conditional_entropy = 0.0;
    for (const auto& xi : from) {
      entropy += community_entropy(static_cast<double>(xi.size()));
      double best = std::numeric_limits<double>::infinity();
      for (const auto& yj : to) best = std::min(best, conditional(xi, yj));
      conditional_entropy += best;
    }
    return std::pair{entropy, conditional_entropy};
  };

  const auto [hx, hx_given_y] = direction(x, y);
  const auto [hy, hy_given_x] = direction(y, x);
  const double denom = std::max(hx, hy);
  if (denom <= 0.0) return 1.0;  // both covers are all-universe, hence identical
  const double information = 0.5 * ((hx - hx_given_y) + (hy - hy_given_x));
  return std::clamp(information / denom, 0.0, 1.0);
}

double auc_from_scores(std::span<const double> positive_scores,
                       std::span<const double> negative_scores) {
  if (positive_scores.empty() || negative_scores.empty())
    throw InputError("AUC needs both positive and negative scores");

  std::vector<std::pair<double, int>> pool;  // score, label
  pool.reserve(positive_scores.size() + negative_scores.size());
  for (double s : positive_scores) pool.emplace_back(s, 1);
  for (double s : negative_scores) pool.emplace_back(s, 0);
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  // Rank sum of positives with tied scores receiving their average rank.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].first == pool[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (pool[k].second == 1) positive_rank_sum += avg_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positive_scores.size());
  const double q = static_cast<double>(negative_scores.size());
  return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

CliquePredictionSplit build_clique_split(const Graph& g, int clique_size,
                                         double target_edge_fraction, std::mt19937_64& rng) {
  if (!(target_edge_fraction > 0.0 && target_edge_fraction < 0.5))
    throw InputError("target edge fraction must be in (0, 0.5)");
  if (g.vertex_count() < clique_size) throw InputError("graph smaller than the clique size");

  const CliqueIndex idx = enumerate_cliques(g, clique_size);
  std::vector<std::int64_t> order(idx.count());
  std::iota(order.begin(), order.end(), std::int64_t{0});
  std::shuffle(order.begin(), order.end(), rng);

  std::unordered_set<std::int64_t> removed;
  auto key = [&](int a, int b) {
    return static_cast<std::int64_t>(std::min(a, b)) * g.vertex_count() + std::max(a, b);
  };

  CliquePredictionSplit split;
  const double target = target_edge_fraction * static_cast<double>(g.edge_count());
  for (std::int64_t ci : order) {
    if (static_cast<double>(split.removed_edges) >= target) break;
    const auto clique = idx.clique(ci);
    bool intact = true;
    for (std::size_t i = 0; i + 1 < clique.size() && intact; ++i) {
      for (std::size_t j = i + 1; j < clique.size(); ++j) {
        if (removed.contains(key(clique[i], clique[j]))) {
          intact = false;
          break;
        }
      }
    }
    if (!intact) continue;  // shares an edge with an already-hidden clique
    for (std::size_t i = 0; i + 1 < clique.size(); ++i) {
      for (std::size_t j = i + 1; j < clique.size(); ++j) {
        removed.insert(key(clique[i], clique[j]));
        ++split.removed_edges;
      }
    }
    split.positives.emplace_back(clique.begin(), clique.end());
  }
  split.achieved_fraction =
      static_cast<double>(split.removed_edges) / static_cast<double>(g.edge_count());

  std::vector<std::pair<int, int>> kept;
  kept.reserve(static_cast<std::size_t>(g.edge_count()));
  for (auto [u, v] : g.edges()) {
    if (!removed.contains(key(u, v))) kept.emplace_back(u, v);
  }
  split.train_graph = Graph::from_edges(g.vertex_count(), kept, g.original_ids());

  split.negatives.reserve(split.positives.size());
  for (std::size_t i = 0; i < split.positives.size(); ++i)
    split.negatives.push_back(draw_non_clique_subset(g, clique_size, rng));
  return split;
}

double clique_prediction_auc(const Graph& g, const CliquePredictionSplit& split,
                             const AffiliationMatrix& theta, int clique_size,
                             std::mt19937_64& rng) {
  if (split.positives.empty() || split.negatives.empty())
    throw InputError("degenerate single-class test set");
  if (theta.rows() != g.vertex_count())
    throw InputError("embedding row count does not match the graph");

  const CliqueIndex train_idx = enumerate_cliques(split.train_graph, clique_size);
  if (train_idx.count() == 0)
    throw InputError("training graph has no cliques to fit the scorer on");

  constexpr std::int64_t kMaxTrainCliques = 20000;
  std::vector<std::int64_t> order(train_idx.count());
  std::iota(order.begin(), order.end(), std::int64_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  order.resize(std::min<std::int64_t>(train_idx.count(), kMaxTrainCliques));

  std::vector<std::vector<int>> train_subsets;
  std::vector<double> labels;
  train_subsets.reserve(2 * order.size());
  for (std::int64_t i : order) {
    const auto c = train_idx.clique(i);
    train_subsets.emplace_back(c.begin(), c.end());
    labels.push_back(1.0);
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    train_subsets.push_back(draw_non_clique_subset(split.train_graph, clique_size, rng));
    labels.push_back(0.0);
  }

  // Per-community entrywise products of the embedding rows, standardized on
  // the training set.
  const Eigen::Index c = theta.cols();
  auto features = [&](const std::vector<int>& subset) {
    return entrywise_product(theta, subset);
  };
  const Eigen::Index rows = static_cast<Eigen::Index>(train_subsets.size());
  Eigen::MatrixXd x(rows, c + 1);
  for (Eigen::Index r = 0; r < rows; ++r) {
    x(r, 0) = 1.0;
    x.row(r).tail(c) = features(train_subsets[r]).matrix().transpose();
  }
  Eigen::RowVectorXd mean = x.rightCols(c).colwise().mean();
  Eigen::RowVectorXd std_dev =
      ((x.rightCols(c).rowwise() - mean).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < c; ++j) {
    if (std_dev[j] < 1e-12) std_dev[j] = 1.0;
  }
  x.rightCols(c) = (x.rightCols(c).rowwise() - mean).array().rowwise() / std_dev.array();

  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(labels.data(), rows);

  // Ridge-stabilized IRLS.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(c + 1);
  constexpr double kRidge = 1e-6;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd p(rows);
    for (Eigen::Index r = 0; r < rows; ++r) p[r] = sigmoid(x.row(r).dot(w));
    Eigen::VectorXd weight = (p.array() * (1.0 - p.array())).max(1e-9).matrix();
    Eigen::MatrixXd hessian = x.transpose() * weight.asDiagonal() * x;
    hessian.diagonal().array() += kRidge;
    const Eigen::VectorXd gradient = x.transpose() * (y - p);
    const Eigen::VectorXd step = hessian.ldlt().solve(gradient);
    w += step;
    if (step.norm() < 1e-8) break;
  }

  auto score = [&](const std::vector<int>& subset) {
    Eigen::RowVectorXd f(c + 1);
    f[0] = 1.0;
    f.tail(c) = features(subset).matrix().transpose();
    f.tail(c) = (f.tail(c) - mean).array() / std_dev.array();
    return f.dot(w);
  };
  std::vector<double> pos_scores, neg_scores;
  pos_scores.reserve(split.positives.size());
  neg_scores.reserve(split.negatives.size());
  for (const auto& s : split.positives) pos_scores.push_back(score(s));
  for (const auto& s : split.negatives) neg_scores.push_back(score(s));
  return auc_from_scores(pos_scores, neg_scores);
}

MotifStats motif_community_stats(const Graph& g, const CommunityAssignment& truth,
                                 std::span<const int> sizes, std::int64_t trials,
                                 std::mt19937_64& rng) {
  if (trials < 10000) throw InputError("stat estimation needs at least 10^4 trials");
  if (truth.communities.empty()) throw InputError("ground-truth cover is empty");

  // Compact-id membership index.
  std::vector<std::vector<int>> communities_of(g.vertex_count());
  for (std::size_t c = 0; c < truth.communities.size(); ++c) {
    for (std::int64_t v : truth.communities[c]) {
      if (v < 0 || v >= g.vertex_count())
        throw InputError("stats need compact vertex ids; member " + std::to_string(v) +
                         " is out of range");
      communities_of[static_cast<int>(v)].push_back(static_cast<int>(c));
    }
  }

  auto shared_count = [&](std::span<const int> subset) {
    std::vector<int> shared = communities_of[subset[0]];
    std::vector<int> next;
    for (std::size_t i = 1; i < subset.size() && !shared.empty(); ++i) {
      next.clear();
      std::set_intersection(shared.begin(), shared.end(), communities_of[subset[i]].begin(),
                            communities_of[subset[i]].end(), std::back_inserter(next));
      shared.swap(next);
    }
    return static_cast<int>(shared.size());
  };

  MotifStats stats;
  for (int k : sizes) {
    if (k < 2 || k > g.vertex_count())
      throw InputError("clique size " + std::to_string(k) + " out of range for this graph");

    std::vector<int> eligible;
    for (std::size_t c = 0; c < truth.communities.size(); ++c) {
      if (static_cast<int>(truth.communities[c].size()) >= k)
        eligible.push_back(static_cast<int>(c));
    }

    std::map<int, std::pair<std::int64_t, std::int64_t>> bins;  // shared -> (draws, hits)
    auto record = [&](std::span<const int> subset, bool clique) {
      auto& [draws, hits] = bins[shared_count(subset)];
      ++draws;
      if (clique) ++hits;
    };

    MotifStats::SizeRow row;
    row.size = k;
    row.skipped_communities =
        static_cast<std::int64_t>(truth.communities.size()) - eligible.size();

    if (!eligible.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, eligible.size() - 1);
      std::int64_t hits = 0;
      for (std::int64_t t = 0; t < trials; ++t) {
        const auto& community = truth.communities[eligible[pick(rng)]];
        std::vector<int> subset;
        subset.reserve(k);
        for (int pos : sample_distinct(static_cast<int>(community.size()), k, rng))
          subset.push_back(static_cast<int>(community[pos]));
        const bool clique = is_clique(g, subset);
        hits += clique;
        record(subset, clique);
      }
      row.within_community = static_cast<double>(hits) / static_cast<double>(trials);
    }

    std::int64_t global_hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
      const std::vector<int> subset = sample_distinct(g.vertex_count(), k, rng);
      const bool clique = is_clique(g, subset);
      global_hits += clique;
      record(subset, clique);
    }
    row.global_prob = static_cast<double>(global_hits) / static_cast<double>(trials);
    stats.rows.push_back(row);

    // Max-normalized per-bin clique probability; thin bins are reported but
    // not allowed to set the scale.
    constexpr std::int64_t kMinDraws = 50;
    double max_prob = 0.0;
    for (const auto& [shared, counts] : bins) {
      if (counts.first >= kMinDraws)
        max_prob = std::max(max_prob,
                            static_cast<double>(counts.second) / counts.first);
    }
    std::vector<MotifStats::SharedBin> out_bins;
    for (const auto& [shared, counts] : bins) {
      MotifStats::SharedBin b;
      b.shared = shared;
      b.draws = counts.first;
      b.prob = static_cast<double>(counts.second) / counts.first;
      b.normalized = max_prob > 0.0 ? b.prob / max_prob : 0.0;
      out_bins.push_back(b);
    }
    stats.shared_bins.emplace(k, std::move(out_bins));
  }
  return stats;
}

}  // namespace agmgan
