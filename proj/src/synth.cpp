#include "agmgan/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "agmgan/errors.hpp"
#include "agmgan/random_util.hpp"

namespace agmgan {

namespace {

// Number of communities a vertex joins: mean `mean_memberships`, minimum 1.
// The default tail is Poisson; the heavy tail uses a discrete Pareto with the
// same mean.
int draw_membership_count(double mean_memberships, bool heavy_tail, int max_count,
                          std::mt19937_64& rng) {
  const double extra = mean_memberships - 1.0;
  int k = 1;
  if (extra > 0) {
    if (heavy_tail) {
      constexpr double shape = 2.5;
      const double scale = extra * (shape - 1.0) / shape;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double pareto = scale * std::pow(1.0 - unit(rng), -1.0 / shape);
      k = 1 + static_cast<int>(std::floor(pareto));
    } else {
      std::poisson_distribution<int> extra_draw(extra);
      k = 1 + extra_draw(rng);
    }
  }
  return std::clamp(k, 1, max_count);
}

// Visits each pair (a, b), a < b, of `members` that a Bernoulli(p) coin
// accepts, using geometric skipping per row.
template <typename Fn>
void sample_pairs(const std::vector<int>& members, double p, std::mt19937_64& rng, Fn&& emit) {
  if (p <= 0.0) return;
  const int n = static_cast<int>(members.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log1mp = std::log1p(-p);
  for (int a = 0; a + 1 < n; ++a) {
    const int row = n - a - 1;
    std::int64_t j = -1;
    while (true) {
      if (p >= 1.0) {
        ++j;
      } else {
        j += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-unit(rng)) / log1mp));
      }
      if (j >= row) break;
      emit(members[a], members[a + 1 + static_cast<int>(j)]);
    }
  }
}

}  // namespace

PlantedGraph generate(const PlantedSpec& spec) {
  if (spec.vertices < 2) throw InputError("planted graph needs at least two vertices");
  if (spec.communities < 1) throw InputError("community count must be positive");
  if (spec.mean_memberships < 1.0) throw InputError("mean memberships must be at least 1");
  if (!(spec.p_out < spec.p_in) || spec.p_in > 1.0 || spec.p_out < 0.0)
    throw InputError("edge probabilities must satisfy 0 <= p_out < p_in <= 1");

  const double v = spec.vertices;
  const double a = spec.mean_memberships;
  const double expected_edges =
      v * v * a * a / (2.0 * spec.communities) * spec.p_in + v * v / 2.0 * spec.p_out;
  if (expected_edges > kMaxExpectedEdges)
    throw GuardError("expected edge count " + std::to_string(expected_edges) +
                     " exceeds the desk-scale guard");

  std::mt19937_64 rng(splitmix64(spec.seed));
  std::uniform_int_distribution<int> any_vertex(0, spec.vertices - 1);

  // Memberships.
  std::vector<std::vector<int>> members_of(spec.communities);
  std::vector<std::vector<int>> communities_of(spec.vertices);
  for (int u = 0; u < spec.vertices; ++u) {
    const int k = draw_membership_count(spec.mean_memberships, spec.heavy_tail,
                                        spec.communities, rng);
    for (int c : sample_distinct(spec.communities, k, rng)) {
      members_of[c].push_back(u);
      communities_of[u].push_back(c);
    }
  }
  for (auto& m : members_of) std::sort(m.begin(), m.end());

  // Edges: union over per-community pair draws plus background noise.
  std::unordered_set<std::int64_t> edge_keys;
  auto add_edge = [&](int x, int y) {
    if (x == y) return;
    const std::int64_t lo = std::min(x, y);
    const std::int64_t hi = std::max(x, y);
    edge_keys.insert(lo * spec.vertices + hi);
  };
  for (const auto& members : members_of) sample_pairs(members, spec.p_in, rng, add_edge);
  if (spec.p_out > 0.0) {
    std::vector<int> everyone(spec.vertices);
    for (int u = 0; u < spec.vertices; ++u) everyone[u] = u;
    sample_pairs(everyone, spec.p_out, rng, add_edge);
  }

  // Re-attach isolated vertices to a random member of one of their
  // communities (or anywhere if they are always alone).
  std::vector<char> touched(spec.vertices, 0);
  for (std::int64_t key : edge_keys) {
    touched[key / spec.vertices] = 1;
    touched[key % spec.vertices] = 1;
  }
  for (int u = 0; u < spec.vertices; ++u) {
    if (touched[u]) continue;
    const auto& cs = communities_of[u];
    std::uniform_int_distribution<std::size_t> pick_c(0, cs.size() - 1);
    const auto& pool = members_of[cs[pick_c(rng)]];
    int partner = u;
    if (pool.size() > 1) {
      std::uniform_int_distribution<std::size_t> pick_m(0, pool.size() - 1);
      do {
        partner = pool[pick_m(rng)];
      } while (partner == u);
    } else {
      do {
        partner = any_vertex(rng);
      } while (partner == u);
    }
    add_edge(u, partner);
    touched[u] = 1;
    touched[partner] = 1;
  }

  std::vector<std::pair<int, int>> edges;
  edges.reserve(edge_keys.size());
  for (std::int64_t key : edge_keys) {
    edges.emplace_back(static_cast<int>(key / spec.vertices),
                       static_cast<int>(key % spec.vertices));
  }
  std::sort(edges.begin(), edges.end());

  PlantedGraph out;
  out.graph = Graph::from_edges(spec.vertices, edges);
  for (const auto& members : members_of) {
    if (members.empty()) {
      ++out.ground_truth.dropped_empty;
      continue;
    }
    out.ground_truth.communities.emplace_back(members.begin(), members.end());
  }
  return out;
}

}  // namespace agmgan
