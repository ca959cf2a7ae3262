#include "agmgan/cliques.hpp"

#include <algorithm>

#include "agmgan/errors.hpp"

namespace agmgan {

namespace {

// out = {x in candidates : x > floor and x adjacent to w}; both inputs sorted.
void intersect_above(std::span<const int> candidates, std::span<const int> neighbors, int floor,
                     std::vector<int>& out) {
  out.clear();
  auto a = candidates.begin();
  auto b = neighbors.begin();
  while (a != candidates.end() && b != neighbors.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      if (*a > floor) out.push_back(*a);
      ++a;
      ++b;
    }
  }
}

}  // namespace

CliqueIndex::CliqueIndex(int clique_size, std::vector<int> flat_vertices, int vertex_count)
    : clique_size_(clique_size), flat_(std::move(flat_vertices)) {
  covering_.assign(vertex_count, {});
  const std::int64_t n = count();
  for (std::int64_t i = 0; i < n; ++i) {
    for (int v : clique(i)) covering_[v].push_back(i);
  }
}

CliqueIndex enumerate_cliques(const Graph& g, int clique_size) {
  if (clique_size < 2 || clique_size > 6)
    throw InputError("clique size must be in [2, 6], got " + std::to_string(clique_size));

  std::vector<int> flat;
  std::vector<int> stack;
  stack.reserve(clique_size);
  // cand[d] holds the common neighbors (greater than stack.back()) available
  // at depth d; pre-sized one scratch buffer per depth.
  std::vector<std::vector<int>> cand(clique_size + 1);

  // Extends the partial clique in `stack` (depth vertices) with the
  // candidates at cand[depth]; deeper levels write into their own buffers.
  auto extend = [&](auto&& self, int depth) -> void {
    for (std::size_t i = 0; i < cand[depth].size(); ++i) {
      const int w = cand[depth][i];
      stack.push_back(w);
      if (depth + 1 == clique_size) {
        flat.insert(flat.end(), stack.begin(), stack.end());
      } else {
        intersect_above(cand[depth], g.neighbors(w), w, cand[depth + 1]);
        self(self, depth + 1);
      }
      stack.pop_back();
    }
  };

  for (int u = 0; u < g.vertex_count(); ++u) {
    if (clique_size == 2) {
      for (int v : g.neighbors(u)) {
        if (v > u) {
          flat.push_back(u);
          flat.push_back(v);
        }
      }
      continue;
    }
    for (int v : g.neighbors(u)) {
      if (v <= u) continue;
      stack.assign({u, v});
      intersect_above(g.neighbors(u), g.neighbors(v), v, cand[2]);
      extend(extend, 2);
    }
  }
  return CliqueIndex(clique_size, std::move(flat), g.vertex_count());
}

std::optional<MotifSample> sample_true_motif(const CliqueIndex& idx, int v,
                                             std::mt19937_64& rng) {
  auto covering = idx.covering(v);
  if (covering.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, covering.size() - 1);
  auto clique = idx.clique(covering[pick(rng)]);
  MotifSample s;
  s.vertices.assign(clique.begin(), clique.end());
  s.origin = SampleOrigin::observed;
  return s;
}

}  // namespace agmgan
