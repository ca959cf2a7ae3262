#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "agmgan/graph.hpp"
#include "agmgan/sample.hpp"

namespace agmgan {

// All cliques of one size, stored flat (clique_size consecutive ids per
// clique, each tuple ascending), plus a per-vertex covering index.
// Immutable after construction.
class CliqueIndex {
 public:
  CliqueIndex(int clique_size, std::vector<int> flat_vertices, int vertex_count);

  int clique_size() const { return clique_size_; }
  std::int64_t count() const {
    return static_cast<std::int64_t>(flat_.size()) / clique_size_;
  }
  std::span<const int> clique(std::int64_t i) const {
    return {flat_.data() + i * clique_size_, static_cast<std::size_t>(clique_size_)};
  }
  // Indices of the cliques containing v.
  std::span<const std::int64_t> covering(int v) const { return covering_[v]; }

 private:
  int clique_size_;
  std::vector<int> flat_;
  std::vector<std::vector<std::int64_t>> covering_;
};

// Enumerates every clique of the given size exactly once by extending each
// partial clique with common neighbors of larger id. clique_size must be in
// [2, 6].
CliqueIndex enumerate_cliques(const Graph& g, int clique_size);

// Uniform draw from the cliques covering v; nullopt when none does.
std::optional<MotifSample> sample_true_motif(const CliqueIndex& idx, int v,
                                             std::mt19937_64& rng);

}  // namespace agmgan
