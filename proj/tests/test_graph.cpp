#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "agmgan/cliques.hpp"
#include "agmgan/errors.hpp"
#include "agmgan/graph.hpp"
#include "oracles.hpp"

using namespace agmgan;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& contents) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << contents;
  return path;
}

std::set<std::vector<int>> clique_set(const CliqueIndex& idx) {
  std::set<std::vector<int>> out;
  for (std::int64_t i = 0; i < idx.count(); ++i) {
    auto c = idx.clique(i);
    out.insert(std::vector<int>(c.begin(), c.end()));
  }
  return out;
}

}  // namespace

TEST_CASE("edge list: triangle") {
  const auto path = write_temp("agmgan_triangle.txt", "0 1\n1 2\n2 0\n");
  const Graph g = load_edge_list(path);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.has_edge(0, 2));
}

TEST_CASE("edge list: duplicates and self-loops dropped") {
  const auto path = write_temp("agmgan_dedup.txt", "0 1\n1 0\n1 1\n");
  const Graph g = load_edge_list(path);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("edge list: comments, blanks, arbitrary ids") {
  const auto path = write_temp("agmgan_ids.txt",
                               "# a SNAP-style header\n\n105 7\n7 300\n  \n300 105\n");
  const Graph g = load_edge_list(path);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 3);
  // compacted ascending: 7 -> 0, 105 -> 1, 300 -> 2
  CHECK(g.original_id(0) == 7);
  CHECK(g.original_id(1) == 105);
  CHECK(g.original_id(2) == 300);
}

TEST_CASE("edge list: malformed line reports its number") {
  const auto path = write_temp("agmgan_bad.txt", "0 1\n1 two\n");
  CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains(":2:"), InputError);
  const auto extra = write_temp("agmgan_bad2.txt", "0 1 9\n");
  CHECK_THROWS_AS(load_edge_list(extra), InputError);
}

TEST_CASE("edge list: empty inputs rejected") {
  const auto path = write_temp("agmgan_empty.txt", "# nothing\n");
  CHECK_THROWS_AS(load_edge_list(path), InputError);
  CHECK_THROWS_AS(load_edge_list("/nonexistent/file.txt"), InputError);
}

TEST_CASE("adjacency symmetry on a random graph") {
  std::mt19937_64 rng(7);
  const Graph g = oracles::erdos_renyi(40, 0.15, rng);
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (int u : g.neighbors(v)) {
      CHECK(g.has_edge(u, v));
      CHECK(g.has_edge(v, u));
    }
  }
}

TEST_CASE("cliques: complete graphs") {
  const Graph k3 = oracles::complete_graph(3);
  const CliqueIndex idx3 = enumerate_cliques(k3, 3);
  REQUIRE(idx3.count() == 1);
  CHECK(clique_set(idx3).contains({0, 1, 2}));

  const Graph k4 = oracles::complete_graph(4);
  CHECK(enumerate_cliques(k4, 3).count() == 4);
  CHECK(enumerate_cliques(k4, 2).count() == 6);
}

TEST_CASE("cliques: size bounds") {
  const Graph g = oracles::complete_graph(4);
  CHECK_THROWS_AS(enumerate_cliques(g, 1), InputError);
  CHECK_THROWS_AS(enumerate_cliques(g, 7), InputError);
}

TEST_CASE("cliques: exhaustive oracle on G(15, 0.4), size 4") {
  std::mt19937_64 rng(21);
  const Graph g = oracles::erdos_renyi(15, 0.4, rng);
  const auto expected = oracles::exhaustive_cliques(g, 4);
  const CliqueIndex idx = enumerate_cliques(g, 4);
  const auto got = clique_set(idx);
  CHECK(got.size() == expected.size());
  for (const auto& c : expected) CHECK(got.contains(c));
}

TEST_CASE("cliques: oracle sweep over random graphs") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(4, 14);
  std::uniform_real_distribution<double> density(0.2, 0.7);
  for (int trial = 0; trial < 12; ++trial) {
    const Graph g = oracles::erdos_renyi(size(rng), density(rng), rng);
    for (int m = 2; m <= 5; ++m) {
      const auto expected = oracles::exhaustive_cliques(g, m);
      const auto got = clique_set(enumerate_cliques(g, m));
      REQUIRE(got.size() == expected.size());
      for (const auto& c : expected) REQUIRE(got.contains(c));
    }
  }
}

TEST_CASE("cliques: covering index is exact") {
  std::mt19937_64 rng(5);
  const Graph g = oracles::erdos_renyi(14, 0.5, rng);
  const CliqueIndex idx = enumerate_cliques(g, 3);
  for (int v = 0; v < g.vertex_count(); ++v) {
    std::set<std::int64_t> listed(idx.covering(v).begin(), idx.covering(v).end());
    for (std::int64_t i = 0; i < idx.count(); ++i) {
      auto c = idx.clique(i);
      const bool contains = std::find(c.begin(), c.end(), v) != c.end();
      CHECK(listed.contains(i) == contains);
    }
  }
}

TEST_CASE("true-motif sampling: singleton and empty supports") {
  const Graph k3 = oracles::complete_graph(3);
  const CliqueIndex idx = enumerate_cliques(k3, 3);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 10; ++i) {
    auto s = sample_true_motif(idx, 0, rng);
    REQUIRE(s.has_value());
    CHECK(s->vertices == std::vector<int>{0, 1, 2});
    CHECK(s->origin == SampleOrigin::observed);
  }

  // isolated vertex: 3 is outside the triangle
  const Graph g = Graph::from_edges(
      4, std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}});
  const CliqueIndex idx2 = enumerate_cliques(g, 3);
  CHECK_FALSE(sample_true_motif(idx2, 3, rng).has_value());
}

TEST_CASE("true-motif sampling: uniform over the covering cliques") {
  const Graph k4 = oracles::complete_graph(4);
  const CliqueIndex idx = enumerate_cliques(k4, 3);
  REQUIRE(idx.covering(0).size() == 3);

  std::mt19937_64 rng(123);
  std::map<std::vector<int>, int> counts;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto s = sample_true_motif(idx, 0, rng);
    ++counts[s->vertices];
  }
  REQUIRE(counts.size() == 3);
  for (const auto& [clique, n] : counts) {
    CHECK(std::abs(static_cast<double>(n) / draws - 1.0 / 3.0) < 0.01);
  }
}
