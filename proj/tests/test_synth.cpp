#include <doctest.h>

#include <numeric>
#include <set>

#include "agmgan/errors.hpp"
#include "agmgan/eval.hpp"
#include "agmgan/synth.hpp"

using namespace agmgan;

namespace {

PlantedSpec base_spec() {
  PlantedSpec spec;
  spec.vertices = 20;
  spec.communities = 2;
  spec.mean_memberships = 1.0;
  spec.p_in = 1.0;
  spec.p_out = 0.0;
  spec.seed = 42;
  return spec;
}

double measured_mean_memberships(const PlantedGraph& pg) {
  std::int64_t total = 0;
  for (const auto& c : pg.ground_truth.communities) total += c.size();
  return static_cast<double>(total) / pg.graph.vertex_count();
}

// connected components as sorted vertex sets
std::set<std::vector<int>> components(const Graph& g) {
  std::set<std::vector<int>> out;
  std::vector<char> seen(g.vertex_count(), 0);
  for (int s = 0; s < g.vertex_count(); ++s) {
    if (seen[s]) continue;
    std::vector<int> stack{s}, comp;
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int u : g.neighbors(v)) {
        if (!seen[u]) {
          seen[u] = 1;
          stack.push_back(u);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.insert(comp);
  }
  return out;
}

}  // namespace

TEST_CASE("pure partition: two cliques, truth matches itself") {
  const PlantedGraph pg = generate(base_spec());
  CHECK(f1_score(pg.ground_truth, pg.ground_truth) == doctest::Approx(1.0));

  // non-overlapping memberships, no noise: components coincide with
  // communities (no singleton communities under this seed)
  std::set<std::vector<int>> truth_sets;
  for (const auto& c : pg.ground_truth.communities) {
    std::vector<int> members(c.begin(), c.end());
    std::sort(members.begin(), members.end());
    REQUIRE(members.size() > 1);
    truth_sets.insert(members);
  }
  CHECK(components(pg.graph) == truth_sets);
}

TEST_CASE("every vertex holds at least one membership") {
  PlantedSpec spec = base_spec();
  spec.vertices = 300;
  spec.communities = 30;
  spec.mean_memberships = 2.0;
  spec.p_in = 0.4;
  spec.p_out = 0.01;
  const PlantedGraph pg = generate(spec);
  std::vector<int> memberships(spec.vertices, 0);
  for (const auto& c : pg.ground_truth.communities) {
    for (std::int64_t v : c) ++memberships[static_cast<int>(v)];
  }
  for (int v = 0; v < spec.vertices; ++v) CHECK(memberships[v] >= 1);
  // and nobody is isolated after re-attachment
  for (int v = 0; v < spec.vertices; ++v) CHECK(pg.graph.degree(v) >= 1);
}

TEST_CASE("measured memberships grow with the requested mean") {
  double previous = 0.0;
  for (double a : {1.5, 2.5, 3.5}) {
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      PlantedSpec spec = base_spec();
      spec.vertices = 400;
      spec.communities = 40;
      spec.mean_memberships = a;
      spec.p_in = 0.5;
      spec.seed = seed;
      total += measured_mean_memberships(generate(spec));
    }
    const double mean = total / 10.0;
    CHECK(mean > previous);
    previous = mean;
  }
}

TEST_CASE("desk-scale statistics sit near the requested ranges") {
  PlantedSpec spec;
  spec.vertices = 1000;
  spec.communities = 200;
  spec.mean_memberships = 3.0;
  spec.p_in = 0.7;
  spec.p_out = 5e-4;
  spec.seed = 7;
  const PlantedGraph pg = generate(spec);
  CHECK(pg.graph.vertex_count() == 1000);
  // within 30% of the requested memberships-per-vertex level (3.03 nominal)
  const double a = measured_mean_memberships(pg);
  CHECK(a > 3.03 * 0.7);
  CHECK(a < 3.03 * 1.3);
  CHECK(pg.graph.edge_count() > 0);
}

TEST_CASE("heavy-tail memberships stay above one and raise the mean tail") {
  PlantedSpec spec = base_spec();
  spec.vertices = 500;
  spec.communities = 50;
  spec.mean_memberships = 3.0;
  spec.heavy_tail = true;
  spec.p_in = 0.5;
  const PlantedGraph pg = generate(spec);
  std::vector<int> memberships(spec.vertices, 0);
  for (const auto& c : pg.ground_truth.communities) {
    for (std::int64_t v : c) ++memberships[static_cast<int>(v)];
  }
  CHECK(*std::min_element(memberships.begin(), memberships.end()) >= 1);
  const double mean = std::accumulate(memberships.begin(), memberships.end(), 0.0) / 500.0;
  CHECK(mean > 1.5);
}

TEST_CASE("same seed reproduces the graph, different seed varies it") {
  PlantedSpec spec = base_spec();
  spec.vertices = 100;
  spec.communities = 10;
  spec.mean_memberships = 2.0;
  spec.p_in = 0.5;
  spec.p_out = 0.01;
  const PlantedGraph a = generate(spec);
  const PlantedGraph b = generate(spec);
  CHECK(a.graph.edges() == b.graph.edges());
  CHECK(a.ground_truth.communities == b.ground_truth.communities);

  spec.seed = 43;
  const PlantedGraph c = generate(spec);
  CHECK(a.graph.edges() != c.graph.edges());
}

TEST_CASE("guards and validation") {
  PlantedSpec spec = base_spec();
  spec.vertices = 200000;
  spec.communities = 10;
  spec.mean_memberships = 4.0;
  spec.p_in = 0.9;
  CHECK_THROWS_AS(generate(spec), GuardError);

  spec = base_spec();
  spec.p_in = 0.0;  // violates p_out < p_in
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = base_spec();
  spec.mean_memberships = 0.5;
  CHECK_THROWS_AS(generate(spec), InputError);
  spec = base_spec();
  spec.communities = 0;
  CHECK_THROWS_AS(generate(spec), InputError);
}
