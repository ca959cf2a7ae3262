#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "agmgan/agm.hpp"
#include "agmgan/cliques.hpp"
#include "agmgan/generator.hpp"
#include "agmgan/graph.hpp"

namespace agmgan {

enum class InitMethod { agm_pretrain, locally_minimal };

struct TrainConfig {
  int clique_size = 3;
  int communities = 8;
  int discriminating_samples = 5;  // positive/negative subsets per vertex per D-step
  int generating_samples = 5;      // subsets per vertex per G-step
  int inner_updates = 3;
  double learning_rate = 1e-3;
  int max_outer_iterations = 30;
  int convergence_window = 5;
  double convergence_tolerance = 1e-4;
  std::uint64_t seed = 0;
  InitMethod init = InitMethod::agm_pretrain;
  int pretrain_epochs = 15;
  WalkLimits walk;
  int threads = 1;
  int validation_edges = 1000;  // sample size for the convergence objective
  // Diagnostics hook, called after every outer iteration with the running
  // state; not part of the training semantics.
  std::function<void(int iteration, const struct TrainState&)> iteration_callback;
};

// Throws InputError on nonpositive counts or learning rate.
void validate(const TrainConfig& cfg);

struct TrainState {
  AffiliationMatrix theta_g;
  AffiliationMatrix theta_d;
  // Matrices right after initialization/pretraining, before any adversarial
  // update (for paired comparisons and diagnostics).
  AffiliationMatrix pretrain_theta_g;
  AffiliationMatrix pretrain_theta_d;
  int iterations = 0;
  std::vector<double> objective_history;  // validation log-likelihood, entry 0 = pre-training
  std::vector<double> pretrain_history;
  double wall_seconds = 0.0;
  std::int64_t generation_failures = 0;
  std::int64_t uncovered_vertices = 0;  // vertices skipped in D-step positive sampling
};

// Conductance of the closed neighborhood {v} u N(v): cut edges over the
// smaller of the set's volume and its complement's (1.0 when degenerate).
double closed_neighborhood_conductance(const Graph& g, int v);

// Seeds one community per low-conductance closed neighborhood: locally
// minimal neighborhoods first (conductance below all graph neighbors'),
// ranked by ascending conductance with vertex-id tie-break, then the
// remaining neighborhoods in the same order until `communities` columns are
// seeded. Members get affiliation 1, everything gets uniform(0, 0.1) jitter;
// theta_d copies theta_g.
struct InitPair {
  AffiliationMatrix theta_g;
  AffiliationMatrix theta_d;
};
InitPair init_locally_minimal(const Graph& g, int communities, std::uint64_t seed);

struct PretrainResult {
  AffiliationMatrix theta_g;
  AffiliationMatrix theta_d;
  std::vector<double> objective_history;  // one entry per epoch
};

// Fits the affiliation model alone: projected per-sample SGD maximizing
// sum log p(clique) over the index plus log(1 - p) over one uniformly drawn
// non-clique subset per positive. Starts from init_locally_minimal; with
// epochs == 0 returns that initialization unchanged. The logged objective
// uses a fixed sample of positives and negatives.
PretrainResult pretrain_agm(const Graph& g, const CliqueIndex& idx, int communities, int epochs,
                            std::uint64_t seed, double learning_rate = 1e-3);

// The full minimax loop: initialization per cfg.init, then alternating
// G-steps (generate cfg.generating_samples subsets per vertex, policy-
// gradient descent with reward log(1 - D(s))) and D-steps (per vertex,
// cfg.discriminating_samples true motifs and generated subsets, ascent on
// the classification objective), each repeated cfg.inner_updates times per
// outer iteration. Stops at the iteration cap or when the validation
// objective stabilizes. Throws InputError when the graph has no cliques of
// size cfg.clique_size.
TrainState train(const Graph& g, const CliqueIndex& idx, const TrainConfig& cfg);

// Holds out 20% of edges (one shared split for all candidates), trains on the
// rest for each candidate community count, and scores the held-out edges plus
// an equal number of non-edges with the edge-level clique probability under
// theta_g. Returns the candidate with the highest mean log-likelihood,
// smaller count on ties. Redraws the split (bounded) if it leaves the
// training graph without cliques.
int select_community_count(const Graph& g, const CliqueIndex& idx,
                           std::span<const int> candidates, const TrainConfig& cfg);

}  // namespace agmgan
