#include "agmgan/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <thread>

#include "agmgan/discriminator.hpp"
#include "agmgan/errors.hpp"
#include "agmgan/random_util.hpp"

namespace agmgan {

namespace {

// Stream tags keeping every sampling purpose on its own rng stream.
enum StreamTag : std::uint64_t {
  kTagInit = 1,
  kTagPretrain = 2,
  kTagValidation = 3,
  kTagGStep = 4,
  kTagDPositive = 5,
  kTagDNegative = 6,
  kTagSelect = 7,
};

std::vector<int> draw_non_clique(const Graph& g, int size, std::mt19937_64& rng) {
  for (int tries = 0; tries < 10000; ++tries) {
    std::vector<int> subset = sample_distinct(g.vertex_count(), size, rng);
    bool clique = true;
    for (std::size_t i = 0; i + 1 < subset.size() && clique; ++i) {
      for (std::size_t j = i + 1; j < subset.size(); ++j) {
        if (!g.has_edge(subset[i], subset[j])) {
          clique = false;
          break;
        }
      }
    }
    if (!clique) return subset;
  }
  throw InputError("could not sample a non-clique subset; graph is too dense");
}

std::vector<std::pair<int, int>> sample_nonedges(const Graph& g, std::int64_t count,
                                                 std::mt19937_64& rng) {
  const std::int64_t v = g.vertex_count();
  if (v * (v - 1) / 2 <= g.edge_count())
    throw InputError("graph has no non-edges to sample");
  std::vector<std::pair<int, int>> out;
  out.reserve(count);
  std::uniform_int_distribution<int> pick(0, g.vertex_count() - 1);
  std::int64_t tries = 0;
  const std::int64_t max_tries = count * 10000 + 10000;
  while (static_cast<std::int64_t>(out.size()) < count && tries++ < max_tries) {
    const int a = pick(rng);
    const int b = pick(rng);
    if (a == b || g.has_edge(a, b)) continue;
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  if (static_cast<std::int64_t>(out.size()) < count)
    throw InputError("could not sample enough non-edges");
  return out;
}

// Mean log-likelihood of edges (positives) and non-edges (negatives) under
// the edge-level clique probability of theta rows.
double edge_loglik(const AffiliationMatrix& theta,
                   std::span<const std::pair<int, int>> edges,
                   std::span<const std::pair<int, int>> nonedges) {
  double sum = 0.0;
  for (auto [u, v] : edges) {
    const double s = (theta.row(u) * theta.row(v)).sum();
    sum += log_clique_prob_from_overlap(s);
  }
  for (auto [u, v] : nonedges) {
    sum -= (theta.row(u) * theta.row(v)).sum();  // log(1 - p) = -overlap
  }
  const double n = static_cast<double>(edges.size() + nonedges.size());
  return n > 0 ? sum / n : 0.0;
}

bool converged(const std::vector<double>& history, const TrainConfig& cfg) {
  const int w = cfg.convergence_window;
  if (static_cast<int>(history.size()) < w + 1) return false;
  const auto tail = history.end() - (w + 1);
  const double lo = *std::min_element(tail, history.end());
  const double hi = *std::max_element(tail, history.end());
  const double scale = std::max(std::abs(history.back()), 1e-12);
  return (hi - lo) / scale < cfg.convergence_tolerance;
}

template <typename Fn>
void parallel_over_vertices(int vertex_count, int threads, Fn&& fn) {
  if (threads <= 1 || vertex_count < 2 * threads) {
    for (int v = 0; v < vertex_count; ++v) fn(v);
    return;
  }
  const int workers = std::min(threads, vertex_count);
  const int chunk = (vertex_count + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(vertex_count, lo + chunk);
    pool.emplace_back([lo, hi, &fn] {
      for (int v = lo; v < hi; ++v) fn(v);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

void validate(const TrainConfig& cfg) {
  if (cfg.clique_size < 2 || cfg.clique_size > 6)
    throw InputError("clique size must be in [2, 6]");
  if (cfg.communities < 1) throw InputError("community count must be positive");
  if (cfg.discriminating_samples < 1 || cfg.generating_samples < 1)
    throw InputError("sample counts must be positive");
  if (cfg.inner_updates < 1) throw InputError("inner update count must be positive");
  if (cfg.learning_rate <= 0) throw InputError("learning rate must be positive");
  if (cfg.max_outer_iterations < 0) throw InputError("iteration cap must be nonnegative");
  if (cfg.convergence_window < 1) throw InputError("convergence window must be positive");
  if (cfg.convergence_tolerance <= 0) throw InputError("convergence tolerance must be positive");
  if (cfg.pretrain_epochs < 0) throw InputError("pretrain epochs must be nonnegative");
  if (cfg.walk.max_walk < 1 || cfg.walk.restarts < 0) throw InputError("invalid walk limits");
  if (cfg.threads < 1) throw InputError("thread count must be positive");
  if (cfg.validation_edges < 1) throw InputError("validation sample size must be positive");
}

double closed_neighborhood_conductance(const Graph& g, int v) {
  std::vector<char> in_set(g.vertex_count(), 0);
  in_set[v] = 1;
  for (int u : g.neighbors(v)) in_set[u] = 1;

  std::int64_t volume = 0;
  std::int64_t cut = 0;
  auto tally = [&](int u) {
    volume += g.degree(u);
    for (int w : g.neighbors(u)) {
      if (!in_set[w]) ++cut;
    }
  };
  tally(v);
  for (int u : g.neighbors(v)) tally(u);

  const std::int64_t complement_volume = 2 * g.edge_count() - volume;
  const std::int64_t denom = std::min(volume, complement_volume);
  if (denom <= 0) return 1.0;
  return static_cast<double>(cut) / static_cast<double>(denom);
}

InitPair init_locally_minimal(const Graph& g, int communities, std::uint64_t seed) {
  if (communities < 1) throw InputError("community count must be positive");
  const int v_count = g.vertex_count();

  std::vector<double> phi(v_count);
  for (int v = 0; v < v_count; ++v) phi[v] = closed_neighborhood_conductance(g, v);

  std::vector<char> locally_minimal(v_count, 1);
  for (int v = 0; v < v_count; ++v) {
    for (int u : g.neighbors(v)) {
      if (!(phi[v] < phi[u])) {
        locally_minimal[v] = 0;
        break;
      }
    }
  }

  // Locally minimal neighborhoods first, then the rest, each block by
  // ascending conductance with vertex-id tie-break.
  std::vector<int> order(v_count);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (locally_minimal[a] != locally_minimal[b]) return locally_minimal[a] > locally_minimal[b];
    if (phi[a] != phi[b]) return phi[a] < phi[b];
    return a < b;
  });

  // Vertices already covered by a chosen seed's closed neighborhood cannot
  // seed a later column, so distinct regions get their own columns first. A
  // fill pass then continues down the ranking with neighborhoods that are not
  // set-identical to one already used; columns beyond that supply keep their
  // jitter-only start (a column equal to another adds nothing).
  std::vector<int> seeds;
  seeds.reserve(std::min(communities, v_count));
  std::vector<char> covered(v_count, 0), is_seed(v_count, 0);
  for (int v : order) {
    if (static_cast<int>(seeds.size()) == communities) break;
    if (covered[v]) continue;
    seeds.push_back(v);
    is_seed[v] = 1;
    covered[v] = 1;
    for (int u : g.neighbors(v)) covered[u] = 1;
  }
  if (static_cast<int>(seeds.size()) < communities) {
    auto closed_neighborhood = [&](int v) {
      std::vector<int> s(g.neighbors(v).begin(), g.neighbors(v).end());
      s.push_back(v);
      std::sort(s.begin(), s.end());
      return s;
    };
    std::set<std::vector<int>> used;
    for (int s : seeds) used.insert(closed_neighborhood(s));
    for (int v : order) {
      if (static_cast<int>(seeds.size()) == communities) break;
      if (is_seed[v]) continue;
      auto nb = closed_neighborhood(v);
      if (used.contains(nb)) continue;
      used.insert(std::move(nb));
      seeds.push_back(v);
      is_seed[v] = 1;
    }
  }

  auto rng = rng_stream({seed, kTagInit});
  std::uniform_real_distribution<double> jitter(0.0, 0.1);
  AffiliationMatrix theta(v_count, communities);
  for (int v = 0; v < v_count; ++v) {
    for (int c = 0; c < communities; ++c) theta(v, c) = jitter(rng);
  }
  for (int c = 0; c < static_cast<int>(seeds.size()); ++c) {
    const int s = seeds[c];
    theta(s, c) += 1.0;
    for (int u : g.neighbors(s)) theta(u, c) += 1.0;
  }

  InitPair out;
  out.theta_g = theta;
  out.theta_d = std::move(theta);
  return out;
}

PretrainResult pretrain_agm(const Graph& g, const CliqueIndex& idx, int communities, int epochs,
                            std::uint64_t seed, double learning_rate) {
  if (epochs < 0) throw InputError("pretrain epochs must be nonnegative");
  if (learning_rate <= 0) throw InputError("learning rate must be positive");

  InitPair init = init_locally_minimal(g, communities, seed);
  PretrainResult out;
  out.theta_g = std::move(init.theta_g);

  const std::int64_t positives = idx.count();
  if (epochs > 0 && positives > 0) {
    auto rng = rng_stream({seed, kTagPretrain});
    const int m = idx.clique_size();

    // Fixed evaluation sample for the logged objective.
    const std::int64_t eval_n = std::min<std::int64_t>(positives, 2000);
    std::vector<std::int64_t> eval_pos(positives);
    std::iota(eval_pos.begin(), eval_pos.end(), std::int64_t{0});
    std::shuffle(eval_pos.begin(), eval_pos.end(), rng);
    eval_pos.resize(eval_n);
    std::vector<std::vector<int>> eval_neg(eval_n);
    for (auto& s : eval_neg) s = draw_non_clique(g, m, rng);

    auto objective = [&](const AffiliationMatrix& f) {
      double pos = 0.0, neg = 0.0;
      for (std::int64_t i : eval_pos)
        pos += log_clique_prob_from_overlap(sum_entrywise_product(f, idx.clique(i)));
      for (const auto& s : eval_neg) neg -= sum_entrywise_product(f, s);
      return (pos + neg) / static_cast<double>(2 * eval_n);
    };

    std::vector<std::int64_t> order(positives);
    std::iota(order.begin(), order.end(), std::int64_t{0});
    for (int epoch = 0; epoch < epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::int64_t i : order) {
        ascend_clique_objective(out.theta_g, idx.clique(i), learning_rate, true);
        const std::vector<int> negative = draw_non_clique(g, m, rng);
        ascend_clique_objective(out.theta_g, negative, learning_rate, false);
      }
      out.objective_history.push_back(objective(out.theta_g));
    }
  }

  out.theta_d = out.theta_g;
  return out;
}

TrainState train(const Graph& g, const CliqueIndex& idx, const TrainConfig& cfg) {
  validate(cfg);
  if (idx.clique_size() != cfg.clique_size)
    throw InputError("clique index was built with a different clique size");
  if (idx.count() == 0)
    throw InputError("graph has no cliques of size " + std::to_string(cfg.clique_size) +
                     "; use a smaller --clique-size");

  const auto t0 = std::chrono::steady_clock::now();
  const int v_count = g.vertex_count();

  TrainState st;
  if (cfg.init == InitMethod::agm_pretrain) {
    PretrainResult pre = pretrain_agm(g, idx, cfg.communities, cfg.pretrain_epochs, cfg.seed,
                                      cfg.learning_rate);
    st.theta_g = std::move(pre.theta_g);
    st.theta_d = std::move(pre.theta_d);
    st.pretrain_history = std::move(pre.objective_history);
  } else {
    InitPair init = init_locally_minimal(g, cfg.communities, cfg.seed);
    st.theta_g = std::move(init.theta_g);
    st.theta_d = std::move(init.theta_d);
  }
  st.pretrain_theta_g = st.theta_g;
  st.pretrain_theta_d = st.theta_d;

  for (int v = 0; v < v_count; ++v) {
    if (g.degree(v) > 0 && idx.covering(v).empty()) ++st.uncovered_vertices;
  }

  // Fixed validation sample: edges plus matched non-edges, scored with the
  // edge-level clique probability of theta_g.
  auto val_rng = rng_stream({cfg.seed, kTagValidation});
  auto all_edges = g.edges();
  std::shuffle(all_edges.begin(), all_edges.end(), val_rng);
  const std::int64_t val_n =
      std::min<std::int64_t>(cfg.validation_edges, static_cast<std::int64_t>(all_edges.size()));
  std::vector<std::pair<int, int>> val_edges(all_edges.begin(), all_edges.begin() + val_n);
  std::vector<std::pair<int, int>> val_nonedges = sample_nonedges(g, val_n, val_rng);

  st.objective_history.push_back(edge_loglik(st.theta_g, val_edges, val_nonedges));

  std::vector<std::vector<MotifSample>> generated(v_count);
  std::vector<std::vector<MotifSample>> positives(v_count);
  std::vector<std::int64_t> failures(v_count, 0);

  for (int iter = 1; iter <= cfg.max_outer_iterations; ++iter) {
    // G-steps: generate once against the iteration-start theta_g, then apply
    // the policy-gradient pass over those same subsets inner_updates times
    // (sequential per-sample descent in vertex order).
    parallel_over_vertices(v_count, cfg.threads, [&](int v) {
      generated[v].clear();
      if (g.degree(v) == 0) return;
      auto rng = rng_stream({cfg.seed, kTagGStep, static_cast<std::uint64_t>(iter),
                             static_cast<std::uint64_t>(v)});
      for (int k = 0; k < cfg.generating_samples; ++k) {
        auto s = generate_subset(g, st.theta_g, v, cfg.clique_size, cfg.walk, rng);
        if (s) {
          generated[v].push_back(std::move(*s));
        } else {
          ++failures[v];
        }
      }
    });
    for (int t = 0; t < cfg.inner_updates; ++t) {
      // Gradients are taken against the matrix as of the pass start, not the
      // one mutating under the per-sample updates.
      const AffiliationMatrix snapshot = st.theta_g;
      for (int v = 0; v < v_count; ++v) {
        for (const MotifSample& s : generated[v]) {
          const double reward = -sum_entrywise_product(st.theta_d, s.vertices);  // log(1 - D)
          const RowGradients grads = grad_log_generation(g, snapshot, s);
          // Descent on theta_g: -lr * log(1-D) * grad log G.
          apply_row_gradients(st.theta_g, grads, -cfg.learning_rate * reward);
        }
      }
    }

    // D-steps: positives from the clique index (uncovered vertices skipped)
    // and negatives from the updated generator, drawn once, then
    // inner_updates ascent passes over the same subsets in vertex order.
    parallel_over_vertices(v_count, cfg.threads, [&](int v) {
      positives[v].clear();
      generated[v].clear();
      if (g.degree(v) == 0) return;
      if (!idx.covering(v).empty()) {
        auto rng = rng_stream({cfg.seed, kTagDPositive, static_cast<std::uint64_t>(iter),
                               static_cast<std::uint64_t>(v)});
        for (int k = 0; k < cfg.discriminating_samples; ++k) {
          auto s = sample_true_motif(idx, v, rng);
          positives[v].push_back(std::move(*s));
        }
      }
      auto rng = rng_stream({cfg.seed, kTagDNegative, static_cast<std::uint64_t>(iter),
                             static_cast<std::uint64_t>(v)});
      for (int k = 0; k < cfg.discriminating_samples; ++k) {
        auto s = generate_subset(g, st.theta_g, v, cfg.clique_size, cfg.walk, rng);
        if (s) {
          generated[v].push_back(std::move(*s));
        } else {
          ++failures[v];
        }
      }
    });
    for (int t = 0; t < cfg.inner_updates; ++t) {
      for (int v = 0; v < v_count; ++v) {
        update_from_batch(st.theta_d, positives[v], generated[v], cfg.learning_rate);
      }
    }

    st.objective_history.push_back(edge_loglik(st.theta_g, val_edges, val_nonedges));
    st.iterations = iter;
    if (cfg.iteration_callback) cfg.iteration_callback(iter, st);
    if (converged(st.objective_history, cfg)) break;
  }

  st.generation_failures = std::accumulate(failures.begin(), failures.end(), std::int64_t{0});
  st.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

int select_community_count(const Graph& g, const CliqueIndex& idx,
                           std::span<const int> candidates, const TrainConfig& cfg) {
  if (candidates.empty()) throw InputError("no candidate community counts");
  if (candidates.size() == 1) return candidates[0];
  if (idx.clique_size() != cfg.clique_size)
    throw InputError("clique index was built with a different clique size");

  auto rng = rng_stream({cfg.seed, kTagSelect});
  auto all_edges = g.edges();
  const std::int64_t hold =
      std::max<std::int64_t>(1, std::llround(0.2 * static_cast<double>(all_edges.size())));

  // One shared split for every candidate; redraw only when the training side
  // loses all its cliques.
  Graph train_graph;
  std::vector<std::pair<int, int>> holdout;
  bool split_found = false;
  for (int attempt = 0; attempt < 5 && !split_found; ++attempt) {
    std::shuffle(all_edges.begin(), all_edges.end(), rng);
    holdout.assign(all_edges.begin(), all_edges.begin() + hold);
    std::vector<std::pair<int, int>> train_edges(all_edges.begin() + hold, all_edges.end());
    if (train_edges.empty()) continue;
    Graph candidate_graph =
        Graph::from_edges(g.vertex_count(), train_edges, g.original_ids());
    if (enumerate_cliques(candidate_graph, cfg.clique_size).count() > 0) {
      train_graph = std::move(candidate_graph);
      split_found = true;
    }
  }
  if (!split_found)
    throw InputError("every holdout split left the graph without cliques of the training size");

  const CliqueIndex train_idx = enumerate_cliques(train_graph, cfg.clique_size);
  const std::vector<std::pair<int, int>> negatives = sample_nonedges(g, hold, rng);

  std::vector<int> sorted_candidates(candidates.begin(), candidates.end());
  std::sort(sorted_candidates.begin(), sorted_candidates.end());

  int best_candidate = sorted_candidates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (int c : sorted_candidates) {
    TrainConfig sub = cfg;
    sub.communities = c;
    const TrainState st = train(train_graph, train_idx, sub);
    const double score = edge_loglik(st.theta_g, holdout, negatives);
    if (score > best_score) {
      best_score = score;
      best_candidate = c;
    }
  }
  return best_candidate;
}

}  // namespace agmgan
