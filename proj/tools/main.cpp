// Command-line front end: synth, detect, eval, stats, cliquepred.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "agmgan/agm.hpp"
#include "agmgan/cliques.hpp"
#include "agmgan/community.hpp"
#include "agmgan/errors.hpp"
#include "agmgan/eval.hpp"
#include "agmgan/graph.hpp"
#include "agmgan/random_util.hpp"
#include "agmgan/synth.hpp"
#include "agmgan/trainer.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace agmgan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

std::uint64_t fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot hash input file: " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  return h;
}

// Run record: everything needed to replay the run plus the metric summary.
// Written atomically (temp file + rename) at the end of a command.
class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv) {
    body_["command"] = std::move(command);
    std::vector<std::string> args(argv, argv + argc);
    body_["argv"] = args;
    start_ = std::chrono::steady_clock::now();
  }

  void config(const std::string& key, const json& value) { body_["config"][key] = value; }
  void input(const std::string& name, const fs::path& path) {
    body_["inputs"][name] = {{"path", path.string()},
                             {"fnv1a64", fnv1a_file(path)}};
  }
  void output(const std::string& name, const fs::path& path) {
    body_["outputs"][name] = path.string();
  }
  void metric(const std::string& key, const json& value) { body_["metrics"][key] = value; }

  void write(const fs::path& path) {
    if (path.empty()) return;
    body_["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw InputError("cannot write manifest: " + path.string());
      out << body_.dump(2) << '\n';
    }
    fs::rename(tmp, path);
  }

 private:
  json body_;
  std::chrono::steady_clock::time_point start_;
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stoi(token));
  }
  return out;
}

struct TrainFlags {
  TrainConfig cfg;
  std::string num_communities = "8";
  std::string candidate_counts = "2,4,8,16,32";
  std::string init_name = "agm-pretrain";
};

void add_train_options(CLI::App* sub, TrainFlags& flags, bool allow_auto) {
  sub->add_option("--clique-size", flags.cfg.clique_size, "Motif size m")
      ->capture_default_str();
  if (allow_auto) {
    sub->add_option("--num-communities", flags.num_communities,
                    "Community count C, or 'auto' to select on held-out edges")
        ->capture_default_str();
    sub->add_option("--candidate-counts", flags.candidate_counts,
                    "Comma-separated candidates tried when --num-communities=auto")
        ->capture_default_str();
  } else {
    sub->add_option("--num-communities", flags.num_communities, "Community count C")
        ->capture_default_str();
  }
  sub->add_option("--init", flags.init_name, "Initialization: agm-pretrain or locally-minimal")
      ->capture_default_str();
  sub->add_option("--iters", flags.cfg.max_outer_iterations, "Outer iteration cap")
      ->capture_default_str();
  sub->add_option("--inner", flags.cfg.inner_updates, "Updates per G-step/D-step block")
      ->capture_default_str();
  sub->add_option("--gen-samples", flags.cfg.generating_samples,
                  "Generated subsets per vertex per G-step")
      ->capture_default_str();
  sub->add_option("--disc-samples", flags.cfg.discriminating_samples,
                  "Positive/negative subsets per vertex per D-step")
      ->capture_default_str();
  sub->add_option("--lr", flags.cfg.learning_rate, "SGD learning rate")->capture_default_str();
  sub->add_option("--pretrain-epochs", flags.cfg.pretrain_epochs, "Pretraining epochs")
      ->capture_default_str();
  sub->add_option("--seed", flags.cfg.seed, "Random seed")->capture_default_str();
  sub->add_option("--threads", flags.cfg.threads, "Sampling worker threads")
      ->capture_default_str();
  sub->set_config("--config", "", "Flat key=value config file; flags take precedence");
}

InitMethod parse_init(const std::string& name) {
  if (name == "agm-pretrain") return InitMethod::agm_pretrain;
  if (name == "locally-minimal") return InitMethod::locally_minimal;
  throw InputError("unknown init method: " + name);
}

void record_train_config(Manifest& manifest, const TrainConfig& cfg,
                         const std::string& init_name) {
  manifest.config("clique_size", cfg.clique_size);
  manifest.config("num_communities", cfg.communities);
  manifest.config("init", init_name);
  manifest.config("iters", cfg.max_outer_iterations);
  manifest.config("inner", cfg.inner_updates);
  manifest.config("gen_samples", cfg.generating_samples);
  manifest.config("disc_samples", cfg.discriminating_samples);
  manifest.config("lr", cfg.learning_rate);
  manifest.config("pretrain_epochs", cfg.pretrain_epochs);
  manifest.config("seed", cfg.seed);
  manifest.config("threads", cfg.threads);
}

void write_run_metadata(const fs::path& path, const TrainState& st) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write run metadata: " + path.string());
  out << "iterations=" << st.iterations << '\n';
  out << "generation_failures=" << st.generation_failures << '\n';
  out << "uncovered_vertices=" << st.uncovered_vertices << '\n';
  char buf[64];
  out << "objective_history=";
  for (std::size_t i = 0; i < st.objective_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", st.objective_history[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
  out << "pretrain_history=";
  for (std::size_t i = 0; i < st.pretrain_history.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", st.pretrain_history[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
}

int cmd_detect(const TrainFlags& flags, const fs::path& graph_path, const fs::path& out_path,
               const fs::path& manifest_path, Manifest& manifest) {
  TrainConfig cfg = flags.cfg;
  cfg.init = parse_init(flags.init_name);

  const Graph g = load_edge_list(graph_path);
  manifest.input("graph", graph_path);
  const CliqueIndex idx = enumerate_cliques(g, cfg.clique_size);

  if (flags.num_communities == "auto") {
    const std::vector<int> candidates = parse_int_list(flags.candidate_counts);
    cfg.communities = select_community_count(g, idx, candidates, cfg);
    std::cout << "selected_communities=" << cfg.communities << '\n';
  } else {
    cfg.communities = std::stoi(flags.num_communities);
  }
  record_train_config(manifest, cfg, flags.init_name);

  const TrainState st = train(g, idx, cfg);
  const MembershipThreshold threshold = compute_threshold(g);
  const CommunityAssignment detected =
      to_original(assign_communities(st.theta_g, st.theta_d, threshold), g);

  write_communities(out_path, detected);
  const fs::path emb_g = out_path.string() + ".theta_g.tsv";
  const fs::path emb_d = out_path.string() + ".theta_d.tsv";
  const fs::path meta = out_path.string() + ".meta.txt";
  write_embeddings_tsv(emb_g, g, st.theta_g);
  write_embeddings_tsv(emb_d, g, st.theta_d);
  write_run_metadata(meta, st);

  manifest.output("communities", out_path);
  manifest.output("theta_g", emb_g);
  manifest.output("theta_d", emb_d);
  manifest.output("metadata", meta);
  manifest.metric("iterations", st.iterations);
  manifest.metric("communities_found", detected.communities.size());
  manifest.metric("communities_dropped_empty", detected.dropped_empty);
  manifest.metric("membership_delta", threshold.delta);
  manifest.metric("final_objective",
                  st.objective_history.empty() ? 0.0 : st.objective_history.back());
  manifest.metric("train_wall_seconds", st.wall_seconds);
  manifest.write(manifest_path);

  std::cout << "communities=" << detected.communities.size() << '\n'
            << "iterations=" << st.iterations << '\n';
  return kExitOk;
}

int cmd_eval(const fs::path& truth_path, const fs::path& detected_path, const fs::path& csv_path,
             const fs::path& manifest_path, Manifest& manifest) {
  const CommunityAssignment truth = read_communities(truth_path);
  const CommunityAssignment detected = read_communities(detected_path);
  manifest.input("truth", truth_path);
  manifest.input("detected", detected_path);

  const double f1 = f1_score(truth, detected);
  const double nmi = overlapping_nmi(truth, detected);
  char line[128];
  std::snprintf(line, sizeof line, "f1=%.9f\nnmi=%.9f\n", f1, nmi);
  std::cout << line;

  if (!csv_path.empty()) {
    const bool fresh = !fs::exists(csv_path);
    std::ofstream csv(csv_path, std::ios::app);
    if (!csv) throw InputError("cannot append to csv: " + csv_path.string());
    if (fresh) csv << "truth,detected,f1,nmi\n";
    csv << truth_path.string() << ',' << detected_path.string() << ',' << f1 << ',' << nmi
        << '\n';
    manifest.output("csv", csv_path);
  }
  manifest.metric("f1", f1);
  manifest.metric("nmi", nmi);
  manifest.write(manifest_path);
  return kExitOk;
}

int cmd_synth(const PlantedSpec& spec, const fs::path& prefix, const fs::path& manifest_path,
              Manifest& manifest) {
  const PlantedGraph pg = generate(spec);
  const fs::path edges_path = prefix.string() + ".edges";
  const fs::path truth_path = prefix.string() + ".cmty";

  {
    std::ofstream out(edges_path);
    if (!out) throw InputError("cannot write edge list: " + edges_path.string());
    for (auto [u, v] : pg.graph.edges()) out << u << ' ' << v << '\n';
  }
  write_communities(truth_path, pg.ground_truth);

  manifest.config("vertices", spec.vertices);
  manifest.config("communities", spec.communities);
  manifest.config("avg_memberships", spec.mean_memberships);
  manifest.config("p_in", spec.p_in);
  manifest.config("p_out", spec.p_out);
  manifest.config("heavy_tail", spec.heavy_tail);
  manifest.config("seed", spec.seed);
  manifest.output("edges", edges_path);
  manifest.output("communities", truth_path);
  manifest.metric("edges", pg.graph.edge_count());
  manifest.metric("nonempty_communities", pg.ground_truth.communities.size());
  manifest.write(manifest_path);

  std::cout << "vertices=" << pg.graph.vertex_count() << '\n'
            << "edges=" << pg.graph.edge_count() << '\n'
            << "communities=" << pg.ground_truth.communities.size() << '\n';
  return kExitOk;
}

int cmd_stats(const fs::path& graph_path, const fs::path& truth_path, const std::string& sizes,
              std::int64_t trials, std::uint64_t seed, const fs::path& csv_path,
              const fs::path& manifest_path, Manifest& manifest) {
  const Graph g = load_edge_list(graph_path);
  const CommunityAssignment truth = to_compact(read_communities(truth_path), g);
  manifest.input("graph", graph_path);
  manifest.input("communities", truth_path);

  const std::vector<int> size_list = parse_int_list(sizes);
  auto rng = rng_stream({seed, 0x57A7ULL});
  const MotifStats stats = motif_community_stats(g, truth, size_list, trials, rng);

  std::ofstream csv;
  if (!csv_path.empty()) {
    const bool fresh = !fs::exists(csv_path);
    csv.open(csv_path, std::ios::app);
    if (!csv) throw InputError("cannot append to csv: " + csv_path.string());
    if (fresh) csv << "size,within_community,global,skipped_communities\n";
  }
  for (const auto& row : stats.rows) {
    std::cout << "size=" << row.size << " within_community=" << row.within_community
              << " global=" << row.global_prob << " skipped_communities="
              << row.skipped_communities << '\n';
    if (csv.is_open())
      csv << row.size << ',' << row.within_community << ',' << row.global_prob << ','
          << row.skipped_communities << '\n';
    manifest.metric("within_community_" + std::to_string(row.size), row.within_community);
    manifest.metric("global_" + std::to_string(row.size), row.global_prob);
  }
  for (const auto& [size, bins] : stats.shared_bins) {
    for (const auto& b : bins) {
      std::cout << "size=" << size << " shared=" << b.shared << " draws=" << b.draws
                << " prob=" << b.prob << " normalized=" << b.normalized << '\n';
    }
  }
  manifest.config("sizes", sizes);
  manifest.config("trials", trials);
  manifest.config("seed", seed);
  if (csv.is_open()) manifest.output("csv", csv_path);
  manifest.write(manifest_path);
  return kExitOk;
}

int cmd_cliquepred(const TrainFlags& flags, const fs::path& graph_path, double edge_fraction,
                   const fs::path& manifest_path, Manifest& manifest) {
  TrainConfig cfg = flags.cfg;
  cfg.init = parse_init(flags.init_name);
  cfg.communities = std::stoi(flags.num_communities);

  const Graph g = load_edge_list(graph_path);
  manifest.input("graph", graph_path);
  record_train_config(manifest, cfg, flags.init_name);
  manifest.config("edge_fraction", edge_fraction);

  auto split_rng = rng_stream({cfg.seed, 0x5917ULL});
  const CliquePredictionSplit split =
      build_clique_split(g, cfg.clique_size, edge_fraction, split_rng);

  const CliqueIndex train_idx = enumerate_cliques(split.train_graph, cfg.clique_size);
  const TrainState st = train(split.train_graph, train_idx, cfg);

  auto auc_rng = rng_stream({cfg.seed, 0xA0CULL});
  const double auc = clique_prediction_auc(g, split, st.theta_g, cfg.clique_size, auc_rng);

  std::cout << "achieved_fraction=" << split.achieved_fraction << '\n'
            << "hidden_cliques=" << split.positives.size() << '\n'
            << "auc=" << auc << '\n';
  manifest.metric("achieved_fraction", split.achieved_fraction);
  manifest.metric("hidden_cliques", split.positives.size());
  manifest.metric("auc", auc);
  manifest.write(manifest_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping community detection via an adversarially trained affiliation model"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a planted overlapping-community graph");
  PlantedSpec spec;
  spec.vertices = 1000;
  spec.communities = 100;
  spec.mean_memberships = 2.0;
  spec.p_in = 0.5;
  spec.p_out = 1e-3;
  std::string synth_out = "planted";
  std::string synth_manifest;
  synth->add_option("--vertices", spec.vertices)->capture_default_str();
  synth->add_option("--communities", spec.communities)->capture_default_str();
  synth->add_option("--avg-memberships", spec.mean_memberships)->capture_default_str();
  synth->add_flag("--heavy-tail", spec.heavy_tail, "Heavy-tailed memberships per vertex");
  synth->add_option("--p-in", spec.p_in)->capture_default_str();
  synth->add_option("--p-out", spec.p_out)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();
  synth->add_option("--out", synth_out, "Output prefix (.edges and .cmty)")
      ->capture_default_str();
  synth->add_option("--manifest-out", synth_manifest, "Manifest path (default <out>.manifest.json)");

  // detect
  auto* detect = app.add_subcommand("detect", "Detect overlapping communities");
  TrainFlags detect_flags;
  std::string detect_graph, detect_out, detect_manifest;
  detect->add_option("--graph", detect_graph, "Edge-list file")->required();
  detect->add_option("--communities-out", detect_out, "Detected-communities file")->required();
  detect->add_option("--manifest-out", detect_manifest,
                     "Manifest path (default <communities-out>.manifest.json)");
  add_train_options(detect, detect_flags, /*allow_auto=*/true);

  // eval
  auto* eval = app.add_subcommand("eval", "Score detected communities against ground truth");
  std::string eval_truth, eval_detected, eval_csv, eval_manifest;
  eval->add_option("--truth", eval_truth, "Ground-truth community file")->required();
  eval->add_option("--detected", eval_detected, "Detected community file")->required();
  eval->add_option("--csv", eval_csv, "Append a CSV row here");
  eval->add_option("--manifest-out", eval_manifest, "Manifest path (optional)");

  // stats
  auto* stats = app.add_subcommand("stats", "Clique-occurrence statistics");
  std::string stats_graph, stats_truth, stats_sizes = "2,3,4", stats_csv, stats_manifest;
  std::int64_t stats_trials = 100000;
  std::uint64_t stats_seed = 0;
  stats->add_option("--graph", stats_graph)->required();
  stats->add_option("--communities", stats_truth)->required();
  stats->add_option("--sizes", stats_sizes)->capture_default_str();
  stats->add_option("--trials", stats_trials)->capture_default_str();
  stats->add_option("--seed", stats_seed)->capture_default_str();
  stats->add_option("--csv", stats_csv, "Append CSV rows here");
  stats->add_option("--manifest-out", stats_manifest, "Manifest path (optional)");

  // cliquepred
  auto* cliquepred =
      app.add_subcommand("cliquepred", "Hide cliques, retrain, and report prediction AUC");
  TrainFlags pred_flags;
  std::string pred_graph, pred_manifest;
  double pred_fraction = 0.1;
  cliquepred->add_option("--graph", pred_graph)->required();
  cliquepred->add_option("--edge-fraction", pred_fraction, "Fraction of edges to hide")
      ->capture_default_str();
  cliquepred->add_option("--manifest-out", pred_manifest, "Manifest path (optional)");
  add_train_options(cliquepred, pred_flags, /*allow_auto=*/false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (synth->parsed()) {
      Manifest manifest("synth", argc, argv);
      const fs::path mpath =
          synth_manifest.empty() ? fs::path(synth_out + ".manifest.json") : fs::path(synth_manifest);
      return cmd_synth(spec, synth_out, mpath, manifest);
    }
    if (detect->parsed()) {
      Manifest manifest("detect", argc, argv);
      const fs::path mpath = detect_manifest.empty()
                                 ? fs::path(detect_out + ".manifest.json")
                                 : fs::path(detect_manifest);
      return cmd_detect(detect_flags, detect_graph, detect_out, mpath, manifest);
    }
    if (eval->parsed()) {
      Manifest manifest("eval", argc, argv);
      return cmd_eval(eval_truth, eval_detected, eval_csv, eval_manifest, manifest);
    }
    if (stats->parsed()) {
      Manifest manifest("stats", argc, argv);
      return cmd_stats(stats_graph, stats_truth, stats_sizes, stats_trials, stats_seed,
                       stats_csv, stats_manifest, manifest);
    }
    if (cliquepred->parsed()) {
      Manifest manifest("cliquepred", argc, argv);
      return cmd_cliquepred(pred_flags, pred_graph, pred_fraction, pred_manifest, manifest);
    }
  } catch (const GuardError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitGuard;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
