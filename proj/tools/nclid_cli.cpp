// Command-line front end: parses flags into a PipelineConfig and dispatches.

#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "nclid/error.hpp"
#include "nclid/pipeline.hpp"

namespace {

struct Flag {
  const char* name;
  const char* key;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"--graph", "graph", "edge list file"},
    {"--embedding", "embedding", "word2vec text embedding (evaluate, correlate, mwu)"},
    {"--name", "name", "dataset name in reports (default: graph file stem)"},
    {"--variant", "variant", "walk variant: n2v, lid-rw, lid-rwpq"},
    {"--variants", "variants", "comma-separated variants for the pipeline"},
    {"--dim", "dim", "embedding dimension"},
    {"--dims", "dims", "comma-separated dimensions for the pipeline"},
    {"--p", "p", "return parameter"},
    {"--q", "q", "in-out parameter"},
    {"--p-grid", "p_grid", "comma-separated p values for the pipeline"},
    {"--q-grid", "q_grid", "comma-separated q values for the pipeline"},
    {"--walks", "walks", "walks per node (B)"},
    {"--length", "length", "walk length in nodes (W)"},
    {"--alpha", "alpha", "community fitness exponent"},
    {"--seed", "seed", "random seed"},
    {"--seeds", "seeds", "comma-separated seeds for the pipeline"},
    {"--window", "window", "skip-gram window"},
    {"--negatives", "negatives", "negative samples per pair"},
    {"--epochs", "epochs", "training epochs"},
    {"--lr", "lr", "initial learning rate"},
    {"--threads", "threads", "worker threads (0 = all cores)"},
    {"--out", "out", "output directory (default: stdout)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural-community LID analysis and LID-elastic node2vec embeddings"};
  app.require_subcommand(1);
  app.set_version_flag("--version", nclid::kVersion);

  const std::vector<std::pair<std::string, std::string>> commands{
      {"stats", "graph statistics row"},
      {"nclid", "per-node natural communities and NC-LID"},
      {"centrality", "degree, core, eigenvector, closeness and betweenness centrality"},
      {"embed", "sample walks and train an embedding"},
      {"evaluate", "link reconstruction precision, recall and F1"},
      {"correlate", "Spearman correlations between NC-LID, centralities and F1"},
      {"mwu", "Mann-Whitney U comparison of high and low NC-LID nodes"},
      {"pipeline", "full parameter sweep with comparison reports"},
  };

  std::map<std::string, std::string> values;
  std::string config_path;
  std::string deterministic;
  std::map<std::string, CLI::App*> subs;
  for (const auto& [cmd, help] : commands) {
    auto* sub = app.add_subcommand(cmd, help);
    for (const auto& f : kFlags) sub->add_option_function<std::string>(
        f.name, [&values, key = f.key](const std::string& v) { values[key] = v; }, f.help);
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--deterministic", deterministic, "reproducible single-threaded training (true/false)")
        ->expected(0, 1)
        ->default_str("true");
    subs[cmd] = sub;
  }

  CLI11_PARSE(app, argc, argv);

  nclid::PipelineConfig cfg;
  try {
    if (!config_path.empty()) nclid::apply_config_file(cfg, config_path);
    for (const auto& [key, value] : values) cfg.set(key, value);
    for (const auto& [cmd, sub] : subs) {
      if (sub->parsed() && sub->count("--deterministic")) {
        cfg.set("deterministic", deterministic.empty() ? "true" : deterministic);
      }
    }
  } catch (const nclid::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  for (const auto& [cmd, sub] : subs) {
    if (sub->parsed()) return nclid::run_command(cmd, cfg, std::cout, std::cerr);
  }
  return 1;
}
