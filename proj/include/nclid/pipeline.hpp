#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nclid/community.hpp"
#include "nclid/eval.hpp"
#include "nclid/graph.hpp"
#include "nclid/sgns.hpp"
#include "nclid/stats.hpp"
#include "nclid/walks.hpp"

namespace nclid {

// Effective settings for every subcommand. Single-run commands (embed, mwu)
// use `variant`, `dim`, `p`, `q` and the first seed; the pipeline sweeps the
// list-valued fields.
struct PipelineConfig {
  std::string graph;
  std::string embedding;  // evaluate/correlate/mwu input; trained on the fly when empty
  std::string name;       // dataset name for reports; defaults to the graph file stem
  std::string out;        // output directory; reports go to stdout when empty

  WalkVariant variant = WalkVariant::Node2Vec;
  std::vector<WalkVariant> variants{WalkVariant::Node2Vec, WalkVariant::LidRw, WalkVariant::LidRwpq};
  int dim = 100;
  std::vector<int> dims{10, 25, 50, 100, 200};
  double p = 1.0;
  double q = 1.0;
  std::vector<double> p_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> q_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  bool sweep_lid = false;  // also tune the lid variants over the p/q grid

  int walks = 10;   // B
  int length = 80;  // W
  double alpha = 1.0;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};

  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double lr = 0.025;

  unsigned threads = 1;
  bool deterministic = true;

  /// Sets one field from its key=value text form. Throws InputError for
  /// unknown keys and malformed values.
  void set(std::string_view key, std::string_view value);
  void validate() const;

  std::string dataset_name() const;
  WalkConfig walk_config(WalkVariant v, double p_base, double q_base, std::uint64_t seed) const;
  TrainConfig train_config(int dimension, std::uint64_t seed) const;
  std::string to_json() const;  // compact, keys sorted
};

/// Applies a flat key=value file: '#' starts a comment, blank lines are
/// ignored. Errors carry the line number.
void apply_config_file(PipelineConfig& cfg, std::istream& in);
void apply_config_file(PipelineConfig& cfg, const std::string& path);

double median(std::vector<double> values);

/// Samples a corpus for `wcfg` and trains an embedding over it.
Embedding embed(const Graph& g, const NcLidTable& table, const WalkConfig& wcfg, const TrainConfig& tcfg,
                unsigned walk_threads = 1);

struct SweepRun {
  WalkVariant variant = WalkVariant::Node2Vec;
  int dim = 0;
  double p = 1.0;
  double q = 1.0;
  std::uint64_t seed = 0;
  double macro_f1 = 0.0;
};

// Median macro-F1 over seeds at one (variant, dim, p, q) point.
struct SweepPoint {
  WalkVariant variant = WalkVariant::Node2Vec;
  int dim = 0;
  double p = 1.0;
  double q = 1.0;
  double median_f1 = 0.0;
  std::uint64_t median_seed = 0;  // seed whose run sits at the (lower) median
};

struct SweepReport {
  std::vector<SweepRun> runs;
  std::vector<SweepPoint> points;
  std::vector<SweepPoint> best;  // one per variant in config order
  double improvement_percent = 0.0;  // best lid variant vs best plain node2vec
};

/// Plain node2vec over dims x p_grid x q_grid; lid variants over dims with
/// base p, q at 1 and at the best plain (p, q), or over the full grid with
/// sweep_lid. Runs are independent jobs on `cfg.threads` workers; the report
/// does not depend on scheduling.
SweepReport run_sweep(const Graph& g, const NcLidTable& table, const PipelineConfig& cfg,
                      const std::function<void(std::size_t done, std::size_t total)>& progress = {});

struct MwuReport {
  double f1_high = 0.0;  // mean F1 of the high NC-LID group
  double f1_low = 0.0;
  std::size_t n_high = 0;
  std::size_t n_low = 0;
  stats::MwuResult test;
};

/// Splits nodes by mean NC-LID and compares their F1 scores.
MwuReport mwu_report(std::span<const double> nc_lid, std::span<const double> f1);

// Square Spearman matrix over named per-node columns. Entries that cannot be
// computed (constant column) are empty.
struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<std::optional<double>>> rho;
};

CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& columns);
void write_correlation_csv(const CorrelationMatrix& m, std::ostream& out);

/// Runs one subcommand (stats, nclid, centrality, embed, evaluate,
/// correlate, mwu, pipeline). Returns the process exit code: 0 on success,
/// 1 for input errors, 2 for numerical failures. Messages go to `err`.
int run_command(std::string_view command, const PipelineConfig& cfg, std::ostream& out, std::ostream& err);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nclid
