#include "nclid/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "nclid/centrality.hpp"
#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("invalid value '" + std::string(text) + "' for " + std::string(key));
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw InputError("invalid value '" + std::string(text) + "' for " + std::string(key));
}

template <typename T>
std::vector<T> parse_number_list(std::string_view key, std::string_view text) {
  std::vector<T> out;
  for (auto item : split_list(text)) out.push_back(parse_number<T>(key, item));
  return out;
}

json header_json(std::string_view command, const PipelineConfig& cfg) {
  return json{{"tool", "nclid"},
              {"version", kVersion},
              {"command", std::string(command)},
              {"config", json::parse(cfg.to_json())}};
}

// Where a report goes: a file in the output directory, or the fallback stream.
class ReportSink {
 public:
  ReportSink(const PipelineConfig& cfg, std::ostream& fallback, const std::string& filename)
      : stream_(&fallback) {
    if (cfg.out.empty()) return;
    std::filesystem::create_directories(cfg.out);
    path_ = (std::filesystem::path(cfg.out) / filename).string();
    file_.open(path_, std::ios::binary);
    if (!file_) throw InputError("cannot write " + path_);
    stream_ = &file_;
  }

  std::ostream& stream() { return *stream_; }
  bool to_file() const { return file_.is_open(); }

 private:
  std::ofstream file_;
  std::string path_;
  std::ostream* stream_;
};

// Writes `summary` as a trailing comment in stdout mode, or as its own JSON file.
void emit_summary(const PipelineConfig& cfg, std::ostream& out, ReportSink& csv, const std::string& filename,
                  const json& summary) {
  if (!csv.to_file()) {
    out << "# summary: " << summary.dump() << '\n';
    return;
  }
  ReportSink sink(cfg, out, filename);
  sink.stream() << summary.dump(2) << '\n';
}

void csv_header(std::ostream& out, std::string_view command, const PipelineConfig& cfg) {
  out << "# " << header_json(command, cfg).dump() << '\n';
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

Graph load_graph(const PipelineConfig& cfg) {
  if (cfg.graph.empty()) throw InputError("no graph given (--graph)");
  return load_edge_list_file(cfg.graph);
}

NcLidTable lid_table_if_needed(const Graph& g, const PipelineConfig& cfg, WalkVariant v) {
  if (v == WalkVariant::Node2Vec) return {};
  return nc_lid_all(g, cfg.alpha, cfg.threads);
}

Embedding obtain_embedding(const Graph& g, const PipelineConfig& cfg, const NcLidTable& table) {
  if (!cfg.embedding.empty()) {
    std::ifstream in(cfg.embedding);
    if (!in) throw InputError("cannot open " + cfg.embedding);
    return read_word2vec(in, &g);
  }
  const auto seed = cfg.seeds.front();
  return embed(g, table, cfg.walk_config(cfg.variant, cfg.p, cfg.q, seed), cfg.train_config(cfg.dim, seed),
               cfg.threads);
}

json nclid_summary(const NcLidTable& table) {
  const auto values = table.values();
  std::map<std::size_t, std::size_t> sizes;
  for (const auto& s : table.scores) ++sizes[s.nc_size];
  json dist = json::array();
  for (auto [size, count] : sizes) dist.push_back({{"nc_size", size}, {"count", count}});
  return json{{"mean", stats::mean(values)},
              {"max", *std::max_element(values.begin(), values.end())},
              {"min", *std::min_element(values.begin(), values.end())},
              {"nc_size_distribution", dist}};
}

std::vector<CentralityVector> all_centralities(const Graph& g, unsigned threads,
                                               std::vector<std::string>* failures = nullptr) {
  std::vector<CentralityVector> out;
  for (Metric m : kAllMetrics) {
    try {
      out.push_back(compute_centrality(g, m, threads));
    } catch (const NumericalError& e) {
      if (!failures) throw;
      failures->push_back(std::string(metric_name(m)) + ": " + e.what());
      out.push_back({m, {}});
    }
  }
  return out;
}

CorrelationMatrix correlate_columns(const Graph& g, const PipelineConfig& cfg, const NcLidTable& table,
                                    const std::vector<double>* f1, std::vector<std::string>& failures) {
  std::vector<std::string> names{"NC-LID"};
  std::vector<std::vector<double>> cols{table.values()};
  for (auto& c : all_centralities(g, cfg.threads, &failures)) {
    names.emplace_back(metric_name(c.metric));
    cols.push_back(std::move(c.values));
  }
  if (f1) {
    names.emplace_back("F1");
    cols.push_back(*f1);
  }
  return correlation_matrix(names, cols);
}

json mwu_json(const MwuReport& r) {
  return json{{"F1(H)", r.f1_high},         {"F1(L)", r.f1_low},          {"n_high", r.n_high},
              {"n_low", r.n_low},           {"U", r.test.u_statistic},    {"p", r.test.p_value},
              {"exact", r.test.exact},      {"ACC", r.test.accepted ? "yes" : "no"},
              {"PS(H)", r.test.ps_h},       {"PS(L)", r.test.ps_l},       {"P_e", r.test.p_e}};
}

void write_mwu_row(std::ostream& out, std::string_view name, const MwuReport& r) {
  out << "name,F1(H),F1(L),U,p,ACC,PS(H),PS(L)\n";
  out << name << ',' << fixed(r.f1_high, 3) << ',' << fixed(r.f1_low, 3) << ',' << fixed(r.test.u_statistic, 1)
      << ',' << fixed(r.test.p_value, 4) << ',' << (r.test.accepted ? "yes" : "no") << ','
      << fixed(r.test.ps_h, 3) << ',' << fixed(r.test.ps_l, 3) << '\n';
}

int cmd_stats(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  ReportSink sink(cfg, out, cfg.dataset_name() + "_stats.csv");
  csv_header(sink.stream(), "stats", cfg);
  sink.stream() << kStatsCsvHeader << '\n' << stats_csv_row(cfg.dataset_name(), compute_stats(g)) << '\n';
  return 0;
}

int cmd_nclid(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  const auto table = nc_lid_all(g, cfg.alpha, cfg.threads);
  ReportSink sink(cfg, out, cfg.dataset_name() + "_nclid.csv");
  csv_header(sink.stream(), "nclid", cfg);
  write_nc_lid_csv(g, table, sink.stream());
  auto summary = nclid_summary(table);
  summary["header"] = header_json("nclid", cfg);
  emit_summary(cfg, out, sink, cfg.dataset_name() + "_nclid_summary.json", summary);
  return 0;
}

int cmd_centrality(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  const auto metrics = all_centralities(g, cfg.threads);
  ReportSink sink(cfg, out, cfg.dataset_name() + "_centrality.csv");
  csv_header(sink.stream(), "centrality", cfg);
  write_centrality_csv(g, metrics, sink.stream());
  return 0;
}

int cmd_embed(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  const auto table = lid_table_if_needed(g, cfg, cfg.variant);
  const auto emb = obtain_embedding(g, cfg, table);
  std::ostringstream stem;
  stem << cfg.dataset_name() << '.' << variant_name(cfg.variant) << ".d" << cfg.dim << ".p" << cfg.p << ".q"
       << cfg.q << ".s" << cfg.seeds.front();
  ReportSink sink(cfg, out, stem.str() + ".emb");
  write_word2vec(emb, sink.stream());
  if (sink.to_file()) {
    ReportSink meta(cfg, out, stem.str() + ".json");
    meta.stream() << header_json("embed", cfg).dump(2) << '\n';
  }
  return 0;
}

int cmd_evaluate(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  const auto table = lid_table_if_needed(g, cfg, cfg.embedding.empty() ? cfg.variant : WalkVariant::Node2Vec);
  const auto emb = obtain_embedding(g, cfg, table);
  const auto r = evaluate_embedding(g, emb, cfg.threads);
  ReportSink sink(cfg, out, cfg.dataset_name() + "_link_scores.csv");
  csv_header(sink.stream(), "evaluate", cfg);
  write_link_scores_csv(g, r.per_node, sink.stream());
  const json summary{{"header", header_json("evaluate", cfg)},
                     {"links", g.link_count()},
                     {"macro_precision", r.macro_precision},
                     {"macro_recall", r.macro_recall},
                     {"macro_f1", r.macro_f1}};
  emit_summary(cfg, out, sink, cfg.dataset_name() + "_evaluate.json", summary);
  return 0;
}

int cmd_correlate(const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg);
  const auto table = nc_lid_all(g, cfg.alpha, cfg.threads);
  std::optional<std::vector<double>> f1;
  if (!cfg.embedding.empty()) {
    const auto emb = obtain_embedding(g, cfg, table);
    f1 = evaluate_embedding(g, emb, cfg.threads).per_node.f1;
  }
  std::vector<std::string> failures;
  const auto m = correlate_columns(g, cfg, table, f1 ? &*f1 : nullptr, failures);
  for (const auto& f : failures) err << "warning: " << f << '\n';
  ReportSink sink(cfg, out, cfg.dataset_name() + "_correlations.csv");
  csv_header(sink.stream(), "correlate", cfg);
  write_correlation_csv(m, sink.stream());
  return 0;
}

int cmd_mwu(const PipelineConfig& cfg, std::ostream& out) {
  const Graph g = load_graph(cfg);
  const auto table = nc_lid_all(g, cfg.alpha, cfg.threads);
  const auto emb = obtain_embedding(g, cfg, table);
  const auto r = evaluate_embedding(g, emb, cfg.threads);
  const auto report = mwu_report(table.values(), r.per_node.f1);
  ReportSink sink(cfg, out, cfg.dataset_name() + "_mwu.csv");
  csv_header(sink.stream(), "mwu", cfg);
  write_mwu_row(sink.stream(), cfg.dataset_name(), report);
  return 0;
}

int cmd_pipeline(PipelineConfig cfg, std::ostream& out, std::ostream& err) {
  if (cfg.out.empty()) cfg.out = "results";
  const Graph g = load_graph(cfg);
  const std::string name = cfg.dataset_name();
  const auto header = header_json("pipeline", cfg);

  const auto gstats = compute_stats(g);
  {
    ReportSink sink(cfg, out, name + "_stats.csv");
    csv_header(sink.stream(), "pipeline", cfg);
    sink.stream() << kStatsCsvHeader << '\n' << stats_csv_row(name, gstats) << '\n';
  }

  const auto table = nc_lid_all(g, cfg.alpha, cfg.threads);
  {
    ReportSink sink(cfg, out, name + "_nclid.csv");
    csv_header(sink.stream(), "pipeline", cfg);
    write_nc_lid_csv(g, table, sink.stream());
  }

  const auto sweep = run_sweep(g, table, cfg, [&](std::size_t done, std::size_t total) {
    if (done == total || done % 25 == 0) err << "[" << name << "] " << done << "/" << total << " runs\n";
  });
  {
    ReportSink sink(cfg, out, name + "_sweep.csv");
    csv_header(sink.stream(), "pipeline", cfg);
    sink.stream() << "variant,dim,p,q,seed,macro_f1\n";
    for (const auto& r : sweep.runs) {
      sink.stream() << variant_name(r.variant) << ',' << r.dim << ',' << r.p << ',' << r.q << ',' << r.seed << ','
                    << fixed(r.macro_f1, 6) << '\n';
    }
  }

  json best = json::array();
  for (const auto& b : sweep.best) {
    best.push_back({{"variant", variant_name(b.variant)},
                    {"dim", b.dim},
                    {"p", b.p},
                    {"q", b.q},
                    {"median_f1", b.median_f1},
                    {"median_seed", b.median_seed}});
  }
  json summary{{"header", header},
               {"stats", json{{"N", gstats.n},
                              {"L", gstats.l},
                              {"C", gstats.components},
                              {"F", gstats.largest_component_fraction},
                              {"avg_degree", gstats.avg_degree},
                              {"skewness", gstats.degree_skewness}}},
               {"nclid", nclid_summary(table)},
               {"best", best},
               {"improvement_percent", sweep.improvement_percent}};

  // Link-level analyses use the best plain node2vec embedding at its median seed.
  const auto plain = std::find_if(sweep.best.begin(), sweep.best.end(),
                                  [](const SweepPoint& b) { return b.variant == WalkVariant::Node2Vec; });
  if (plain != sweep.best.end()) {
    const auto emb = embed(g, table, cfg.walk_config(WalkVariant::Node2Vec, plain->p, plain->q, plain->median_seed),
                           cfg.train_config(plain->dim, plain->median_seed), cfg.threads);
    const auto r = evaluate_embedding(g, emb, cfg.threads);
    {
      ReportSink sink(cfg, out, name + "_link_scores.csv");
      csv_header(sink.stream(), "pipeline", cfg);
      write_link_scores_csv(g, r.per_node, sink.stream());
    }
    const auto mwu = mwu_report(table.values(), r.per_node.f1);
    summary["mwu"] = mwu_json(mwu);
    std::vector<std::string> failures;
    const auto m = correlate_columns(g, cfg, table, &r.per_node.f1, failures);
    for (const auto& f : failures) err << "warning: " << f << '\n';
    ReportSink sink(cfg, out, name + "_correlations.csv");
    csv_header(sink.stream(), "pipeline", cfg);
    write_correlation_csv(m, sink.stream());
  }
  {
    ReportSink sink(cfg, out, name + "_summary.json");
    sink.stream() << summary.dump(2) << '\n';
  }

  out << "variant,dim,p,q,median_f1\n";
  for (const auto& b : sweep.best) {
    out << variant_name(b.variant) << ',' << b.dim << ',' << b.p << ',' << b.q << ',' << fixed(b.median_f1, 3)
        << '\n';
  }
  out << "improvement_percent," << fixed(sweep.improvement_percent, 2) << '\n';
  return 0;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "graph") {
    graph = value;
  } else if (key == "embedding") {
    embedding = value;
  } else if (key == "name") {
    name = value;
  } else if (key == "out") {
    out = value;
  } else if (key == "variant") {
    variant = parse_variant(value);
  } else if (key == "variants") {
    variants.clear();
    for (auto v : split_list(value)) variants.push_back(parse_variant(v));
  } else if (key == "dim") {
    dim = parse_number<int>(key, value);
  } else if (key == "dims") {
    dims = parse_number_list<int>(key, value);
  } else if (key == "p") {
    p = parse_number<double>(key, value);
  } else if (key == "q") {
    q = parse_number<double>(key, value);
  } else if (key == "p_grid") {
    p_grid = parse_number_list<double>(key, value);
  } else if (key == "q_grid") {
    q_grid = parse_number_list<double>(key, value);
  } else if (key == "sweep_lid") {
    sweep_lid = parse_bool(key, value);
  } else if (key == "walks") {
    walks = parse_number<int>(key, value);
  } else if (key == "length") {
    length = parse_number<int>(key, value);
  } else if (key == "alpha") {
    alpha = parse_number<double>(key, value);
  } else if (key == "seed") {
    seeds = {parse_number<std::uint64_t>(key, value)};
  } else if (key == "seeds") {
    seeds = parse_number_list<std::uint64_t>(key, value);
  } else if (key == "window") {
    window = parse_number<int>(key, value);
  } else if (key == "negatives") {
    negatives = parse_number<int>(key, value);
  } else if (key == "epochs") {
    epochs = parse_number<int>(key, value);
  } else if (key == "lr") {
    lr = parse_number<double>(key, value);
  } else if (key == "threads") {
    threads = parse_number<unsigned>(key, value);
  } else if (key == "deterministic") {
    deterministic = parse_bool(key, value);
  } else {
    throw InputError("unknown config key '" + std::string(key) + "'");
  }
}

void PipelineConfig::validate() const {
  if (variants.empty()) throw InputError("variant list is empty");
  if (dims.empty()) throw InputError("dimension list is empty");
  if (p_grid.empty() || q_grid.empty()) throw InputError("p/q grid is empty");
  if (seeds.empty()) throw InputError("seed list is empty");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  for (double v : p_grid) walk_config(WalkVariant::Node2Vec, v, 1.0, 1).validate();
  for (double v : q_grid) walk_config(WalkVariant::Node2Vec, 1.0, v, 1).validate();
  walk_config(variant, p, q, 1).validate();
  for (int d : dims) train_config(d, 1).validate();
  train_config(dim, 1).validate();
}

std::string PipelineConfig::dataset_name() const {
  if (!name.empty()) return name;
  if (graph.empty()) return "graph";
  return std::filesystem::path(graph).stem().string();
}

WalkConfig PipelineConfig::walk_config(WalkVariant v, double p_base, double q_base, std::uint64_t seed) const {
  WalkConfig w;
  w.variant = v;
  w.base_num_walks = walks;
  w.base_walk_length = length;
  w.p_base = p_base;
  w.q_base = q_base;
  w.seed = seed;
  return w;
}

TrainConfig PipelineConfig::train_config(int dimension, std::uint64_t seed) const {
  TrainConfig t;
  t.dim = dimension;
  t.window = window;
  t.negatives = negatives;
  t.epochs = epochs;
  t.lr_initial = lr;
  t.seed = seed;
  t.deterministic = deterministic;
  t.threads = threads;
  return t;
}

std::string PipelineConfig::to_json() const {
  json variant_list = json::array();
  for (auto v : variants) variant_list.push_back(std::string(variant_name(v)));
  const json j{{"graph", graph},
               {"embedding", embedding},
               {"name", dataset_name()},
               {"out", out},
               {"variant", std::string(variant_name(variant))},
               {"variants", variant_list},
               {"dim", dim},
               {"dims", dims},
               {"p", p},
               {"q", q},
               {"p_grid", p_grid},
               {"q_grid", q_grid},
               {"sweep_lid", sweep_lid},
               {"walks", walks},
               {"length", length},
               {"alpha", alpha},
               {"seeds", seeds},
               {"window", window},
               {"negatives", negatives},
               {"epochs", epochs},
               {"lr", lr},
               {"threads", threads},
               {"deterministic", deterministic}};
  return j.dump();
}

void apply_config_file(PipelineConfig& cfg, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key=value");
    try {
      cfg.set(trim(s.substr(0, eq)), s.substr(eq + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(lineno, e.what());
    }
  }
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  apply_config_file(cfg, in);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InputError("median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

Embedding embed(const Graph& g, const NcLidTable& table, const WalkConfig& wcfg, const TrainConfig& tcfg,
                unsigned walk_threads) {
  LidContext lid;
  if (wcfg.variant != WalkVariant::Node2Vec) {
    if (table.scores.size() != g.node_count()) throw InputError("LID-elastic walks need an NC-LID table");
    lid.communities = table.communities;
  }
  const auto values = table.values();
  lid.nc_lid = values;
  const auto corpus = sample_corpus(g, wcfg, lid, walk_threads);
  auto emb = train(corpus, tcfg, g.node_count());
  emb.labels = g.labels();
  return emb;
}

namespace {

void add_runs(std::vector<SweepRun>& runs, WalkVariant v, const PipelineConfig& cfg,
              const std::vector<std::pair<double, double>>& pq) {
  for (int d : cfg.dims) {
    for (auto [p, q] : pq) {
      for (auto seed : cfg.seeds) runs.push_back({v, d, p, q, seed, 0.0});
    }
  }
}

// Trains and scores runs[first, end). Deterministic training is single-threaded
// per run, so runs are the unit of parallelism; hogwild runs use the threads
// themselves.
void execute_runs(std::vector<SweepRun>& runs, std::size_t first, const Graph& g, const NcLidTable& table,
                  const PipelineConfig& cfg, const std::function<void(std::size_t, std::size_t)>& progress) {
  const unsigned job_threads = cfg.deterministic ? cfg.threads : 1;
  const unsigned inner_threads = cfg.deterministic ? 1 : cfg.threads;
  std::atomic<std::size_t> done{first};
  std::mutex progress_mutex;
  parallel_for(runs.size() - first, job_threads, [&](std::size_t i) {
    auto& run = runs[first + i];
    auto tcfg = cfg.train_config(run.dim, run.seed);
    tcfg.threads = inner_threads;
    const auto emb = embed(g, table, cfg.walk_config(run.variant, run.p, run.q, run.seed), tcfg, 1);
    run.macro_f1 = evaluate_embedding(g, emb, 1).macro_f1;
    const std::size_t finished = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(finished, runs.size());
    }
  });
}

const SweepPoint* best_point(const std::vector<SweepPoint>& points, WalkVariant v) {
  const SweepPoint* best = nullptr;
  for (const auto& pt : points) {
    if (pt.variant == v && (!best || pt.median_f1 > best->median_f1)) best = &pt;
  }
  return best;
}

}  // namespace

SweepReport run_sweep(const Graph& g, const NcLidTable& table, const PipelineConfig& cfg,
                      const std::function<void(std::size_t, std::size_t)>& progress) {
  cfg.validate();
  std::vector<std::pair<double, double>> grid;
  for (double p : cfg.p_grid) {
    for (double q : cfg.q_grid) grid.emplace_back(p, q);
  }
  const auto has = [&](WalkVariant v) {
    return std::find(cfg.variants.begin(), cfg.variants.end(), v) != cfg.variants.end();
  };

  // Plain node2vec is tuned over the grid first; without sweep_lid the lid
  // variants then run at the base p = q = 1 and at the tuned (p, q).
  SweepReport report;
  for (WalkVariant v : cfg.variants) {
    if (v == WalkVariant::Node2Vec || cfg.sweep_lid) add_runs(report.runs, v, cfg, grid);
  }
  execute_runs(report.runs, 0, g, table, cfg, progress);

  const std::size_t per_point = cfg.seeds.size();
  const auto summarize = [&](std::size_t from) {
    for (std::size_t i = from; i < report.runs.size(); i += per_point) {
      const auto& first = report.runs[i];
      std::vector<std::pair<double, std::uint64_t>> by_f1;
      std::vector<double> f1;
      for (std::size_t j = i; j < i + per_point; ++j) {
        by_f1.emplace_back(report.runs[j].macro_f1, report.runs[j].seed);
        f1.push_back(report.runs[j].macro_f1);
      }
      std::sort(by_f1.begin(), by_f1.end());
      report.points.push_back(
          {first.variant, first.dim, first.p, first.q, median(f1), by_f1[(per_point - 1) / 2].second});
    }
  };
  summarize(0);

  if (!cfg.sweep_lid) {
    std::vector<std::pair<double, double>> settings{{1.0, 1.0}};
    if (const auto* plain = best_point(report.points, WalkVariant::Node2Vec)) {
      if (plain->p != 1.0 || plain->q != 1.0) settings.emplace_back(plain->p, plain->q);
    }
    const std::size_t first = report.runs.size();
    for (WalkVariant v : cfg.variants) {
      if (v != WalkVariant::Node2Vec) add_runs(report.runs, v, cfg, settings);
    }
    execute_runs(report.runs, first, g, table, cfg, progress);
    summarize(first);
  }

  for (WalkVariant v : cfg.variants) report.best.push_back(*best_point(report.points, v));
  double plain = -1.0, lid = -1.0;
  for (const auto& b : report.best) {
    if (b.variant == WalkVariant::Node2Vec) {
      plain = b.median_f1;
    } else {
      lid = std::max(lid, b.median_f1);
    }
  }
  if (has(WalkVariant::Node2Vec) && plain > 0.0 && lid >= 0.0) {
    report.improvement_percent = 100.0 * (lid - plain) / plain;
  }
  return report;
}

MwuReport mwu_report(std::span<const double> nc_lid, std::span<const double> f1) {
  if (nc_lid.size() != f1.size()) throw InputError("NC-LID and F1 vectors differ in length");
  const auto split = stats::split_by_mean(nc_lid);
  if (split.high.empty() || split.low.empty()) {
    throw NumericalError("NC-LID split leaves an empty group");
  }
  std::vector<double> high, low;
  for (auto i : split.high) high.push_back(f1[i]);
  for (auto i : split.low) low.push_back(f1[i]);
  MwuReport r;
  r.f1_high = stats::mean(high);
  r.f1_low = stats::mean(low);
  r.n_high = high.size();
  r.n_low = low.size();
  r.test = stats::mann_whitney_u(high, low);
  return r;
}

CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                     const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size()) throw InputError("column names and columns differ in count");
  CorrelationMatrix m;
  m.names = names;
  const std::size_t k = columns.size();
  m.rho.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      try {
        const double r = stats::spearman(columns[i], columns[j]);
        m.rho[i][j] = m.rho[j][i] = r;
      } catch (const NumericalError&) {
      } catch (const InputError&) {
      }
    }
  }
  return m;
}

void write_correlation_csv(const CorrelationMatrix& m, std::ostream& out) {
  out << "metric";
  for (const auto& n : m.names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < m.names.size(); ++i) {
    out << m.names[i];
    for (const auto& r : m.rho[i]) out << ',' << (r ? fixed(*r, 3) : "NA");
    out << '\n';
  }
}

int run_command(std::string_view command, const PipelineConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (command == "stats") return cmd_stats(cfg, out);
    if (command == "nclid") return cmd_nclid(cfg, out);
    if (command == "centrality") return cmd_centrality(cfg, out);
    if (command == "embed") return cmd_embed(cfg, out);
    if (command == "evaluate") return cmd_evaluate(cfg, out);
    if (command == "correlate") return cmd_correlate(cfg, out, err);
    if (command == "mwu") return cmd_mwu(cfg, out);
    if (command == "pipeline") return cmd_pipeline(cfg, out, err);
    throw InputError("unknown command '" + std::string(command) + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nclid
