#include "nclid/sgns.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "nclid/error.hpp"

namespace nclid {

void TrainConfig::validate() const {
  if (dim < 1) throw InputError("embedding dimension must be >= 1");
  if (window < 1) throw InputError("window must be >= 1");
  if (negatives < 0) throw InputError("negatives must be >= 0");
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (!(lr_initial > 0.0)) throw InputError("learning rate must be positive");
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = center.size();
  if (context.size() != d) throw InputError("sgns_gradient: dimension mismatch");
  SgnsGradient g;
  g.d_center.assign(d, 0.0);
  g.d_context.assign(d, 0.0);
  auto dot = [&](std::span<const double> u) {
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) s += u[i] * center[i];
    return s;
  };
  // positive: d/dx[-log sigma(x)] = sigma(x) - 1
  const double pos = dot(context);
  const double gp = sigmoid(pos) - 1.0;
  g.loss = -std::log(sigmoid(pos));
  for (std::size_t i = 0; i < d; ++i) {
    g.d_center[i] += gp * context[i];
    g.d_context[i] = gp * center[i];
  }
  // negative: d/dx[-log sigma(-x)] = sigma(x)
  for (auto u : negatives) {
    if (u.size() != d) throw InputError("sgns_gradient: dimension mismatch");
    const double x = dot(u);
    const double gn = sigmoid(x);
    g.loss -= std::log(sigmoid(-x));
    std::vector<double> du(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.d_center[i] += gn * u[i];
      du[i] = gn * center[i];
    }
    g.d_negatives.push_back(std::move(du));
  }
  return g;
}

namespace {

constexpr std::size_t kNegativeTableSize = 1'000'000;
constexpr double kMaxExp = 6.0;
constexpr std::size_t kSigmoidTableSize = 512;

std::vector<std::uint32_t> negative_table(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += std::pow(static_cast<double>(c), 0.75);
  std::vector<std::uint32_t> table;
  if (total == 0.0) return table;
  table.resize(kNegativeTableSize);
  std::size_t word = 0;
  while (counts[word] == 0) ++word;
  double cumulative = std::pow(static_cast<double>(counts[word]), 0.75) / total;
  for (std::size_t i = 0; i < kNegativeTableSize; ++i) {
    table[i] = static_cast<std::uint32_t>(word);
    if (static_cast<double>(i + 1) / kNegativeTableSize > cumulative) {
      std::size_t next = word + 1;
      while (next < counts.size() && counts[next] == 0) ++next;
      if (next < counts.size()) {
        word = next;
        cumulative += std::pow(static_cast<double>(counts[word]), 0.75) / total;
      }
    }
  }
  return table;
}

// Draws from the negative table. When the vocabulary is small the table is a
// few long runs, so only the run boundaries are kept; lookups then stay in
// cache and return the same node as indexing the full table.
class NegativeSampler {
 public:
  explicit NegativeSampler(std::vector<std::uint32_t> table) {
    for (std::uint32_t i = 0; i < table.size(); ++i) {
      if (i == 0 || table[i] != table[i - 1]) {
        run_start_.push_back(i);
        run_word_.push_back(table[i]);
      }
    }
    if (run_start_.size() > kMaxRuns) {
      table_ = std::move(table);
      run_start_.clear();
      run_word_.clear();
    }
  }

  std::uint32_t draw(std::uint64_t r) const {
    const auto idx = static_cast<std::uint32_t>(((r >> 32) * kNegativeTableSize) >> 32);
    if (!table_.empty()) return table_[idx];
    const auto it = std::upper_bound(run_start_.begin(), run_start_.end(), idx);
    return run_word_[static_cast<std::size_t>(it - run_start_.begin()) - 1];
  }

 private:
  static constexpr std::size_t kMaxRuns = 4096;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> run_start_;
  std::vector<std::uint32_t> run_word_;
};

struct SigmoidTable {
  SigmoidTable() {
    // Each entry holds the value at the centre of its bin, so truncating the
    // index does not bias the lookup downward.
    for (std::size_t i = 0; i < kSigmoidTableSize; ++i) {
      const double x = ((static_cast<double>(i) + 0.5) / kSigmoidTableSize * 2.0 - 1.0) * kMaxExp;
      values[i] = static_cast<float>(sigmoid(x));
    }
  }
  std::array<float, kSigmoidTableSize> values{};
};

const SigmoidTable& sigmoid_table() {
  static const SigmoidTable table;
  return table;
}

// Sixteen independent partial sums, so the loop vectorizes without
// reassociating floating-point additions behind the compiler's back.
float dot(const float* __restrict a, const float* __restrict b, std::size_t d) {
  float acc[16] = {};
  std::size_t t = 0;
  for (; t + 16 <= d; t += 16) {
    for (std::size_t k = 0; k < 16; ++k) acc[k] += a[t + k] * b[t + k];
  }
  for (std::size_t k = 0; t < d; ++t, ++k) acc[k] += a[t] * b[t];
  for (std::size_t h = 8; h > 0; h /= 2) {
    for (std::size_t k = 0; k < h; ++k) acc[k] += acc[k + h];
  }
  return acc[0];
}

// Shared state of one training run. Matrices are updated in place; in hogwild
// mode several workers write to them without synchronization.
class Trainer {
 public:
  Trainer(const WalkCorpus& corpus, const TrainConfig& cfg, Embedding& emb,
          const NegativeSampler& negatives, std::uint64_t total_tokens)
      : corpus_(corpus), cfg_(cfg), emb_(emb), negatives_(negatives), total_tokens_(total_tokens) {}

  // Trains on walks [begin, end) for one epoch. `processed` counts tokens
  // seen so far across all epochs (per worker in hogwild mode, scaled).
  void run_epoch(std::size_t begin, std::size_t end, std::mt19937_64& rng, std::uint64_t& processed,
                 std::uint64_t token_scale) {
    const std::size_t d = emb_.dim;
    std::vector<float> grad(d);
    const double schedule = static_cast<double>(total_tokens_) * cfg_.epochs + 1.0;
    for (std::size_t w = begin; w < end; ++w) {
      const auto& nodes = corpus_.walks[w].nodes;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double progress = static_cast<double>(processed * token_scale) / schedule;
        const float lr = static_cast<float>(cfg_.lr_initial * std::max(1e-4, 1.0 - progress));
        ++processed;
        const std::size_t shrink = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(cfg_.window));
        const std::size_t reach = static_cast<std::size_t>(cfg_.window) - shrink;
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(nodes.size() - 1, i + reach);
        float* center = emb_.input.data() + static_cast<std::size_t>(nodes[i]) * d;
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          std::fill(grad.begin(), grad.end(), 0.0f);
          update(center, nodes[j], 1.0f, lr, grad.data());
          for (int k = 0; k < cfg_.negatives; ++k) {
            const std::uint32_t neg = negatives_.draw(rng());
            if (neg == nodes[j]) continue;
            update(center, neg, 0.0f, lr, grad.data());
          }
          for (std::size_t t = 0; t < d; ++t) center[t] += grad[t];
        }
      }
    }
  }

 private:
  void update(const float* __restrict center, NodeId target, float label, float lr, float* __restrict grad) {
    const std::size_t d = emb_.dim;
    float* __restrict out = emb_.output.data() + static_cast<std::size_t>(target) * d;
    const float f = dot(center, out, d);
    float g;
    if (cfg_.deterministic) {
      g = (label - static_cast<float>(sigmoid(f))) * lr;
    } else if (f > kMaxExp) {
      g = (label - 1.0f) * lr;
    } else if (f < -kMaxExp) {
      g = label * lr;
    } else {
      const auto idx = static_cast<std::size_t>((f + kMaxExp) * (kSigmoidTableSize / kMaxExp / 2.0));
      g = (label - sigmoid_table().values[std::min(idx, kSigmoidTableSize - 1)]) * lr;
    }
    for (std::size_t t = 0; t < d; ++t) {
      grad[t] += g * out[t];
      out[t] += g * center[t];
    }
  }

  const WalkCorpus& corpus_;
  const TrainConfig& cfg_;
  Embedding& emb_;
  const NegativeSampler& negatives_;
  std::uint64_t total_tokens_;
};

}  // namespace

Embedding train(const WalkCorpus& corpus, const TrainConfig& cfg, std::size_t vocab_size) {
  cfg.validate();
  if (corpus.walks.empty()) throw InputError("cannot train on an empty corpus");
  std::vector<std::uint64_t> counts(vocab_size, 0);
  std::uint64_t total_tokens = 0;
  for (const auto& w : corpus.walks) {
    for (NodeId v : w.nodes) {
      if (v >= vocab_size) throw InputError("corpus node id " + std::to_string(v) + " outside vocabulary");
      ++counts[v];
      ++total_tokens;
    }
  }

  Embedding emb;
  emb.dim = static_cast<std::size_t>(cfg.dim);
  emb.labels.resize(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) emb.labels[i] = std::to_string(i);
  emb.input.resize(vocab_size * emb.dim);
  emb.output.assign(vocab_size * emb.dim, 0.0f);
  emb.untrained.resize(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) emb.untrained[i] = counts[i] == 0;

  std::mt19937_64 init_rng(cfg.seed);
  const double half_width = 0.5 / static_cast<double>(emb.dim);
  for (float& x : emb.input) {
    const double u = static_cast<double>(init_rng() >> 11) * 0x1.0p-53;
    x = static_cast<float>((2.0 * u - 1.0) * half_width);
  }

  const NegativeSampler negatives(negative_table(counts));
  Trainer trainer(corpus, cfg, emb, negatives, total_tokens);
  const std::size_t walks = corpus.walks.size();

  if (cfg.deterministic) {
    std::mt19937_64 rng(cfg.seed ^ 0x5bd1e9955bd1e995ULL);
    std::uint64_t processed = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
      trainer.run_epoch(0, walks, rng, processed, 1);
      if (cfg.on_epoch_end) cfg.on_epoch_end(epoch, emb);
    }
    return emb;
  }

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads == 0 ? std::thread::hardware_concurrency()
                                                                            : cfg.threads,
                                                           static_cast<unsigned>(walks)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      // Worker 0 shares the deterministic stream, so a one-worker run differs
      // from deterministic mode only in the sigmoid.
      std::mt19937_64 rng((cfg.seed ^ 0x5bd1e9955bd1e995ULL) + 0x9e3779b97f4a7c15ULL * t);
      std::uint64_t processed = 0;
      const std::size_t begin = walks * t / workers;
      const std::size_t end = walks * (t + 1) / workers;
      for (int epoch = 0; epoch < cfg.epochs; ++epoch) trainer.run_epoch(begin, end, rng, processed, workers);
    });
  }
  for (auto& th : pool) th.join();
  return emb;
}

double corpus_loss(const Embedding& emb, const WalkCorpus& corpus, int window, int negatives,
                   std::uint64_t seed) {
  if (emb.output.size() != emb.input.size()) throw InputError("corpus_loss needs context weights");
  std::mt19937_64 rng(seed);
  const std::size_t n = emb.size();
  const std::size_t d = emb.dim;
  auto dot = [&](NodeId a, NodeId b) {
    double s = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
      s += static_cast<double>(emb.input[a * d + t]) * static_cast<double>(emb.output[b * d + t]);
    }
    return s;
  };
  double total = 0.0;
  std::size_t pairs = 0;
  for (const auto& w : corpus.walks) {
    const auto& nodes = w.nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::size_t reach = static_cast<std::size_t>(window);
      const std::size_t lo = i >= reach ? i - reach : 0;
      const std::size_t hi = std::min(nodes.size() - 1, i + reach);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        total -= std::log(sigmoid(dot(nodes[i], nodes[j])));
        for (int k = 0; k < negatives; ++k) {
          const auto neg = static_cast<NodeId>(rng() % n);
          total -= std::log(sigmoid(-dot(nodes[i], neg)));
        }
        ++pairs;
      }
    }
  }
  return pairs ? total / static_cast<double>(pairs) : 0.0;
}

double cosine_similarity(std::span<const float> a, std::span<const float> b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

void write_word2vec(const Embedding& emb, std::ostream& out) {
  out << emb.size() << ' ' << emb.dim << '\n';
  const auto old_precision = out.precision(6);
  for (std::size_t i = 0; i < emb.size(); ++i) {
    out << emb.labels[i];
    for (float x : emb.row(i)) out << ' ' << x;
    out << '\n';
  }
  out.precision(old_precision);
}

Embedding read_word2vec(std::istream& in, const Graph* g) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError(line_no, "missing embedding header");
  std::istringstream header(line);
  std::size_t rows = 0, dim = 0;
  if (!(header >> rows >> dim) || dim == 0) throw ParseError(line_no, "header must be 'N dim'");

  Embedding emb;
  emb.dim = dim;
  emb.labels.reserve(rows);
  emb.input.reserve(rows * dim);
  while (emb.labels.size() < rows && std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string label;
    row >> label;
    for (std::size_t k = 0; k < dim; ++k) {
      float x;
      if (!(row >> x)) throw ParseError(line_no, "expected " + std::to_string(dim) + " values");
      if (!std::isfinite(x)) throw ParseError(line_no, "non-finite embedding value");
      emb.input.push_back(x);
    }
    emb.labels.push_back(std::move(label));
  }
  if (emb.labels.size() != rows) throw ParseError(line_no, "fewer rows than the header declares");
  emb.untrained.assign(rows, 0);
  if (!g) return emb;

  if (rows != g->node_count()) {
    throw InputError("embedding has " + std::to_string(rows) + " rows but the graph has " +
                     std::to_string(g->node_count()) + " nodes");
  }
  Embedding ordered;
  ordered.dim = dim;
  ordered.labels = g->labels();
  ordered.input.assign(rows * dim, 0.0f);
  ordered.untrained.assign(rows, 0);
  std::vector<char> seen(rows, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto id = g->find(emb.labels[i]);
    if (!id) throw InputError("embedding label '" + emb.labels[i] + "' is not a graph node");
    if (seen[*id]++) throw InputError("embedding label '" + emb.labels[i] + "' repeated");
    std::copy_n(emb.input.begin() + static_cast<std::ptrdiff_t>(i * dim), dim,
                ordered.input.begin() + static_cast<std::ptrdiff_t>(*id * dim));
  }
  return ordered;
}

}  // namespace nclid
