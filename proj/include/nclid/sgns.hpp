#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nclid/walks.hpp"

namespace nclid {

// Node vectors produced by skip-gram training. Row i belongs to node id i.
struct Embedding {
  std::size_t dim = 0;
  std::vector<std::string> labels;
  std::vector<float> input;   // published vectors, N x dim
  std::vector<float> output;  // context weights, N x dim; empty once loaded from disk
  std::vector<char> untrained;  // 1 for nodes that never appeared in the corpus

  std::size_t size() const noexcept { return dim == 0 ? 0 : input.size() / dim; }
  std::span<const float> row(std::size_t i) const { return {input.data() + i * dim, dim}; }
  std::span<float> row(std::size_t i) { return {input.data() + i * dim, dim}; }
};

struct TrainConfig {
  int dim = 100;
  int window = 10;
  int negatives = 5;
  int epochs = 5;
  double lr_initial = 0.025;
  std::uint64_t seed = 1;
  // Sequential and reproducible. When false, training is hogwild-parallel
  // over `threads` workers with a lookup-table sigmoid.
  bool deterministic = true;
  unsigned threads = 1;
  // Deterministic mode only: called after every epoch with the current state.
  std::function<void(int epoch, const Embedding&)> on_epoch_end;

  void validate() const;
};

/// Trains skip-gram with negative sampling over the walk corpus. Negatives
/// come from the corpus unigram distribution raised to 0.75; the learning rate
/// decays linearly to lr_initial * 1e-4 over the training run; each center
/// uses a window shrunk uniformly to [1, window].
Embedding train(const WalkCorpus& corpus, const TrainConfig& cfg, std::size_t vocab_size);

// Loss and gradients for one positive (center, context) pair plus negatives:
// loss = -log sigma(u_o . v) - sum_n log sigma(-u_n . v).
struct SgnsGradient {
  double loss = 0.0;
  std::vector<double> d_center;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives);

double sigmoid(double x);

/// Mean SGNS loss over every (center, context) pair of the corpus with a full
/// window, negatives drawn from a fixed stream seeded by `seed`.
double corpus_loss(const Embedding& emb, const WalkCorpus& corpus, int window, int negatives,
                   std::uint64_t seed);

double cosine_similarity(std::span<const float> a, std::span<const float> b);

/// word2vec text format: "N dim" header, then "label v1 ... vdim" per row
/// with 6 significant digits.
void write_word2vec(const Embedding& emb, std::ostream& out);

/// Reads the word2vec text format. With a graph, rows are reordered to the
/// graph's node ids and every graph node must be present.
Embedding read_word2vec(std::istream& in, const Graph* g = nullptr);

}  // namespace nclid
