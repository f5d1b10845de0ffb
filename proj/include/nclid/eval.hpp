#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "nclid/graph.hpp"
#include "nclid/sgns.hpp"

namespace nclid {

/// The `l` closest vector pairs by Euclidean distance as (u, v) with u < v,
/// sorted by (distance, u, v). Ties at the cutoff go to the lexicographically
/// smaller pair. Row blocks are scanned in parallel with bounded per-worker
/// heaps; the result does not depend on the thread count.
std::vector<Link> reconstruct(const Embedding& emb, std::size_t l, unsigned threads = 1);

struct LinkScores {
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
};

/// Per-node link precision, recall and F1 of `reconstructed` against g.
/// P with no reconstructed incident links is 0; R of an isolated original
/// node is 0; F1 is 0 when P + R is 0.
LinkScores link_scores(const Graph& g, const std::vector<Link>& reconstructed);

struct ReconstructionResult {
  std::vector<Link> reconstructed_links;
  LinkScores per_node;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
};

/// Reconstructs L(g) links from the embedding and scores them.
ReconstructionResult evaluate_embedding(const Graph& g, const Embedding& emb, unsigned threads = 1);

inline constexpr const char* kLinkScoresCsvHeader = "node_label,P,R,F1";
void write_link_scores_csv(const Graph& g, const LinkScores& s, std::ostream& out);

struct MleLid {
  double value = 0.0;
  bool infinite = false;  // every one of the k distances was equal
};

/// Maximum-likelihood LID estimate from the k nearest Euclidean distances of
/// `node`'s vector: -(1/k sum ln(x_i / x_k))^-1. A zero distance (duplicate
/// vector) throws NumericalError.
MleLid mle_lid(const Embedding& emb, std::size_t node, std::size_t k);

}  // namespace nclid
