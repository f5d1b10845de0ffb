#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nclid/community.hpp"
#include "nclid/graph.hpp"

namespace nclid {

enum class WalkVariant {
  Node2Vec,  // fixed walk count, length, p and q
  LidRw,     // per-node walk count and length from NC-LID
  LidRwpq,   // LidRw plus per-pair p and q adjustments
};

std::string_view variant_name(WalkVariant v);  // n2v, lid-rw, lid-rwpq
WalkVariant parse_variant(std::string_view name);

struct WalkConfig {
  WalkVariant variant = WalkVariant::Node2Vec;
  int base_num_walks = 10;    // B
  int base_walk_length = 80;  // W, in nodes
  double p_base = 1.0;
  double q_base = 1.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct Walk {
  NodeId origin = 0;
  std::vector<NodeId> nodes;  // origin first
};

struct WalkCorpus {
  std::vector<Walk> walks;

  std::size_t token_count() const;
};

/// Per-node NC-LID values and community memberships that drive the
/// LID-elastic variants. Both spans are indexed by node id.
struct LidContext {
  std::span<const double> nc_lid;
  std::span<const NaturalCommunity> communities;
};

/// floor((1 + nc_lid) * B)
int nrw(double nc_lid, int base_num_walks);

/// floor(W / (1 + nc_lid)), at least 1
int lrw(double nc_lid, int base_walk_length);

/// Unnormalized weights for stepping from `cur` to each of its neighbors, in
/// adjacency order. `prev` is empty on the first step (uniform weights).
/// The context is only consulted for LidRwpq.
std::vector<double> transition_weights(const Graph& g, std::optional<NodeId> prev, NodeId cur,
                                       const WalkConfig& cfg, const LidContext& lid = {});

/// Samples the corpus. Walks are grouped by origin in node order; each walk's
/// random stream depends only on (cfg.seed, origin, walk index), so the output
/// is identical for every thread count. Requires a populated LidContext for the
/// LID-elastic variants.
WalkCorpus sample_corpus(const Graph& g, const WalkConfig& cfg, const LidContext& lid = {},
                         unsigned threads = 1);

/// One walk per line, space-separated node labels.
void write_corpus(const Graph& g, const WalkCorpus& corpus, std::ostream& out);

/// Seed for the random stream of one (seed, origin, walk index) triple.
std::uint64_t walk_stream_seed(std::uint64_t seed, NodeId origin, std::uint64_t walk_index);

}  // namespace nclid
