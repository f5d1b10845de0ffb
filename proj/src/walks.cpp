#include "nclid/walks.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <string>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

std::string_view variant_name(WalkVariant v) {
  switch (v) {
    case WalkVariant::Node2Vec: return "n2v";
    case WalkVariant::LidRw: return "lid-rw";
    case WalkVariant::LidRwpq: return "lid-rwpq";
  }
  return "?";
}

WalkVariant parse_variant(std::string_view name) {
  if (name == "n2v" || name == "node2vec") return WalkVariant::Node2Vec;
  if (name == "lid-rw" || name == "lid-n2v-rw") return WalkVariant::LidRw;
  if (name == "lid-rwpq" || name == "lid-n2v-rwpq") return WalkVariant::LidRwpq;
  throw InputError("unknown walk variant '" + std::string(name) + "'");
}

void WalkConfig::validate() const {
  if (base_num_walks < 1) throw InputError("number of walks must be >= 1");
  if (base_walk_length < 2) throw InputError("walk length must be >= 2");
  if (!(p_base > 0.0)) throw InputError("p must be positive");
  if (!(q_base > 0.0)) throw InputError("q must be positive");
}

std::size_t WalkCorpus::token_count() const {
  std::size_t n = 0;
  for (const auto& w : walks) n += w.nodes.size();
  return n;
}

int nrw(double nc_lid, int base_num_walks) {
  return static_cast<int>(std::floor((1.0 + nc_lid) * base_num_walks));
}

int lrw(double nc_lid, int base_walk_length) {
  return std::max(1, static_cast<int>(std::floor(base_walk_length / (1.0 + nc_lid))));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void fill_weights(const Graph& g, std::optional<NodeId> prev, NodeId cur, const WalkConfig& cfg,
                  const LidContext& lid, std::vector<double>& out) {
  const auto adj = g.neighbors(cur);
  out.assign(adj.size(), 1.0);
  if (!prev) return;
  const NodeId t = *prev;
  const bool elastic = cfg.variant == WalkVariant::LidRwpq;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    const NodeId x = adj[i];
    if (x == t) {
      double p = cfg.p_base;
      if (elastic && !lid.communities[x].contains(cur)) p += lid.nc_lid[x];
      out[i] = 1.0 / p;
    } else if (g.has_link(t, x)) {
      out[i] = 1.0;
    } else {
      double q = cfg.q_base;
      if (elastic && !lid.communities[cur].contains(x)) q += lid.nc_lid[cur];
      out[i] = 1.0 / q;
    }
  }
}

void check_context(const Graph& g, const WalkConfig& cfg, const LidContext& lid) {
  if (cfg.variant == WalkVariant::Node2Vec) return;
  if (lid.nc_lid.size() != g.node_count() ||
      (cfg.variant == WalkVariant::LidRwpq && lid.communities.size() != g.node_count())) {
    throw InputError("LID-elastic walks need NC-LID values and communities for every node");
  }
}

}  // namespace

std::uint64_t walk_stream_seed(std::uint64_t seed, NodeId origin, std::uint64_t walk_index) {
  return splitmix64(splitmix64(splitmix64(seed) ^ origin) ^ walk_index);
}

std::vector<double> transition_weights(const Graph& g, std::optional<NodeId> prev, NodeId cur,
                                       const WalkConfig& cfg, const LidContext& lid) {
  if (!g.contains(cur) || (prev && !g.contains(*prev))) throw InputError("node id out of range");
  if (prev && !g.has_link(*prev, cur)) throw InputError("previous node is not adjacent to the current node");
  check_context(g, cfg, lid);
  std::vector<double> w;
  fill_weights(g, prev, cur, cfg, lid, w);
  return w;
}

WalkCorpus sample_corpus(const Graph& g, const WalkConfig& cfg, const LidContext& lid, unsigned threads) {
  cfg.validate();
  check_context(g, cfg, lid);
  const std::size_t n = g.node_count();

  std::vector<int> count(n), length(n);
  std::vector<std::size_t> first(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (cfg.variant == WalkVariant::Node2Vec) {
      count[v] = cfg.base_num_walks;
      length[v] = cfg.base_walk_length;
    } else {
      count[v] = nrw(lid.nc_lid[v], cfg.base_num_walks);
      length[v] = lrw(lid.nc_lid[v], cfg.base_walk_length);
    }
    first[v + 1] = first[v] + static_cast<std::size_t>(count[v]);
  }

  std::vector<Walk> slots(first[n]);
  parallel_for(n, threads, [&](std::size_t v) {
    std::vector<double> weights;
    for (int i = 0; i < count[v]; ++i) {
      std::mt19937_64 rng(walk_stream_seed(cfg.seed, static_cast<NodeId>(v), static_cast<std::uint64_t>(i)));
      Walk& walk = slots[first[v] + static_cast<std::size_t>(i)];
      walk.origin = static_cast<NodeId>(v);
      walk.nodes.reserve(static_cast<std::size_t>(length[v]));
      walk.nodes.push_back(static_cast<NodeId>(v));
      std::optional<NodeId> prev;
      while (walk.nodes.size() < static_cast<std::size_t>(length[v])) {
        const NodeId cur = walk.nodes.back();
        const auto adj = g.neighbors(cur);
        if (adj.empty()) break;
        fill_weights(g, prev, cur, cfg, lid, weights);
        double total = 0.0;
        for (double w : weights) total += w;
        double r = unit_interval(rng) * total;
        std::size_t pick = 0;
        while (pick + 1 < weights.size() && r >= weights[pick]) {
          r -= weights[pick];
          ++pick;
        }
        prev = cur;
        walk.nodes.push_back(adj[pick]);
      }
    }
  });

  WalkCorpus corpus;
  corpus.walks.reserve(slots.size());
  for (auto& w : slots) {
    const bool truncated = w.nodes.size() < static_cast<std::size_t>(length[w.origin]);
    if (truncated && w.nodes.size() < 2) continue;
    corpus.walks.push_back(std::move(w));
  }
  return corpus;
}

void write_corpus(const Graph& g, const WalkCorpus& corpus, std::ostream& out) {
  for (const auto& w : corpus.walks) {
    for (std::size_t i = 0; i < w.nodes.size(); ++i) {
      if (i) out << ' ';
      out << g.label(w.nodes[i]);
    }
    out << '\n';
  }
}

}  // namespace nclid
