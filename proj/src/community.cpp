#include "nclid/community.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

bool NaturalCommunity::contains(NodeId v) const {
  return std::binary_search(members.begin(), members.end(), v);
}

namespace {

double fitness_value(std::int64_t k_in, std::int64_t total_degree, double alpha) {
  if (total_degree == 0) return 0.0;
  if (alpha == 1.0) return static_cast<double>(k_in) / static_cast<double>(total_degree);
  return static_cast<double>(k_in) / std::pow(static_cast<double>(total_degree), alpha);
}

// (k_in, k_in + k_out) of a community state.
struct FitnessTerms {
  std::int64_t k_in = 0;
  std::int64_t total = 0;
};

// Three-way comparison of two fitness values. Exact for alpha == 1.
int compare_fitness(FitnessTerms a, FitnessTerms b, double alpha) {
  if (alpha == 1.0) {
    // a.k_in / a.total vs b.k_in / b.total, with x/0 treated as 0
    const std::int64_t an = a.total == 0 ? 0 : a.k_in, ad = a.total == 0 ? 1 : a.total;
    const std::int64_t bn = b.total == 0 ? 0 : b.k_in, bd = b.total == 0 ? 1 : b.total;
    const std::int64_t lhs = an * bd, rhs = bn * ad;
    return (lhs > rhs) - (lhs < rhs);
  }
  const double fa = fitness_value(a.k_in, a.total, alpha);
  const double fb = fitness_value(b.k_in, b.total, alpha);
  const double tol = 1e-12 * std::max({1.0, std::abs(fa), std::abs(fb)});
  if (std::abs(fa - fb) <= tol) return 0;
  return fa > fb ? 1 : -1;
}

// Grows one community. links_in[x] is the number of neighbors of x inside C;
// it is maintained for every node adjacent to C.
class CommunityBuilder {
 public:
  CommunityBuilder(const Graph& g, double alpha)
      : g_(g), alpha_(alpha), in_c_(g.node_count(), 0), links_in_(g.node_count(), 0) {}

  NaturalCommunity grow(NodeId seed) {
    reset();
    add(seed);
    const std::size_t max_rounds = 4 * g_.node_count() + 16;
    std::vector<NodeId> border, best;
    for (std::size_t round = 0; round < max_rounds; ++round) {
      collect_border(border);
      if (border.empty()) break;

      best.clear();
      FitnessTerms best_terms{};
      for (NodeId x : border) {
        const FitnessTerms with_x{terms_.k_in + 2 * links_in_[x],
                                  terms_.total + static_cast<std::int64_t>(g_.degree(x))};
        const int cmp = best.empty() ? 1 : compare_fitness(with_x, best_terms, alpha_);
        if (cmp > 0) {
          best.assign(1, x);
          best_terms = with_x;
        } else if (cmp == 0) {
          best.push_back(x);
        }
      }
      if (compare_fitness(best_terms, terms_, alpha_) < 0) break;
      for (NodeId x : best) add(x);

      prune(seed);
    }
    NaturalCommunity nc;
    nc.seed = seed;
    nc.members = members_;
    std::sort(nc.members.begin(), nc.members.end());
    nc.fitness = fitness_value(terms_.k_in, terms_.total, alpha_);
    return nc;
  }

 private:
  void reset() {
    for (NodeId v : touched_) {
      in_c_[v] = 0;
      links_in_[v] = 0;
    }
    touched_.clear();
    members_.clear();
    terms_ = {};
  }

  void add(NodeId x) {
    in_c_[x] = 1;
    members_.push_back(x);
    touched_.push_back(x);
    terms_.k_in += 2 * links_in_[x];
    terms_.total += static_cast<std::int64_t>(g_.degree(x));
    for (NodeId w : g_.neighbors(x)) {
      if (links_in_[w]++ == 0 && !in_c_[w]) touched_.push_back(w);
    }
  }

  void remove(NodeId y) {
    in_c_[y] = 0;
    terms_.k_in -= 2 * links_in_[y];
    terms_.total -= static_cast<std::int64_t>(g_.degree(y));
    for (NodeId w : g_.neighbors(y)) --links_in_[w];
  }

  void collect_border(std::vector<NodeId>& border) const {
    border.clear();
    for (NodeId v : touched_) {
      if (!in_c_[v] && links_in_[v] > 0) border.push_back(v);
    }
    std::sort(border.begin(), border.end());
    border.erase(std::unique(border.begin(), border.end()), border.end());
  }

  // Drops, all at once, every non-seed member whose removal raises fitness;
  // repeats until no such member is left.
  void prune(NodeId seed) {
    std::vector<NodeId> doomed;
    for (;;) {
      doomed.clear();
      for (NodeId y : members_) {
        if (y == seed) continue;
        const FitnessTerms without_y{terms_.k_in - 2 * links_in_[y],
                                     terms_.total - static_cast<std::int64_t>(g_.degree(y))};
        if (compare_fitness(terms_, without_y, alpha_) < 0) doomed.push_back(y);
      }
      if (doomed.empty()) return;
      for (NodeId y : doomed) remove(y);
      std::erase_if(members_, [&](NodeId v) { return !in_c_[v]; });
    }
  }

  const Graph& g_;
  double alpha_;
  std::vector<char> in_c_;
  std::vector<std::int64_t> links_in_;
  std::vector<NodeId> touched_;
  std::vector<NodeId> members_;
  FitnessTerms terms_;
};

// Level-synchronous BFS that stops once every member has been reached and the
// level holding the farthest member has been counted.
NcLidScore nc_lid_impl(const Graph& g, const NaturalCommunity& c, std::vector<std::uint32_t>& dist,
                       std::vector<NodeId>& queue) {
  NcLidScore s;
  s.node = c.seed;
  s.nc_size = c.members.size();

  queue.clear();
  queue.push_back(c.seed);
  dist[c.seed] = 0;
  std::size_t found = 0;
  std::size_t level_begin = 0;
  std::uint32_t level = 0;
  bool done = false;
  while (level_begin < queue.size()) {
    const std::size_t level_end = queue.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      if (c.contains(queue[i])) ++found;
    }
    if (found == c.members.size()) {
      s.radius = level;
      s.t_count = level_end;
      done = true;
      break;
    }
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (NodeId w : g.neighbors(queue[i])) {
        if (dist[w] == kUnreachable) {
          dist[w] = level + 1;
          queue.push_back(w);
        }
      }
    }
    level_begin = level_end;
    ++level;
  }
  for (NodeId v : queue) dist[v] = kUnreachable;
  if (!done) throw InputError("community member unreachable from seed " + g.label(c.seed));
  s.value = std::log(static_cast<double>(s.t_count) / static_cast<double>(s.nc_size));
  return s;
}

}  // namespace

double community_fitness(const Graph& g, std::span<const NodeId> members, double alpha) {
  std::vector<char> in(g.node_count(), 0);
  for (NodeId v : members) in[v] = 1;
  std::int64_t k_in = 0, k_out = 0;
  for (NodeId v : members) {
    for (NodeId w : g.neighbors(v)) (in[w] ? k_in : k_out) += 1;
  }
  return fitness_value(k_in, k_in + k_out, alpha);
}

NaturalCommunity natural_community(const Graph& g, NodeId seed, double alpha) {
  if (!g.contains(seed)) throw InputError("seed " + std::to_string(seed) + " out of range");
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  return CommunityBuilder(g, alpha).grow(seed);
}

NcLidScore nc_lid(const Graph& g, const NaturalCommunity& community) {
  if (!g.contains(community.seed)) throw InputError("community seed out of range");
  for (NodeId v : community.members) {
    if (!g.contains(v)) throw InputError("community member out of range");
  }
  if (!community.contains(community.seed)) throw InputError("community must contain its seed");
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue;
  return nc_lid_impl(g, community, dist, queue);
}

std::vector<double> hop_distance_profile(const Graph& g, NodeId source) {
  const auto hops = shortest_path_distances(g, source);
  std::vector<double> out(hops.size());
  for (std::size_t i = 0; i < hops.size(); ++i) {
    out[i] = hops[i] == kUnreachable ? std::numeric_limits<double>::infinity()
                                     : static_cast<double>(hops[i]);
  }
  return out;
}

double gb_lid(const Graph& g, NodeId seed, std::span<const NodeId> locality,
              const DistanceProfile& distance) {
  if (locality.empty()) throw InputError("gb_lid: locality must be nonempty");
  if (std::find(locality.begin(), locality.end(), seed) == locality.end()) {
    throw InputError("gb_lid: locality must contain the seed");
  }
  const auto d = distance(g, seed);
  double radius = 0.0;
  for (NodeId s : locality) {
    if (!std::isfinite(d.at(s))) throw InputError("gb_lid: locality member at infinite distance");
    radius = std::max(radius, d[s]);
  }
  const auto t = std::count_if(d.begin(), d.end(), [&](double x) { return x <= radius; });
  return std::log(static_cast<double>(t) / static_cast<double>(locality.size()));
}

std::vector<double> NcLidTable::values() const {
  std::vector<double> v(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) v[i] = scores[i].value;
  return v;
}

NcLidTable nc_lid_all(const Graph& g, double alpha, unsigned threads) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  const std::size_t n = g.node_count();
  NcLidTable table;
  table.communities.resize(n);
  table.scores.resize(n);
  // Contiguous seed blocks so each worker reuses one set of scratch buffers.
  const std::size_t block = 64;
  const std::size_t blocks = (n + block - 1) / block;
  parallel_for(blocks, threads, [&](std::size_t b) {
    CommunityBuilder builder(g, alpha);
    std::vector<std::uint32_t> dist(n, kUnreachable);
    std::vector<NodeId> queue;
    for (std::size_t v = b * block; v < std::min(n, (b + 1) * block); ++v) {
      table.communities[v] = builder.grow(static_cast<NodeId>(v));
      table.scores[v] = nc_lid_impl(g, table.communities[v], dist, queue);
    }
  });
  return table;
}

void write_nc_lid_csv(const Graph& g, const NcLidTable& table, std::ostream& out) {
  out << kNcLidCsvHeader << '\n';
  for (const auto& s : table.scores) {
    out << g.label(s.node) << ',' << s.nc_size << ',' << s.radius << ',' << s.t_count << ','
        << s.value << '\n';
  }
}

}  // namespace nclid
