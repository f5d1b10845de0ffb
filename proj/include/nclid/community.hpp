#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "nclid/graph.hpp"

namespace nclid {

struct NaturalCommunity {
  NodeId seed = 0;
  std::vector<NodeId> members;  // sorted ascending, always contains seed
  double fitness = 0.0;

  bool contains(NodeId v) const;
  std::size_t size() const noexcept { return members.size(); }
};

struct NcLidScore {
  NodeId node = 0;
  std::size_t nc_size = 0;
  std::uint32_t radius = 0;
  std::size_t t_count = 0;
  double value = 0.0;
};

/// f_C = k_in / (k_in + k_out)^alpha, computed from scratch. k_in counts each
/// intra-community link twice (sum of intra-degrees), k_out counts each link
/// leaving the community once. Empty denominators give 0.
double community_fitness(const Graph& g, std::span<const NodeId> members, double alpha = 1.0);

/// Greedy fitness-maximizing local community of `seed`.
///
/// Each round adds every border node whose addition yields the largest
/// non-negative fitness change, then repeatedly drops all members (other than
/// the seed) whose removal would raise fitness. Growth stops once every border
/// node has negative fitness. Ties are handled as sets, so the result does not
/// depend on node numbering or adjacency order. For alpha == 1 comparisons are
/// exact integer cross-multiplications.
NaturalCommunity natural_community(const Graph& g, NodeId seed, double alpha = 1.0);

/// NC-LID of the community's seed: -ln(|S| / T) where T counts nodes within
/// the community's hop radius of the seed. Throws InputError when a member is
/// unreachable from the seed.
NcLidScore nc_lid(const Graph& g, const NaturalCommunity& community);

/// Distances from `source` to every node; +inf marks unreachable nodes.
using DistanceProfile = std::function<std::vector<double>(const Graph&, NodeId source)>;

std::vector<double> hop_distance_profile(const Graph& g, NodeId source);

/// General graph-based LID, -ln(|locality| / T) with T counted under the
/// supplied distance. The locality must contain the seed.
double gb_lid(const Graph& g, NodeId seed, std::span<const NodeId> locality,
              const DistanceProfile& distance = hop_distance_profile);

struct NcLidTable {
  std::vector<NaturalCommunity> communities;  // indexed by node id
  std::vector<NcLidScore> scores;             // indexed by node id

  std::vector<double> values() const;
};

/// natural_community + nc_lid over every node. Output is independent of the
/// thread count (0 = hardware concurrency).
NcLidTable nc_lid_all(const Graph& g, double alpha = 1.0, unsigned threads = 1);

inline constexpr const char* kNcLidCsvHeader = "node_label,nc_size,radius,t_count,nc_lid";
void write_nc_lid_csv(const Graph& g, const NcLidTable& table, std::ostream& out);

}  // namespace nclid
