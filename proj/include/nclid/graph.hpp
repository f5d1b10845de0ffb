#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nclid {

using NodeId = std::uint32_t;
using Link = std::pair<NodeId, NodeId>;

/// Hop distance assigned to nodes outside the source's component.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

// Immutable undirected simple graph in compressed adjacency form. Node ids are
// dense in [0, N) and every adjacency list is sorted ascending.
class Graph {
 public:
  Graph() = default;

  /// Builds the simple undirected graph over `labels.size()` nodes. Links are
  /// normalized to (min, max); self-loops and repeated pairs are dropped.
  static Graph from_links(std::vector<std::string> labels, std::span<const Link> links);

  /// Convenience for tests and generators: labels are "0".."n-1".
  static Graph from_links(std::size_t n, std::span<const Link> links);

  std::size_t node_count() const noexcept { return labels_.size(); }
  std::size_t link_count() const noexcept { return targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_link(NodeId u, NodeId v) const;

  const std::string& label(NodeId v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<NodeId> find(std::string_view label) const;

  /// All links as (u, v) with u < v, sorted lexicographically.
  std::vector<Link> links() const;

  bool contains(NodeId v) const noexcept { return v < node_count(); }

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

struct LoadCounters {
  std::size_t self_loops = 0;
  std::size_t duplicates = 0;  // repeated lines for the same (oriented, if directed) pair
  std::size_t reciprocal = 0;  // directed u->v and v->u merged into one link
};

/// Parses an edge list: one "u v" pair per line, whitespace or comma
/// separated; blank lines and lines starting with '#' or '%' are skipped.
/// Labels get ids in first-seen order. Directed input is projected to its
/// undirected simple graph.
Graph load_edge_list(std::istream& in, bool directed_input = false, LoadCounters* counters = nullptr);
Graph load_edge_list_file(const std::string& path, bool directed_input = false,
                          LoadCounters* counters = nullptr);

/// One "label1 label2" line per link in internal id-pair order.
void write_edge_list(const Graph& g, std::ostream& out);

struct GraphStats {
  std::size_t n = 0;
  std::size_t l = 0;
  std::size_t components = 0;
  double largest_component_fraction = 0.0;
  double avg_degree = 0.0;
  double degree_skewness = 0.0;
};

GraphStats compute_stats(const Graph& g);

/// name,N,L,C,F,avg_degree,skewness with two decimals for the real columns.
std::string stats_csv_row(std::string_view name, const GraphStats& s);
inline constexpr std::string_view kStatsCsvHeader = "name,N,L,C,F,avg_degree,skewness";

/// BFS hop distances from `source`; kUnreachable for other components.
std::vector<std::uint32_t> shortest_path_distances(const Graph& g, NodeId source);

/// Component id per node, numbered in order of smallest member.
std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count = nullptr);

}  // namespace nclid
