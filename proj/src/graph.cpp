#include "nclid/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nclid/error.hpp"
#include "nclid/stats.hpp"

namespace nclid {

Graph Graph::from_links(std::vector<std::string> labels, std::span<const Link> links) {
  Graph g;
  const std::size_t n = labels.size();
  std::vector<Link> normalized;
  normalized.reserve(links.size());
  for (auto [u, v] : links) {
    if (u >= n || v >= n) throw InputError("link endpoint out of range");
    if (u == v) continue;
    normalized.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(normalized.begin(), normalized.end());
  normalized.erase(std::unique(normalized.begin(), normalized.end()), normalized.end());

  std::vector<std::size_t> degree(n, 0);
  for (auto [u, v] : normalized) {
    ++degree[u];
    ++degree[v];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.targets_.resize(g.offsets_[n]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [u, v] : normalized) {
    g.targets_[fill[u]++] = v;
    g.targets_[fill[v]++] = u;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }

  g.index_.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!g.index_.emplace(labels[v], static_cast<NodeId>(v)).second) {
      throw InputError("duplicate node label '" + labels[v] + "'");
    }
  }
  g.labels_ = std::move(labels);
  return g;
}

Graph Graph::from_links(std::size_t n, std::span<const Link> links) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return from_links(std::move(labels), links);
}

bool Graph::has_link(NodeId u, NodeId v) const {
  if (degree(u) > degree(v)) std::swap(u, v);
  auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::optional<NodeId> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Link> Graph::links() const {
  std::vector<Link> out;
  out.reserve(link_count());
  for (NodeId u = 0; u < node_count(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  auto is_sep = [](char c) { return c == ' ' || c == '\t' || c == ',' || c == '\r'; };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

}  // namespace

Graph load_edge_list(std::istream& in, bool directed_input, LoadCounters* counters) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> ids;
  std::vector<Link> raw;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.emplace(std::string(token), static_cast<NodeId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  LoadCounters local;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    const auto first = view.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    if (view[first] == '#' || view[first] == '%') continue;
    auto tokens = split_tokens(view);
    if (tokens.size() != 2) {
      throw ParseError(line_no, "expected 2 node labels, found " + std::to_string(tokens.size()));
    }
    const NodeId u = intern(tokens[0]);
    const NodeId v = intern(tokens[1]);
    if (u == v) {
      ++local.self_loops;
      continue;
    }
    raw.emplace_back(u, v);
  }
  if (labels.empty()) throw ParseError(line_no, "edge list contains no links");

  std::vector<Link> sorted = raw;
  if (!directed_input) {
    for (auto& [u, v] : sorted) {
      if (u > v) std::swap(u, v);
    }
  }
  std::sort(sorted.begin(), sorted.end());
  const auto distinct_end = std::unique(sorted.begin(), sorted.end());
  local.duplicates = static_cast<std::size_t>(sorted.end() - distinct_end);
  sorted.erase(distinct_end, sorted.end());
  if (directed_input) {
    for (auto [u, v] : sorted) {
      if (u < v && std::binary_search(sorted.begin(), sorted.end(), Link{v, u})) ++local.reciprocal;
    }
  }
  if (counters) *counters = local;
  return Graph::from_links(std::move(labels), raw);
}

Graph load_edge_list_file(const std::string& path, bool directed_input, LoadCounters* counters) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path + "'");
  return load_edge_list(in, directed_input, counters);
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (auto [u, v] : g.links()) out << g.label(u) << ' ' << g.label(v) << '\n';
}

std::vector<std::uint32_t> connected_components(const Graph& g, std::size_t* count) {
  const std::size_t n = g.node_count();
  std::vector<std::uint32_t> comp(n, kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(n);
  std::uint32_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (comp[s] != kUnreachable) continue;
    queue.clear();
    queue.push_back(s);
    comp[s] = next;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId w : g.neighbors(queue[head])) {
        if (comp[w] == kUnreachable) {
          comp[w] = next;
          queue.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

GraphStats compute_stats(const Graph& g) {
  GraphStats s;
  s.n = g.node_count();
  s.l = g.link_count();
  if (s.n == 0) return s;
  auto comp = connected_components(g, &s.components);
  std::vector<std::size_t> sizes(s.components, 0);
  for (auto c : comp) ++sizes[c];
  s.largest_component_fraction =
      static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(s.n);
  s.avg_degree = 2.0 * static_cast<double>(s.l) / static_cast<double>(s.n);

  std::vector<double> degrees(s.n);
  for (NodeId v = 0; v < s.n; ++v) degrees[v] = static_cast<double>(g.degree(v));
  const bool constant = std::all_of(degrees.begin(), degrees.end(),
                                    [&](double d) { return d == degrees.front(); });
  s.degree_skewness = (s.n < 3 || constant) ? 0.0 : stats::skewness(degrees);
  return s;
}

std::string stats_csv_row(std::string_view name, const GraphStats& s) {
  char buf[160];
  std::snprintf(buf, sizeof buf, ",%zu,%zu,%zu,%.2f,%.2f,%.2f", s.n, s.l, s.components,
                s.largest_component_fraction, s.avg_degree, s.degree_skewness);
  return std::string(name) + buf;
}

std::vector<std::uint32_t> shortest_path_distances(const Graph& g, NodeId source) {
  if (!g.contains(source)) throw InputError("node id " + std::to_string(source) + " out of range");
  std::vector<std::uint32_t> dist(g.node_count(), kUnreachable);
  std::vector<NodeId> queue;
  queue.reserve(g.node_count());
  queue.push_back(source);
  dist[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    for (NodeId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

}  // namespace nclid
