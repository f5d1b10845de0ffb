#include "nclid/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nclid/parallel.hpp"

namespace nclid {

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Degree: return "DEG";
    case Metric::Core: return "CORE";
    case Metric::Eigenvector: return "EVC";
    case Metric::Closeness: return "CLO";
    case Metric::Betweenness: return "BET";
  }
  return "?";
}

CentralityVector degree_centrality(const Graph& g) {
  CentralityVector c{Metric::Degree, std::vector<double>(g.node_count())};
  for (NodeId v = 0; v < g.node_count(); ++v) c.values[v] = static_cast<double>(g.degree(v));
  return c;
}

CentralityVector core_index(const Graph& g) {
  const std::size_t n = g.node_count();
  std::size_t max_deg = 0;
  std::vector<std::size_t> deg(n);
  for (NodeId v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    max_deg = std::max(max_deg, deg[v]);
  }
  // bin[d] = start of degree-d block in `order`; pos[v] = index of v in `order`
  std::vector<std::size_t> bin(max_deg + 2, 0);
  for (auto d : deg) ++bin[d + 1];
  for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
  std::vector<NodeId> order(n);
  std::vector<std::size_t> pos(n);
  {
    auto next = bin;
    for (NodeId v = 0; v < n; ++v) {
      pos[v] = next[deg[v]]++;
      order[pos[v]] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = order[i];
    for (NodeId u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        // swap u to the front of its degree block, then shrink it by one
        const std::size_t du = deg[u];
        const std::size_t pw = bin[du];
        const NodeId w = order[pw];
        if (u != w) {
          std::swap(order[pos[u]], order[pw]);
          std::swap(pos[u], pos[w]);
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  CentralityVector c{Metric::Core, std::vector<double>(n)};
  for (NodeId v = 0; v < n; ++v) c.values[v] = static_cast<double>(deg[v]);
  return c;
}

CentralityVector eigenvector_centrality(const Graph& g, double tol, int max_iter) {
  const std::size_t n = g.node_count();
  if (n == 0) throw InputError("eigenvector centrality of an empty graph");
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  for (int it = 0; it < max_iter; ++it) {
    for (NodeId v = 0; v < n; ++v) {
      double s = x[v];
      for (NodeId w : g.neighbors(v)) s += x[w];
      next[v] = s;
    }
    double norm = 0.0;
    for (double y : next) norm += y * y;
    norm = std::sqrt(norm);
    if (norm == 0.0) throw ConvergenceError("eigenvector iterate collapsed to zero", x);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      change += std::abs(next[i] - x[i]);
    }
    x.swap(next);
    if (change < tol * static_cast<double>(n)) return {Metric::Eigenvector, std::move(x)};
  }
  throw ConvergenceError("eigenvector centrality did not converge in " + std::to_string(max_iter) +
                             " iterations",
                         std::move(x));
}

CentralityVector closeness(const Graph& g, unsigned threads) {
  const std::size_t n = g.node_count();
  CentralityVector c{Metric::Closeness, std::vector<double>(n, 0.0)};
  if (n < 2) return c;
  parallel_for(n, threads, [&](std::size_t v) {
    const auto dist = shortest_path_distances(g, static_cast<NodeId>(v));
    double total = 0.0;
    std::size_t reachable = 0;
    for (auto d : dist) {
      if (d == kUnreachable) continue;
      total += d;
      ++reachable;
    }
    if (reachable <= 1 || total == 0.0) return;
    const double r1 = static_cast<double>(reachable - 1);
    c.values[v] = (r1 / total) * (r1 / static_cast<double>(n - 1));
  });
  return c;
}

namespace {

// Single-source Brandes dependency accumulation into `acc`.
struct BrandesScratch {
  explicit BrandesScratch(std::size_t n) : sigma(n), delta(n), dist(n, -1), stack(), queue() {
    stack.reserve(n);
    queue.reserve(n);
  }
  std::vector<double> sigma, delta;
  std::vector<long> dist;
  std::vector<NodeId> stack, queue;

  void accumulate(const Graph& g, NodeId s, std::vector<double>& acc) {
    for (NodeId v : stack) {
      sigma[v] = 0.0;
      delta[v] = 0.0;
      dist[v] = -1;
    }
    stack.clear();
    queue.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    queue.push_back(s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const NodeId v = queue[head];
      stack.push_back(v);
      for (NodeId w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      const NodeId w = *it;
      for (NodeId v : g.neighbors(w)) {
        if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      }
      if (w != s) acc[w] += delta[w];
    }
  }
};

}  // namespace

CentralityVector betweenness(const Graph& g, bool normalized, unsigned threads) {
  const std::size_t n = g.node_count();
  CentralityVector c{Metric::Betweenness, std::vector<double>(n, 0.0)};
  if (n == 0) return c;
  // Fixed source blocks reduced in block order keep the floating-point sum
  // independent of the thread count.
  const std::size_t block = 32;
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<double>> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    BrandesScratch scratch(n);
    partial[b].assign(n, 0.0);
    for (std::size_t s = b * block; s < std::min(n, (b + 1) * block); ++s) {
      scratch.accumulate(g, static_cast<NodeId>(s), partial[b]);
    }
  });
  for (const auto& p : partial) {
    for (std::size_t v = 0; v < n; ++v) c.values[v] += p[v];
  }
  for (double& x : c.values) x /= 2.0;  // each unordered pair was counted from both ends
  if (normalized) {
    if (n < 3) {
      std::fill(c.values.begin(), c.values.end(), 0.0);
    } else {
      const double scale = 2.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2));
      for (double& x : c.values) x *= scale;
    }
  }
  return c;
}

CentralityVector compute_centrality(const Graph& g, Metric m, unsigned threads) {
  switch (m) {
    case Metric::Degree: return degree_centrality(g);
    case Metric::Core: return core_index(g);
    case Metric::Eigenvector: return eigenvector_centrality(g);
    case Metric::Closeness: return closeness(g, threads);
    case Metric::Betweenness: return betweenness(g, true, threads);
  }
  return {};
}

void write_centrality_csv(const Graph& g, const std::vector<CentralityVector>& metrics, std::ostream& out) {
  out << kCentralityCsvHeader << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v);
    for (const auto& m : metrics) out << ',' << m.values[v];
    out << '\n';
  }
}

}  // namespace nclid
