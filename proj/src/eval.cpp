#include "nclid/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <tuple>

#include "nclid/error.hpp"
#include "nclid/parallel.hpp"

namespace nclid {

namespace {

struct Candidate {
  double dist2;
  NodeId u;
  NodeId v;
  bool operator<(const Candidate& o) const { return std::tie(dist2, u, v) < std::tie(o.dist2, o.u, o.v); }
};

double squared_distance(std::span<const float> a, std::span<const float> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    s += d * d;
  }
  return s;
}

}  // namespace

std::vector<Link> reconstruct(const Embedding& emb, std::size_t l, unsigned threads) {
  const std::size_t n = emb.size();
  const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
  if (l > pairs) {
    throw InputError("cannot reconstruct " + std::to_string(l) + " links from " + std::to_string(pairs) +
                     " node pairs");
  }
  if (l == 0) return {};

  const std::size_t block = 16;
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<std::vector<Candidate>> kept(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::priority_queue<Candidate> heap;  // max-heap of the l best so far
    for (std::size_t u = b * block; u < std::min(n, (b + 1) * block); ++u) {
      const auto ru = emb.row(u);
      for (std::size_t v = u + 1; v < n; ++v) {
        const Candidate c{squared_distance(ru, emb.row(v)), static_cast<NodeId>(u), static_cast<NodeId>(v)};
        if (heap.size() < l) {
          heap.push(c);
        } else if (c < heap.top()) {
          heap.pop();
          heap.push(c);
        }
      }
    }
    kept[b].reserve(heap.size());
    while (!heap.empty()) {
      kept[b].push_back(heap.top());
      heap.pop();
    }
  });

  std::vector<Candidate> all;
  for (auto& k : kept) all.insert(all.end(), k.begin(), k.end());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(l), all.end());
  std::vector<Link> out;
  out.reserve(l);
  for (std::size_t i = 0; i < l; ++i) out.emplace_back(all[i].u, all[i].v);
  return out;
}

LinkScores link_scores(const Graph& g, const std::vector<Link>& reconstructed) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> rec_degree(n, 0), correct(n, 0);
  for (auto [u, v] : reconstructed) {
    if (u >= n || v >= n) throw InputError("reconstructed link outside the graph");
    ++rec_degree[u];
    ++rec_degree[v];
    if (g.has_link(u, v)) {
      ++correct[u];
      ++correct[v];
    }
  }
  LinkScores s;
  s.precision.assign(n, 0.0);
  s.recall.assign(n, 0.0);
  s.f1.assign(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const double c = static_cast<double>(correct[v]);
    if (rec_degree[v] > 0) s.precision[v] = c / static_cast<double>(rec_degree[v]);
    if (g.degree(v) > 0) s.recall[v] = c / static_cast<double>(g.degree(v));
    const double pr = s.precision[v] + s.recall[v];
    if (pr > 0.0) s.f1[v] = 2.0 * s.precision[v] * s.recall[v] / pr;
  }
  return s;
}

ReconstructionResult evaluate_embedding(const Graph& g, const Embedding& emb, unsigned threads) {
  if (emb.size() != g.node_count()) throw InputError("embedding and graph sizes differ");
  ReconstructionResult r;
  r.reconstructed_links = reconstruct(emb, g.link_count(), threads);
  r.per_node = link_scores(g, r.reconstructed_links);
  const double n = static_cast<double>(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) {
    r.macro_precision += r.per_node.precision[v];
    r.macro_recall += r.per_node.recall[v];
    r.macro_f1 += r.per_node.f1[v];
  }
  if (n > 0) {
    r.macro_precision /= n;
    r.macro_recall /= n;
    r.macro_f1 /= n;
  }
  return r;
}

void write_link_scores_csv(const Graph& g, const LinkScores& s, std::ostream& out) {
  out << kLinkScoresCsvHeader << '\n';
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.label(v) << ',' << s.precision[v] << ',' << s.recall[v] << ',' << s.f1[v] << '\n';
  }
}

MleLid mle_lid(const Embedding& emb, std::size_t node, std::size_t k) {
  const std::size_t n = emb.size();
  if (node >= n) throw InputError("mle_lid: node out of range");
  if (k < 1 || k >= n) throw InputError("mle_lid: need 1 <= k < N");
  std::vector<double> dist;
  dist.reserve(n - 1);
  const auto x = emb.row(node);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != node) dist.push_back(std::sqrt(squared_distance(x, emb.row(j))));
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  if (dist[0] == 0.0) throw NumericalError("mle_lid: zero distance to a duplicate vector");
  const double xk = dist[k - 1];
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(dist[i] / xk);
  s /= static_cast<double>(k);
  if (s == 0.0) return {std::numeric_limits<double>::infinity(), true};
  return {-1.0 / s, false};
}

}  // namespace nclid
