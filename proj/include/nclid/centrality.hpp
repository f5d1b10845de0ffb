#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "nclid/error.hpp"
#include "nclid/graph.hpp"

namespace nclid {

enum class Metric { Degree, Core, Eigenvector, Closeness, Betweenness };

inline constexpr std::array<Metric, 5> kAllMetrics{Metric::Degree, Metric::Core, Metric::Eigenvector,
                                                   Metric::Closeness, Metric::Betweenness};

std::string_view metric_name(Metric m);  // DEG, CORE, EVC, CLO, BET

struct CentralityVector {
  Metric metric = Metric::Degree;
  std::vector<double> values;
};

class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> iterate)
      : NumericalError(what), iterate_(std::move(iterate)) {}
  const std::vector<double>& iterate() const noexcept { return iterate_; }

 private:
  std::vector<double> iterate_;
};

CentralityVector degree_centrality(const Graph& g);

/// Core index via bucket peeling (Batagelj-Zaversnik), O(N + L).
CentralityVector core_index(const Graph& g);

/// Power iteration from the uniform vector, L2-normalized each step. Stops
/// when the L1 change between iterates drops below tol * N; throws
/// ConvergenceError after max_iter steps. Iterates with (A + I), which has the
/// same dominant eigenvector as A but does not oscillate on bipartite graphs.
CentralityVector eigenvector_centrality(const Graph& g, double tol = 1e-10, int max_iter = 1000);

/// Component-scaled closeness: ((r-1) / sum of distances) * ((r-1) / (N-1))
/// where r counts the nodes reachable from v (including v).
CentralityVector closeness(const Graph& g, unsigned threads = 1);

/// Brandes accumulation over all sources. Undirected pair counts are halved;
/// normalization multiplies by 2 / ((N-1)(N-2)), and yields zeros for N < 3.
CentralityVector betweenness(const Graph& g, bool normalized = true, unsigned threads = 1);

CentralityVector compute_centrality(const Graph& g, Metric m, unsigned threads = 1);

inline constexpr const char* kCentralityCsvHeader = "node_label,deg,core,evc,clo,bet";
void write_centrality_csv(const Graph& g, const std::vector<CentralityVector>& metrics, std::ostream& out);

}  // namespace nclid
