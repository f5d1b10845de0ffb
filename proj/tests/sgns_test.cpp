#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "nclid/error.hpp"
#include "nclid/sgns.hpp"
#include "nclid/walks.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

using namespace nclid;
using nclid::testing::data_path;

namespace {

using oracle::Vec;

SgnsGradient gradient(const Vec& center, const Vec& context, const std::vector<Vec>& negs) {
  std::vector<std::span<const double>> spans(negs.begin(), negs.end());
  return sgns_gradient(center, context, spans);
}

std::span<const float> output_row(const Embedding& e, std::size_t i) { return {e.output.data() + i * e.dim, e.dim}; }

WalkCorpus pair_corpus(std::size_t repeats) {
  WalkCorpus c;
  c.walks.assign(repeats, Walk{0, {0, 1}});
  return c;
}

WalkCorpus graph_corpus(const Graph& g, int walks, int length, std::uint64_t seed) {
  WalkConfig w;
  w.base_num_walks = walks;
  w.base_walk_length = length;
  w.seed = seed;
  return sample_corpus(g, w);
}

Graph two_cliques(std::size_t k) {
  std::vector<Link> links;
  for (NodeId base : {NodeId{0}, static_cast<NodeId>(k)}) {
    for (NodeId i = 0; i < k; ++i) {
      for (NodeId j = i + 1; j < k; ++j) links.emplace_back(base + i, base + j);
    }
  }
  return Graph::from_links(2 * k, links);
}

}  // namespace

TEST(SgnsGradient, SigmoidAtZero) {
  EXPECT_EQ(sigmoid(0.0), 0.5);
  // u . v = 0 with no negatives: d loss / d v = (sigma(0) - 1) u = -u / 2.
  const Vec v{1.0, 0.0, 0.0};
  const Vec u{0.0, 2.0, -4.0};
  const auto g = gradient(v, u, {});
  EXPECT_EQ(g.d_center, (Vec{0.0, -1.0, 2.0}));
  EXPECT_NEAR(g.loss, std::log(2.0), 1e-15);
}

TEST(SgnsGradient, NoNegativesLeavesOnlyThePositiveTerm) {
  const Vec v{0.3, -0.2, 0.5};
  const Vec u{0.1, 0.4, -0.3};
  const auto g = gradient(v, u, {});
  EXPECT_TRUE(g.d_negatives.empty());
  const double s = sigmoid(oracle::dot(u, v)) - 1.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(g.d_center[i], s * u[i], 1e-15);
    EXPECT_NEAR(g.d_context[i], s * v[i], 1e-15);
  }
  EXPECT_NEAR(g.loss, -oracle::log_sigmoid(oracle::dot(u, v)), 1e-15);
}

TEST(SgnsGradient, MatchesCentralFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> entry(0.0, 0.6);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + rng() % 32;
    const std::size_t k = rng() % 11;
    auto random_vec = [&] {
      Vec x(d);
      for (auto& e : x) e = entry(rng);
      return x;
    };
    Vec center = random_vec(), context = random_vec();
    std::vector<Vec> negs(k);
    for (auto& u : negs) u = random_vec();

    const auto g = gradient(center, context, negs);
    EXPECT_NEAR(g.loss, oracle::sgns_loss(center, context, negs), 1e-12) << "trial " << trial;
    ASSERT_EQ(g.d_negatives.size(), k);
    EXPECT_LT(oracle::sgns_gradient_error(center, context, negs), 1e-4) << "trial " << trial;
  }
}

TEST(SgnsGradient, RejectsMismatchedDimensions) {
  const Vec a{1, 2}, b{1, 2, 3};
  EXPECT_THROW(gradient(a, b, {}), InputError);
  EXPECT_THROW(gradient(a, a, {b}), InputError);
}

TEST(Train, SinglePairConverges) {
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.window = 1;
  std::vector<double> cosines;
  cfg.on_epoch_end = [&](int, const Embedding& e) { cosines.push_back(cosine_similarity(e.row(0), output_row(e, 1))); };
  train(pair_corpus(10000), cfg, 2);
  ASSERT_EQ(cosines.size(), 5u);
  for (std::size_t i = 1; i < cosines.size(); ++i) EXPECT_GT(cosines[i], cosines[i - 1]) << "epoch " << i;
  EXPECT_GT(cosines.back(), 0.9);
}

TEST(Train, DeterministicModeIsBitIdentical) {
  const Graph g = load_edge_list_file(data_path("zachary.edges"));
  const auto corpus = graph_corpus(g, 5, 40, 3);
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.seed = 11;
  const auto a = train(corpus, cfg, g.node_count());
  const auto b = train(corpus, cfg, g.node_count());
  EXPECT_EQ(a.input, b.input);
  EXPECT_EQ(a.output, b.output);
  cfg.seed = 12;
  EXPECT_NE(train(corpus, cfg, g.node_count()).input, a.input);
}

TEST(Train, DisconnectedCliquesSeparate) {
  const Graph g = two_cliques(6);
  TrainConfig cfg;
  cfg.dim = 16;
  const auto e = train(graph_corpus(g, 10, 40, 1), cfg, g.node_count());
  double intra = 0.0, inter = 0.0;
  int n_intra = 0, n_inter = 0;
  for (NodeId i = 0; i < 12; ++i) {
    for (NodeId j = i + 1; j < 12; ++j) {
      const double c = cosine_similarity(e.row(i), e.row(j));
      if ((i < 6) == (j < 6)) {
        intra += c;
        ++n_intra;
      } else {
        inter += c;
        ++n_inter;
      }
    }
  }
  EXPECT_GT(intra / n_intra, inter / n_inter);
}

TEST(Train, LossDecreasesOverEarlyEpochs) {
  const Graph g = load_edge_list_file(data_path("florentine.edges"));
  const auto corpus = graph_corpus(g, 10, 20, 7);
  std::vector<std::vector<double>> losses(4);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    TrainConfig cfg;
    cfg.dim = 16;
    cfg.window = 5;
    cfg.epochs = 4;
    cfg.seed = seed;
    cfg.on_epoch_end = [&](int epoch, const Embedding& e) {
      losses[static_cast<std::size_t>(epoch)].push_back(corpus_loss(e, corpus, 5, 5, 99));
    };
    train(corpus, cfg, g.node_count());
  }
  std::vector<double> medians;
  for (auto& l : losses) {
    std::sort(l.begin(), l.end());
    medians.push_back(0.5 * (l[4] + l[5]));
  }
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(medians[k + 1], medians[k]) << "epoch " << k;
}

TEST(Train, OutputShapeAndFiniteValues) {
  for (const char* file : {"zachary.edges", "florentine.edges", "lesmis.edges"}) {
    const Graph g = load_edge_list_file(data_path(file));
    TrainConfig cfg;
    cfg.dim = 24;
    const auto e = train(graph_corpus(g, 10, 80, 2), cfg, g.node_count());
    ASSERT_EQ(e.size(), g.node_count());
    ASSERT_EQ(e.input.size(), g.node_count() * 24);
    for (float x : e.input) ASSERT_TRUE(std::isfinite(x)) << file;
    for (float x : e.output) ASSERT_TRUE(std::isfinite(x)) << file;
  }
}

TEST(Train, LargeVocabularyUsesTheFullNegativeTable) {
  const Graph g = nclid::testing::path_graph(6000);
  TrainConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 1;
  const auto e = train(graph_corpus(g, 1, 10, 4), cfg, g.node_count());
  EXPECT_EQ(std::count(e.untrained.begin(), e.untrained.end(), 1), 0);
  for (float x : e.input) ASSERT_TRUE(std::isfinite(x));
  for (float x : e.output) ASSERT_TRUE(std::isfinite(x));
}

TEST(Train, NodesOutsideTheCorpusKeepTheirInitialRow) {
  TrainConfig cfg;
  cfg.dim = 4;
  const auto e = train(pair_corpus(50), cfg, 3);
  EXPECT_EQ(e.untrained, (std::vector<char>{0, 0, 1}));
  for (float x : e.row(2)) {
    EXPECT_LT(std::abs(x), 0.5f / 4.0f);
  }
}

TEST(Train, RejectsBadInput) {
  TrainConfig cfg;
  EXPECT_THROW(train(WalkCorpus{}, cfg, 3), InputError);
  EXPECT_THROW(train(pair_corpus(5), cfg, 1), InputError);
  cfg.window = 0;
  EXPECT_THROW(train(pair_corpus(5), cfg, 2), InputError);
}

TEST(Train, LookupSigmoidTracksExactSigmoid) {
  // A one-worker hogwild run follows the deterministic sample stream, so only
  // the sigmoid differs between the two.
  const Graph g = load_edge_list_file(data_path("zachary.edges"));
  const auto corpus = graph_corpus(g, 10, 80, 4);
  TrainConfig exact;
  exact.dim = 32;
  exact.seed = 5;
  TrainConfig table = exact;
  table.deterministic = false;
  const auto a = train(corpus, exact, g.node_count());
  const auto b = train(corpus, table, g.node_count());
  double worst = 0.0;
  for (NodeId i = 0; i < g.node_count(); ++i) {
    for (NodeId j = i + 1; j < g.node_count(); ++j) {
      worst = std::max(worst, std::abs(cosine_similarity(a.row(i), a.row(j)) - cosine_similarity(b.row(i), b.row(j))));
    }
  }
  EXPECT_LT(worst, 1e-3);
}

TEST(Train, HogwildWorkersProduceFiniteVectors) {
  const Graph g = load_edge_list_file(data_path("lesmis.edges"));
  TrainConfig cfg;
  cfg.dim = 16;
  cfg.deterministic = false;
  cfg.threads = 3;
  const auto e = train(graph_corpus(g, 10, 80, 1), cfg, g.node_count());
  ASSERT_EQ(e.size(), g.node_count());
  for (float x : e.input) ASSERT_TRUE(std::isfinite(x));
}

TEST(Word2Vec, RoundTripsThroughTheGraphOrder) {
  const Graph g = load_edge_list_file(data_path("florentine.edges"));
  TrainConfig cfg;
  cfg.dim = 7;
  auto e = train(graph_corpus(g, 5, 20, 1), cfg, g.node_count());
  e.labels = g.labels();
  std::stringstream buf;
  write_word2vec(e, buf);
  std::string header;
  std::getline(std::istringstream(buf.str()), header);
  EXPECT_EQ(header, "15 7");
  const auto back = read_word2vec(buf, &g);
  EXPECT_EQ(back.labels, g.labels());
  ASSERT_EQ(back.input.size(), e.input.size());
  for (std::size_t i = 0; i < e.input.size(); ++i) {
    EXPECT_NEAR(back.input[i], e.input[i], 1e-5 * std::max(1.0f, std::abs(e.input[i])));
  }
}

TEST(Word2Vec, ReorderedRowsMapToNodeIds) {
  const Graph g = nclid::testing::labeled({"x", "y"}, {{0, 1}});
  std::istringstream in("2 2\ny 3 4\nx 1 2\n");
  const auto e = read_word2vec(in, &g);
  EXPECT_EQ(e.input, (std::vector<float>{1, 2, 3, 4}));
}

TEST(Word2Vec, RejectsMalformedFiles) {
  const Graph g = nclid::testing::labeled({"x", "y"}, {{0, 1}});
  auto read = [&](const char* text) {
    std::istringstream in(text);
    return read_word2vec(in, &g);
  };
  EXPECT_THROW(read(""), ParseError);
  EXPECT_THROW(read("2\n"), ParseError);
  EXPECT_THROW(read("2 2\nx 1\ny 1 2\n"), ParseError);
  EXPECT_THROW(read("2 2\nx 1 2\n"), ParseError);
  EXPECT_THROW(read("2 2\nx 1 2\nz 1 2\n"), InputError);
  EXPECT_THROW(read("2 2\nx 1 2\nx 1 2\n"), InputError);
  EXPECT_THROW(read("1 2\nx 1 2\n"), InputError);
}
