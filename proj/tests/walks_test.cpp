#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "nclid/community.hpp"
#include "nclid/error.hpp"
#include "nclid/walks.hpp"
#include "oracles.hpp"
#include "test_graphs.hpp"

using namespace nclid;
using nclid::testing::data_path;

namespace {

// t-v-x triangle with a pendant y on v.
Graph triangle_with_pendant() { return nclid::testing::labeled({"t", "v", "x", "y"}, {{0, 1}, {1, 2}, {0, 2}, {1, 3}}); }

std::string corpus_text(const Graph& g, const WalkCorpus& c) {
  std::ostringstream out;
  write_corpus(g, c, out);
  return out.str();
}

}  // namespace

TEST(WalkBudget, NumberOfWalks) {
  EXPECT_EQ(nrw(0.0, 10), 10);
  EXPECT_EQ(nrw(0.5, 10), 15);
  EXPECT_EQ(nrw(6.51, 10), 75);
}

TEST(WalkBudget, WalkLength) {
  EXPECT_EQ(lrw(0.0, 80), 80);
  EXPECT_EQ(lrw(1.0, 80), 40);
  EXPECT_EQ(lrw(0.48, 80), 54);
  EXPECT_EQ(lrw(200.0, 80), 1);
}

TEST(WalkBudget, StepsPerOriginStayNearThePlainBudget) {
  // Both factors are floors of (1 + lid) B and W / (1 + lid), so the product
  // loses at most one walk and one step per walk against B * W.
  const int b = 10, w = 80;
  for (double lid = 0.0; lid <= 10.0; lid += 0.01) {
    const int steps = nrw(lid, b) * lrw(lid, w);
    EXPECT_LE(steps, b * w) << lid;
    EXPECT_GE(steps, b * w - (1 + lid) * b - w / (1 + lid)) << lid;
  }
}

TEST(TransitionWeights, UnitParametersAreUniform) {
  const Graph g = triangle_with_pendant();
  WalkConfig cfg;
  EXPECT_EQ(transition_weights(g, NodeId{0}, 1, cfg), (std::vector<double>{1, 1, 1}));
}

TEST(TransitionWeights, ThreeDistanceCases) {
  const Graph g = triangle_with_pendant();
  WalkConfig cfg;
  cfg.p_base = 0.25;
  cfg.q_base = 4.0;
  // Neighbors of v in id order: t (return), x (adjacent to t), y (two hops).
  EXPECT_EQ(transition_weights(g, NodeId{0}, 1, cfg), (std::vector<double>{4.0, 1.0, 0.25}));
}

TEST(TransitionWeights, FirstStepIsUniform) {
  const Graph g = triangle_with_pendant();
  WalkConfig cfg;
  cfg.p_base = 0.25;
  cfg.q_base = 4.0;
  EXPECT_EQ(transition_weights(g, std::nullopt, 1, cfg), (std::vector<double>{1, 1, 1}));
}

TEST(TransitionWeights, ElasticRulesReduceToBaseInsideCommunities) {
  const Graph g = triangle_with_pendant();
  const std::vector<double> lid{0.7, 0.9, 0.3, 1.1};
  const std::vector<NaturalCommunity> all(4, NaturalCommunity{0, {0, 1, 2, 3}, 1.0});
  WalkConfig plain;
  plain.p_base = 0.5;
  plain.q_base = 2.0;
  WalkConfig elastic = plain;
  elastic.variant = WalkVariant::LidRwpq;
  EXPECT_EQ(transition_weights(g, NodeId{0}, 1, elastic, {lid, all}), transition_weights(g, NodeId{0}, 1, plain));
}

TEST(TransitionWeights, ElasticRulesAddNcLidAcrossCommunities) {
  const Graph g = triangle_with_pendant();
  const std::vector<double> lid{0.7, 0.9, 0.3, 1.1};
  std::vector<NaturalCommunity> comm(4);
  for (NodeId v = 0; v < 4; ++v) comm[v] = NaturalCommunity{v, {v}, 0.0};
  WalkConfig cfg;
  cfg.variant = WalkVariant::LidRwpq;
  cfg.p_base = 0.5;
  cfg.q_base = 2.0;
  // Stepping from v=1 after t=0: v is outside t's community, so p = 0.5 + lid(t);
  // y is outside v's community, so q = 2 + lid(v). x keeps weight 1.
  const auto w = transition_weights(g, NodeId{0}, 1, cfg, {lid, comm});
  EXPECT_DOUBLE_EQ(w[0], 1.0 / (0.5 + 0.7));
  EXPECT_DOUBLE_EQ(w[1], 1.0);
  EXPECT_DOUBLE_EQ(w[2], 1.0 / (2.0 + 0.9));
}

TEST(TransitionWeights, RejectsBadInput) {
  const Graph g = triangle_with_pendant();
  WalkConfig cfg;
  EXPECT_THROW(transition_weights(g, NodeId{3}, 0, cfg), InputError);  // y is not adjacent to t
  EXPECT_THROW(transition_weights(g, std::nullopt, 9, cfg), InputError);
  cfg.variant = WalkVariant::LidRwpq;
  EXPECT_THROW(transition_weights(g, NodeId{0}, 1, cfg), InputError);
  cfg.p_base = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(SampleCorpus, PlainZacharyShape) {
  const Graph g = load_edge_list_file(data_path("zachary.edges"));
  WalkConfig cfg;
  const auto corpus = sample_corpus(g, cfg);
  ASSERT_EQ(corpus.walks.size(), 340u);
  for (std::size_t i = 0; i < corpus.walks.size(); ++i) {
    const auto& w = corpus.walks[i];
    EXPECT_EQ(w.origin, i / 10);
    EXPECT_EQ(w.nodes.front(), w.origin);
    EXPECT_EQ(w.nodes.size(), 80u);
    for (std::size_t j = 1; j < w.nodes.size(); ++j) ASSERT_TRUE(g.has_link(w.nodes[j - 1], w.nodes[j]));
  }
}

TEST(SampleCorpus, ElasticWalksFollowLinksAndBudgets) {
  const Graph g = load_edge_list_file(data_path("florentine.edges"));
  const auto table = nc_lid_all(g);
  const auto lid = table.values();
  for (WalkVariant v : {WalkVariant::LidRw, WalkVariant::LidRwpq}) {
    WalkConfig cfg;
    cfg.variant = v;
    cfg.p_base = 0.25;
    cfg.q_base = 4.0;
    const auto corpus = sample_corpus(g, cfg, {lid, table.communities});
    std::size_t expected = 0;
    std::vector<int> per_origin(g.node_count(), 0);
    for (NodeId n = 0; n < g.node_count(); ++n) expected += static_cast<std::size_t>(nrw(lid[n], 10));
    ASSERT_EQ(corpus.walks.size(), expected);
    for (const auto& w : corpus.walks) {
      ++per_origin[w.origin];
      EXPECT_EQ(w.nodes.size(), static_cast<std::size_t>(lrw(lid[w.origin], 80)));
      for (std::size_t j = 1; j < w.nodes.size(); ++j) ASSERT_TRUE(g.has_link(w.nodes[j - 1], w.nodes[j]));
    }
    for (NodeId n = 0; n < g.node_count(); ++n) EXPECT_EQ(per_origin[n], nrw(lid[n], 10));
  }
}

TEST(SampleCorpus, ZeroLidReproducesPlainCorpus) {
  const Graph g = load_edge_list_file(data_path("lesmis.edges"));
  const std::vector<double> zeros(g.node_count(), 0.0);
  WalkConfig plain;
  plain.p_base = 0.5;
  plain.q_base = 2.0;
  plain.seed = 42;
  WalkConfig elastic = plain;
  elastic.variant = WalkVariant::LidRw;
  EXPECT_EQ(corpus_text(g, sample_corpus(g, plain)), corpus_text(g, sample_corpus(g, elastic, {zeros, {}})));
}

TEST(SampleCorpus, SameSeedSameCorpusForAnyThreadCount) {
  const Graph g = load_edge_list_file(data_path("lesmis.edges"));
  const auto table = nc_lid_all(g);
  const auto lid = table.values();
  WalkConfig cfg;
  cfg.variant = WalkVariant::LidRwpq;
  cfg.seed = 5;
  const auto reference = corpus_text(g, sample_corpus(g, cfg, {lid, table.communities}, 1));
  for (unsigned t : {2u, 4u, 7u}) {
    EXPECT_EQ(corpus_text(g, sample_corpus(g, cfg, {lid, table.communities}, t)), reference);
  }
  cfg.seed = 6;
  EXPECT_NE(corpus_text(g, sample_corpus(g, cfg, {lid, table.communities}, 1)), reference);
}

TEST(SampleCorpus, IsolatedNodesYieldNoWalks) {
  const Graph g = Graph::from_links(4, std::vector<Link>{{0, 1}, {1, 2}});
  WalkConfig cfg;
  cfg.base_num_walks = 3;
  cfg.base_walk_length = 5;
  const auto corpus = sample_corpus(g, cfg);
  EXPECT_EQ(corpus.walks.size(), 9u);
  for (const auto& w : corpus.walks) EXPECT_NE(w.origin, 3u);
}

TEST(SampleCorpus, StepFrequenciesMatchTransitionWeights) {
  // t=0: {v, x}; v=1: {t, x, y}; x=2: {t, v}; y=3: {v}.
  const Graph g = triangle_with_pendant();
  WalkConfig cfg;
  cfg.base_num_walks = 250000;
  cfg.base_walk_length = 3;
  cfg.p_base = 0.25;
  cfg.q_base = 4.0;
  const auto freq = oracle::empirical_step(g, 0, 1, cfg, {}, 8);
  EXPECT_LT(oracle::total_variation(freq, transition_weights(g, NodeId{0}, 1, cfg)), 1e-2);
}

TEST(SampleCorpus, ElasticStepFrequenciesMatchTransitionWeights) {
  const Graph g = triangle_with_pendant();
  const std::vector<double> lid{0.7, 0.9, 0.3, 1.1};
  std::vector<NaturalCommunity> comm(4);
  for (NodeId v = 0; v < 4; ++v) comm[v] = NaturalCommunity{v, {v}, 0.0};
  WalkConfig cfg;
  cfg.variant = WalkVariant::LidRwpq;
  cfg.base_num_walks = 150000;
  cfg.base_walk_length = 6;  // walks from t keep 3 nodes
  cfg.p_base = 2.0;
  cfg.q_base = 0.5;
  const LidContext ctx{lid, comm};
  const auto freq = oracle::empirical_step(g, 0, 1, cfg, ctx, 8);
  EXPECT_LT(oracle::total_variation(freq, transition_weights(g, NodeId{0}, 1, cfg, ctx)), 1e-2);
}
