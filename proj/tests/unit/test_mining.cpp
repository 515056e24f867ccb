#include <gtest/gtest.h>

#include <map>
#include <set>

#include "chronnet/datagen.hpp"
#include "chronnet/error.hpp"
#include "chronnet/mining.hpp"
#include "chronnet/random.hpp"
#include "oracles.hpp"

using namespace chronnet;

namespace {

const GridSpec kCells = GridSpec::rect({0, 100, 0, 1}, 100, 1);

Chronnet graph(std::vector<std::tuple<int, int, std::uint64_t>> edges, std::set<int> extra = {}) {
  std::set<CellId> nodes;
  for (int e : extra) nodes.insert(CellId{e});
  std::vector<Link> links;
  for (auto [a, b, w] : edges) {
    nodes.insert(CellId{a});
    nodes.insert(CellId{b});
    links.push_back({CellId{std::min(a, b)}, CellId{std::max(a, b)}, w});
  }
  return Chronnet(false, kCells, {nodes.begin(), nodes.end()}, links);
}

void clique(std::vector<std::tuple<int, int, std::uint64_t>>& e, int first, int n, std::uint64_t w = 1) {
  for (int i = first; i < first + n; ++i) {
    for (int j = i + 1; j < first + n; ++j) e.emplace_back(i, j, w);
  }
}

Chronnet two_cliques() {
  std::vector<std::tuple<int, int, std::uint64_t>> e;
  clique(e, 0, 5);
  clique(e, 5, 5);
  e.emplace_back(4, 5, 1);
  return graph(e);
}

// Q = sum_c [w_in(c) / W - (s_c / 2W)^2] by direct summation over links
double modularity_oracle(const Chronnet& c, const std::vector<int>& label) {
  std::map<int, double> in, s;
  double W = 0;
  for (const auto& l : c.links()) {
    if (l.src == l.dst) continue;
    const int a = label[c.index_of(l.src)], b = label[c.index_of(l.dst)];
    const auto w = static_cast<double>(l.weight);
    W += w;
    s[a] += w;
    s[b] += w;
    if (a == b) in[a] += w;
  }
  double q = 0;
  for (const auto& [k, sk] : s) q += in[k] / W - (sk / (2 * W)) * (sk / (2 * W));
  return q;
}

// pair-counting form of the adjusted Rand index
double ari_oracle(const std::vector<int>& a, const std::vector<int>& b) {
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const bool sa = a[i] == a[j], sb = b[i] == b[j];
      (sa && sb ? n11 : sa ? n10 : sb ? n01 : n00) += 1;
    }
  }
  const double den = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
  return den == 0 ? 1.0 : 2 * (n00 * n11 - n01 * n10) / den;
}

bool same_grouping(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

}  // namespace

TEST(Modularity, TwoCliquesByHand) {
  const auto c = two_cliques();
  const std::vector<int> split{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  EXPECT_NEAR(modularity(c, split), 19.0 / 42, 1e-12);
  EXPECT_NEAR(modularity(c, std::vector<int>(10, 0)), 0.0, 1e-12);
  EXPECT_THROW(modularity(c, std::vector<int>(3, 0)), Error);
}

TEST(FastGreedy, TwoCliques) {
  const auto c = two_cliques();
  const auto d = fast_greedy(c);
  ASSERT_EQ(d.merges.size(), 9u);
  EXPECT_EQ(d.best_community_count(), 2u);
  EXPECT_NEAR(d.best_q, 19.0 / 42, 1e-12);
  // the last merge joins the cliques and costs exactly the split's Q
  EXPECT_NEAR(d.merges.back().delta_q, -19.0 / 42, 1e-12);
  EXPECT_NEAR(d.merges.back().q_after, 0.0, 1e-12);
  const auto best = best_partition(d);
  EXPECT_EQ(best.label, (std::vector<int>{0, 0, 0, 0, 0, 1, 1, 1, 1, 1}));
  EXPECT_EQ(best.community_count, 2u);
  EXPECT_EQ(best.label_of(CellId{7}), 1);
  EXPECT_EQ(best.label_of(CellId{70}), -1);
}

TEST(FastGreedy, SingleClique) {
  std::vector<std::tuple<int, int, std::uint64_t>> e;
  clique(e, 0, 5);
  const auto d = fast_greedy(graph(e));
  EXPECT_EQ(d.best_community_count(), 1u);
  EXPECT_NEAR(d.best_q, 0.0, 1e-12);
  EXPECT_NEAR(d.q_initial, -0.2, 1e-12);
}

TEST(FastGreedy, NeedsLinks) {
  EXPECT_THROW(fast_greedy(graph({{1, 1, 4}}, {2})), Error);
  EXPECT_THROW(label_propagation(graph({}, {1, 2}), 1), Error);
}

TEST(FastGreedy, DeterministicTieBreak) {
  // a 6-cycle: every first merge has the same delta Q, the lowest pair wins
  const auto c = graph({{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {3, 4, 1}, {4, 5, 1}, {0, 5, 1}});
  const auto d = fast_greedy(c);
  EXPECT_EQ(d.merges.front().into, 0u);
  EXPECT_EQ(d.merges.front().from, 1u);
  EXPECT_EQ(fast_greedy(c).merges.size(), d.merges.size());
}

TEST(Dendrogram, IncrementalQMatchesDirect) {
  Rng rng(3);
  for (int round = 0; round < 25; ++round) {
    // includes disconnected pieces and self-loops
    auto c = oracle::random_connected(rng, 3 + rng.below(25), 0.1, 6);
    std::vector<Link> links = c.links();
    links.push_back({c.nodes()[0], c.nodes()[0], 9});
    std::vector<CellId> nodes = c.nodes();
    const CellId a{90}, b{91}, lone{95};
    nodes.insert(nodes.end(), {a, b, lone});
    links.push_back({a, b, 2});
    const Chronnet g(false, GridSpec::rect({0, 1, 0, 1}, 100, 1), nodes, links);

    const auto d = fast_greedy(g);
    ASSERT_EQ(d.merges.size(), g.node_count() - 1);
    const auto n = d.leaves.size();
    for (std::size_t k = 1; k <= n; ++k) {
      const auto p = cut_dendrogram(d, k);
      ASSERT_EQ(p.community_count, k);
      const double q = k == n ? d.q_initial : d.merges[n - k - 1].q_after;
      EXPECT_NEAR(modularity_oracle(g, p.label), q, 1e-9);
      EXPECT_NEAR(p.modularity, q, 1e-9);
    }
    EXPECT_NEAR(best_partition(d).modularity, d.best_q, 1e-12);
  }
}

TEST(Dendrogram, CutsAreNested) {
  Rng rng(4);
  for (int round = 0; round < 10; ++round) {
    const auto c = oracle::random_connected(rng, 5 + rng.below(25), 0.15, 9);
    const auto d = fast_greedy(c);
    for (std::size_t k = 2; k <= d.leaves.size(); ++k) {
      const auto fine = cut_dendrogram(d, k);
      const auto coarse = cut_dendrogram(d, k - 1);
      std::map<int, int> parent;
      for (std::size_t i = 0; i < fine.label.size(); ++i) {
        const auto [it, fresh] = parent.try_emplace(fine.label[i], coarse.label[i]);
        ASSERT_EQ(it->second, coarse.label[i]);
      }
    }
  }
}

TEST(Dendrogram, CutExtremes) {
  const auto d = fast_greedy(two_cliques());
  const auto one = cut_dendrogram(d, 1);
  EXPECT_EQ(one.community_count, 1u);
  EXPECT_EQ(one.label, std::vector<int>(10, 0));
  const auto all = cut_dendrogram(d, 10);
  EXPECT_EQ(all.label, (std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9}));
  EXPECT_THROW(cut_dendrogram(d, 0), Error);
  EXPECT_THROW(cut_dendrogram(d, 11), Error);
}

TEST(LabelPropagation, TwoCliquesEverySeed) {
  const auto c = two_cliques();
  const std::vector<int> split{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto p = label_propagation(c, seed);
    ASSERT_EQ(p.label, split) << "seed " << seed;
    EXPECT_NEAR(p.modularity, 19.0 / 42, 1e-12);
  }
}

TEST(LabelPropagation, CompleteGraphAndIsolatedNodes) {
  std::vector<std::tuple<int, int, std::uint64_t>> e;
  clique(e, 0, 6);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    EXPECT_EQ(label_propagation(graph(e), seed).community_count, 1u);
  }
  const auto p = label_propagation(graph(e, {20, 30}), 5);
  EXPECT_EQ(p.community_count, 3u);
  EXPECT_EQ(p.label_of(CellId{20}), 1);
  EXPECT_EQ(p.label_of(CellId{30}), 2);
}

TEST(LabelPropagation, SeededAndStable) {
  Rng rng(6);
  for (int round = 0; round < 10; ++round) {
    const auto c = oracle::random_connected(rng, 10 + rng.below(20), 0.1, 5);
    const auto a = label_propagation(c, 42);
    EXPECT_EQ(a.label, label_propagation(c, 42).label);
    // every node holds one of its heaviest neighbor labels
    const oracle::Dense d(c);
    for (std::size_t i = 0; i < d.n; ++i) {
      std::map<int, std::uint64_t> votes;
      for (std::size_t j = 0; j < d.n; ++j) {
        if (d.w[i][j]) votes[a.label[j]] += d.w[i][j];
      }
      std::uint64_t best = 0;
      for (auto [l, v] : votes) best = std::max(best, v);
      EXPECT_EQ(votes[a.label[i]], best);
    }
    EXPECT_NEAR(a.modularity, modularity_oracle(c, a.label), 1e-12);
  }
}

TEST(Correction, Examples) {
  const std::vector<int> spike{1, 1, 2, 1, 1};
  EXPECT_EQ(correct_series(spike, 1), (std::vector<int>{1, 1, 1, 1, 1}));
  const std::vector<int> alt{1, 2, 1, 2, 1};
  EXPECT_EQ(correct_series(alt, 1), (std::vector<int>{1, 1, 2, 1, 1}));
  const std::vector<int> flat(9, 4);
  EXPECT_EQ(correct_series(flat, 3), flat);
  // radius 3: position 3 (0-based) sees three neighbors on each side
  const std::vector<int> wide{0, 0, 0, 5, 0, 0, 0, 7};
  EXPECT_EQ(correct_series(wide, 3), (std::vector<int>{0, 0, 0, 0, 0, 0, 0, 7}));
  const std::vector<int> mixed{0, 0, 1, 5, 0, 0, 0};
  EXPECT_EQ(correct_series(mixed, 3), mixed);
}

TEST(Correction, Errors) {
  const std::vector<int> v(7, 0);
  EXPECT_THROW(correct_series(v, 2), Error);
  EXPECT_THROW(correct_series(v, 0), Error);
  EXPECT_THROW(correct_series(std::vector<int>(6, 0), 3), Error);
  EXPECT_NO_THROW(correct_series(v, 3));
}

TEST(Correction, IdempotentOnLongRuns) {
  Rng rng(8);
  for (int round = 0; round < 50; ++round) {
    const std::size_t delta = 1 + 2 * rng.below(3);
    std::vector<int> s;
    while (s.size() < 400) {
      const int label = static_cast<int>(rng.below(4));
      s.insert(s.end(), 2 * delta + 1 + rng.below(20), label);
    }
    const auto once = correct_series(s, delta);
    EXPECT_EQ(correct_series(once, delta), once);
    // isolated flips far from run edges are repaired
    auto noisy = once;
    for (std::size_t i = delta; i + delta < noisy.size(); i += 4 * delta + 3) {
      bool inside = true;
      for (std::size_t j = i - delta; j <= i + delta; ++j) inside = inside && once[j] == once[i];
      if (inside) noisy[i] = 99;
    }
    EXPECT_EQ(correct_series(noisy, delta), once);
  }
}

TEST(ChangePoints, Examples) {
  EXPECT_EQ(change_points(std::vector<int>{1, 1, 2, 2}), (std::vector<std::size_t>{3}));
  EXPECT_TRUE(change_points(std::vector<int>{5, 5, 5}).empty());
  EXPECT_EQ(change_points(std::vector<int>{0, 1, 0}), (std::vector<std::size_t>{2, 3}));
  EXPECT_TRUE(change_points(std::vector<int>{}).empty());
}

TEST(ClusterEvents, SeriesAndNoise) {
  const auto c = two_cliques();
  const auto p = best_partition(fast_greedy(c));
  std::vector<Event> ev;
  for (int cell : {0, 1, 7, 9, 50, 3}) ev.push_back({double(ev.size() + 1), cell + 0.5, 0.5, {}});
  const auto s = cluster_events(EventSet(ev), kCells, p);
  EXPECT_EQ(s.labels, (std::vector<int>{0, 0, 1, 1, kNoiseLabel, 0}));
  EXPECT_EQ(s.noise_count, 1u);

  std::vector<Event> same;
  for (int i = 0; i < 5; ++i) same.push_back({double(i), 2.5, 0.5, {}});
  const auto flat = cluster_events(EventSet(same), kCells, p);
  EXPECT_EQ(flat.labels, std::vector<int>(5, 0));
}

TEST(Outliers, StarAndTies) {
  std::vector<std::tuple<int, int, std::uint64_t>> star;
  for (int i = 1; i < 100; ++i) star.emplace_back(0, i, 1);
  const auto r = outlier_nodes(graph(star), OutlierMetric::Degree, 0.01);
  EXPECT_EQ(r.nodes, (std::vector<CellId>{CellId{0}}));
  EXPECT_EQ(r.cutoff, 99u);
  EXPECT_FALSE(r.degenerate);

  std::vector<std::tuple<int, int, std::uint64_t>> ring;
  for (int i = 0; i < 50; ++i) ring.emplace_back(i, (i + 1) % 50, 1 + (i % 2));
  const auto all = outlier_nodes(graph(ring), OutlierMetric::Degree, 0.02);
  EXPECT_EQ(all.nodes.size(), 50u);
  EXPECT_TRUE(all.degenerate);
  // strengths on the ring are all 3 as well
  EXPECT_TRUE(outlier_nodes(graph(ring), OutlierMetric::Strength, 0.02).degenerate);

  const auto heavy = outlier_nodes(graph({{0, 1, 1}, {1, 2, 1}, {2, 3, 8}, {3, 3, 5}}), OutlierMetric::Strength, 0.25);
  EXPECT_EQ(heavy.nodes, (std::vector<CellId>{CellId{3}}));
  EXPECT_EQ(heavy.cutoff, 13u);

  EXPECT_THROW(outlier_nodes(graph(ring), OutlierMetric::Degree, 0.0), Error);
  EXPECT_THROW(outlier_nodes(graph(ring), OutlierMetric::Degree, 1.0), Error);
  EXPECT_EQ(parse_outlier_metric("strength"), OutlierMetric::Strength);
  EXPECT_THROW(parse_outlier_metric("pagerank"), Error);
}

TEST(Ari, KnownValuesAndOracle) {
  const std::vector<int> a{0, 0, 0, 1, 1, 1};
  const std::vector<int> b{0, 0, 1, 1, 2, 2};
  EXPECT_NEAR(adjusted_rand_index(a, b), 8.0 / 33, 1e-12);
  const std::vector<int> relabeled{7, 7, 7, 3, 3, 3};
  EXPECT_DOUBLE_EQ(adjusted_rand_index(a, relabeled), 1.0);
  EXPECT_THROW(adjusted_rand_index(a, std::vector<int>{1}), Error);

  Rng rng(12);
  for (int round = 0; round < 100; ++round) {
    const auto n = 2 + rng.below(60);
    std::vector<int> x(n), y(n);
    const auto kx = 1 + rng.below(5), ky = 1 + rng.below(5);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<int>(rng.below(kx));
      y[i] = rng.below(3) == 0 ? static_cast<int>(rng.below(ky)) : x[i];
    }
    EXPECT_NEAR(adjusted_rand_index(x, y), ari_oracle(x, y), 1e-9);
    if (same_grouping(x, y)) EXPECT_DOUBLE_EQ(adjusted_rand_index(x, y), 1.0);
  }
}

TEST(Scenario, FourPeriodEndToEnd) {
  const auto spec = make_scenario("four-period", 1);
  const auto le = generate_labeled_events(spec);
  const auto net = undirect(build(le.events, spec.grid));
  const auto d = fast_greedy(net);
  EXPECT_EQ(d.best_community_count(), 4u);
  const auto series = cluster_events(le.events, spec.grid, best_partition(d));
  EXPECT_EQ(series.noise_count, 0u);
  EXPECT_DOUBLE_EQ(adjusted_rand_index(correct_series(series.labels, 3), le.period), 1.0);
}
