#include <gtest/gtest.h>

#include <cmath>

#include "chronnet/chronnet.hpp"
#include "chronnet/datagen.hpp"
#include "chronnet/error.hpp"
#include "chronnet/random.hpp"
#include "oracles.hpp"

using namespace chronnet;

namespace {

const GridSpec kLine = GridSpec::rect({0, 10, 0, 1}, 10, 1);

// one event per (t, cell) pair, placed at the cell center of kLine
EventSet events(const std::vector<std::pair<double, int>>& tc) {
  std::vector<Event> ev;
  for (auto [t, c] : tc) ev.push_back({t, c + 0.5, 0.5, {}});
  return EventSet(std::move(ev));
}

EventSet sequence(const std::vector<int>& cells) {
  std::vector<std::pair<double, int>> tc;
  for (std::size_t i = 0; i < cells.size(); ++i) tc.emplace_back(static_cast<double>(i + 1), cells[i]);
  return events(tc);
}

CellId C(std::int64_t v) { return CellId{v}; }

EventSet random_events(Rng& rng, std::size_t n, const GridSpec& g, bool parallel) {
  std::vector<Event> ev;
  double t = 0;
  const auto& b = g.bbox();
  for (std::size_t i = 0; i < n; ++i) {
    if (!parallel || rng.below(3) == 0 || i == 0) t += 1 + static_cast<double>(rng.below(3));
    ev.push_back({t, b.xmin + rng.uniform01() * (b.xmax - b.xmin), b.ymin + rng.uniform01() * (b.ymax - b.ymin), {}});
  }
  return EventSet(std::move(ev));
}

Chronnet manual(bool directed, std::vector<Link> links) {
  std::set<CellId> nodes;
  for (const auto& l : links) nodes.insert(l.src), nodes.insert(l.dst);
  return Chronnet(directed, kLine, {nodes.begin(), nodes.end()}, std::move(links));
}

std::vector<std::uint64_t> weights(const Chronnet& c) {
  std::vector<std::uint64_t> w;
  for (const auto& l : c.links()) w.push_back(l.weight);
  return w;
}

}  // namespace

TEST(Build, ConsecutiveCells) {
  const auto c = build(sequence({1, 2, 1, 2, 3}), kLine);
  EXPECT_TRUE(c.directed());
  EXPECT_EQ(c.nodes(), (std::vector<CellId>{C(1), C(2), C(3)}));
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(1), C(2), 2}, {C(2), C(1), 1}, {C(2), C(3), 1}}));
  EXPECT_EQ(c.weight(C(1), C(2)), 2u);
  EXPECT_EQ(c.weight(C(3), C(2)), 0u);
}

TEST(Build, SingleEvent) {
  const auto c = build(sequence({4}), kLine);
  EXPECT_EQ(c.node_count(), 1u);
  EXPECT_EQ(c.link_count(), 0u);
}

TEST(Build, EmptyEventSet) {
  const auto c = build(EventSet{}, kLine);
  EXPECT_EQ(c.node_count(), 0u);
  EXPECT_EQ(c.link_count(), 0u);
}

TEST(Build, ParallelGroupsLinkAcross) {
  const auto c = build(events({{1, 0}, {1, 1}, {2, 2}}), kLine);
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(0), C(2), 1}, {C(1), C(2), 1}}));
}

TEST(Build, NoLinksInsideAGroup) {
  const auto c = build(events({{1, 0}, {1, 1}, {1, 2}}), kLine);
  EXPECT_EQ(c.node_count(), 3u);
  EXPECT_EQ(c.link_count(), 0u);
}

TEST(Build, RepeatedCellInGroupCountsOnce) {
  const auto c = build(events({{1, 0}, {1, 0}, {2, 3}, {2, 3}, {2, 0}}), kLine);
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(0), C(0), 1}, {C(0), C(3), 1}}));
}

TEST(Build, OffsetTwoSelfLoop) {
  const auto c = build(sequence({1, 2, 1}), kLine, {.h = 2});
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(1), C(1), 1}}));
  EXPECT_EQ(c.meta().h, 2u);
}

TEST(Build, OffsetRunsOverGroups) {
  // groups {0,1} {2} {3}: h=2 pairs group 1 with group 3 and group 2 with nothing
  const auto c = build(events({{1, 0}, {1, 1}, {2, 2}, {3, 3}}), kLine, {.h = 2});
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(0), C(3), 1}, {C(1), C(3), 1}}));
}

TEST(Build, DistanceLimit) {
  const auto es = sequence({0, 1, 5, 6, 0});
  const auto near = build(es, kLine, {.d_max = 1.0});
  EXPECT_EQ(near.links(), (std::vector<Link>{{C(0), C(1), 1}, {C(5), C(6), 1}}));
  EXPECT_EQ(near.node_count(), 4u);
  EXPECT_EQ(build(es, kLine, {.d_max = 0.0}).link_count(), 0u);
}

TEST(Build, AllCells) {
  const auto c = build(sequence({1, 2}), kLine, {.all_cells = true});
  EXPECT_EQ(c.node_count(), 10u);
  EXPECT_EQ(c.link_count(), 1u);
}

TEST(Build, Preconditions) {
  std::vector<Event> ev{{2, 0.5, 0.5, {}}, {1, 0.5, 0.5, {}}};
  EXPECT_THROW(build(EventSet(ev), kLine), Error);
  EXPECT_THROW(build(sequence({1, 2}), kLine, {.h = 0}), Error);
  EXPECT_THROW(build(events({{1, 20}}), kLine), Error);
  EXPECT_THROW(build_parallel(sequence({1, 2}), kLine, {}, 0), Error);
}

TEST(Build, MatchesPairCountingOracle) {
  Rng rng(2024);
  for (int round = 0; round < 60; ++round) {
    const auto g = round % 3 == 2 ? GridSpec::hex({0, 6, 0, 4}, 0.9)
                                  : GridSpec::rect({0, 1, 0, 1}, 1 + int(rng.below(8)), 1 + int(rng.below(8)));
    const bool parallel = round % 2 == 1;
    const auto es = random_events(rng, 1 + rng.below(300), g, parallel);
    const std::size_t h = 1 + rng.below(3);
    const double d_max = round % 4 == 3 ? 1.5 * rng.uniform01() : std::numeric_limits<double>::infinity();
    const auto c = build(es, g, {.h = h, .d_max = d_max});
    ASSERT_TRUE(oracle::as_oracle(c) == oracle::chronnet_by_pairs(es, g, h, d_max)) << "round " << round;
  }
}

TEST(Build, ParallelBuildIsIdentical) {
  Rng rng(7);
  for (int round = 0; round < 30; ++round) {
    const auto g = GridSpec::rect({0, 1, 0, 1}, 5, 4);
    const auto es = random_events(rng, rng.below(1000), g, round % 2 == 1);
    const BuildOptions opts{.h = 1 + rng.below(3)};
    const auto seq = build(es, g, opts);
    for (std::size_t chunks : {1, 2, 3, 4, 8, 16}) {
      ASSERT_EQ(build_parallel(es, g, opts, chunks, 4), seq) << round << " chunks " << chunks;
    }
    ASSERT_EQ(build_parallel(es, g, opts, es.size() + 5, 2), seq);
  }
}

TEST(Build, WeightConservation) {
  for (const auto& name : {"uniform", "power-law", "exponential", "four-period"}) {
    const auto spec = make_scenario(name, 12);
    const auto es = generate_events(spec);
    EXPECT_EQ(build(es, spec.grid).total_weight(), es.size() - 1) << name;
  }
}

TEST(Build, InvariantUnderTieReordering) {
  Rng rng(31);
  const auto g = GridSpec::rect({0, 1, 0, 1}, 4, 4);
  for (int round = 0; round < 20; ++round) {
    auto ev = random_events(rng, 200, g, true).events();
    const auto base = build(EventSet(ev), g, {.h = 1 + rng.below(2)});
    // shuffle within each timestamp run; order in time and cells are preserved
    std::size_t a = 0;
    while (a < ev.size()) {
      std::size_t b = a;
      while (b < ev.size() && ev[b].t == ev[a].t) ++b;
      std::vector<Event> run(ev.begin() + a, ev.begin() + b);
      rng.shuffle(run);
      std::copy(run.begin(), run.end(), ev.begin() + a);
      a = b;
    }
    EXPECT_EQ(build(EventSet(ev), g, {.h = base.meta().h}), base);
  }
}

TEST(Build, FiniteDistanceIsSubgraph) {
  Rng rng(13);
  const auto g = GridSpec::rect({0, 1, 0, 1}, 6, 6);
  for (int round = 0; round < 20; ++round) {
    const auto es = random_events(rng, 400, g, round % 2 == 0);
    const auto full = build(es, g);
    const auto part = build(es, g, {.d_max = 0.4 * rng.uniform01()});
    for (const auto& l : part.links()) EXPECT_EQ(full.weight(l.src, l.dst), l.weight);
  }
}

TEST(Chronnet, CanonicalFormValidation) {
  EXPECT_THROW(manual(true, {{C(1), C(2), 0}}), Error);
  EXPECT_THROW(manual(true, {{C(1), C(2), 1}, {C(1), C(2), 3}}), Error);
  EXPECT_THROW(Chronnet(true, kLine, {C(1)}, {{C(1), C(2), 1}}), Error);
  EXPECT_THROW(Chronnet(false, kLine, {C(1), C(2)}, {{C(1), C(2), 1}, {C(2), C(1), 1}}), Error);
  const auto c = Chronnet(false, kLine, {C(3), C(1), C(2)}, {{C(2), C(1), 4}});
  EXPECT_EQ(c.nodes(), (std::vector<CellId>{C(1), C(2), C(3)}));
  EXPECT_EQ(c.links(), (std::vector<Link>{{C(1), C(2), 4}}));
  EXPECT_EQ(c.weight(C(2), C(1)), 4u);
  EXPECT_EQ(c.index_of(C(3)), 2u);
  EXPECT_THROW((void)c.index_of(C(7)), Error);
}

TEST(Prune, ThresholdExamples) {
  const auto c = manual(true, {{C(0), C(1), 1}, {C(1), C(2), 2}, {C(2), C(0), 5}});
  const auto p = prune(c, 1);
  EXPECT_EQ(weights(p), (std::vector<std::uint64_t>{2, 5}));
  EXPECT_EQ(p.node_count(), 3u);
  EXPECT_EQ(p.meta().tau, 1.0);
  EXPECT_EQ(prune(c, 0).links(), c.links());
  EXPECT_EQ(prune(c, 2.5).link_count(), 1u);
  EXPECT_THROW(prune(c, -1), Error);
}

TEST(Prune, MonotoneAndComposable) {
  Rng rng(17);
  const auto g = GridSpec::rect({0, 1, 0, 1}, 5, 5);
  const auto c = undirect(build(random_events(rng, 3000, g, false), g));
  for (double t1 : {0.0, 1.0, 3.0, 4.5, 8.0}) {
    for (double t2 : {0.0, 2.0, 4.0, 10.0}) {
      const auto a = prune(c, t1);
      const auto b = prune(c, t2);
      const auto& small = t1 <= t2 ? b : a;
      const auto& big = t1 <= t2 ? a : b;
      for (const auto& l : small.links()) EXPECT_EQ(big.weight(l.src, l.dst), l.weight);
      EXPECT_EQ(prune(a, t2).links(), prune(c, std::max(t1, t2)).links());
    }
  }
}

TEST(PruneQuantile, Examples) {
  std::vector<Link> ten;
  for (int i = 0; i < 10; ++i) ten.push_back({C(i), C((i + 1) % 10), static_cast<std::uint64_t>(i + 1)});
  const auto c = manual(true, ten);
  EXPECT_EQ(weights(prune_quantile(c, 0.2)), (std::vector<std::uint64_t>{9, 10}));
  EXPECT_EQ(prune_quantile(c, 1.0).links(), c.links());
  EXPECT_EQ(prune_quantile(c, 0.2).meta().keep_fraction, 0.2);
  // ceil(0.15 * 10) = 2
  EXPECT_EQ(prune_quantile(c, 0.15).link_count(), 2u);

  const auto ties = manual(true, {{C(0), C(1), 5}, {C(1), C(2), 5}, {C(2), C(3), 5}, {C(3), C(0), 1}});
  EXPECT_EQ(weights(prune_quantile(ties, 0.25)), (std::vector<std::uint64_t>{5, 5, 5}));
  EXPECT_THROW(prune_quantile(c, 0.0), Error);
  EXPECT_THROW(prune_quantile(c, 1.5), Error);
  EXPECT_EQ(prune_quantile(manual(true, {}), 0.5).link_count(), 0u);
}

TEST(Undirect, Examples) {
  const auto u = undirect(manual(true, {{C(0), C(1), 2}, {C(1), C(0), 1}}));
  EXPECT_FALSE(u.directed());
  EXPECT_EQ(u.links(), (std::vector<Link>{{C(0), C(1), 3}}));

  const auto loop = undirect(manual(true, {{C(4), C(4), 4}}));
  EXPECT_EQ(loop.links(), (std::vector<Link>{{C(4), C(4), 4}}));

  const auto empty = undirect(manual(true, {}));
  EXPECT_EQ(empty.node_count(), 0u);
  EXPECT_FALSE(empty.directed());

  EXPECT_THROW(undirect(u), Error);
}

TEST(Undirect, PreservesTotalWeightAndNodes) {
  Rng rng(23);
  const auto g = GridSpec::rect({0, 1, 0, 1}, 6, 3);
  for (int round = 0; round < 20; ++round) {
    const auto d = build(random_events(rng, 500, g, round % 2 == 0), g, {.h = 1 + rng.below(3)});
    const auto u = undirect(d);
    EXPECT_EQ(u.total_weight(), d.total_weight());
    EXPECT_EQ(u.nodes(), d.nodes());
    for (const auto& l : u.links()) {
      ASSERT_LE(l.src, l.dst);
      const auto expect = l.src == l.dst ? d.weight(l.src, l.src) : d.weight(l.src, l.dst) + d.weight(l.dst, l.src);
      ASSERT_EQ(l.weight, expect);
    }
  }
}

TEST(NodeRemoval, IsolatedAndExplicit) {
  const auto c = Chronnet(false, kLine, {C(0), C(1), C(2), C(3)}, {{C(0), C(1), 1}, {C(2), C(2), 3}});
  const auto r = remove_isolated(c);
  EXPECT_EQ(r.nodes(), (std::vector<CellId>{C(0), C(1)}));
  EXPECT_EQ(r.link_count(), 1u);
  const auto d = remove_nodes(c, {C(1), C(9)});
  EXPECT_EQ(d.nodes(), (std::vector<CellId>{C(0), C(2), C(3)}));
  EXPECT_EQ(d.links(), (std::vector<Link>{{C(2), C(2), 3}}));
}

TEST(Snapshots, TwoWindows) {
  const auto es = sequence({0, 1, 2, 3, 4, 0, 1, 2, 3, 4});
  const auto snaps = build_snapshots(es, kLine, {}, 5);
  ASSERT_EQ(snaps.size(), 2u);
  EXPECT_EQ(snaps[0].window, (TimeWindow{1, 6}));
  EXPECT_EQ(snaps[1].window, (TimeWindow{6, 11}));
  EXPECT_EQ(snaps[0].net.total_weight(), 4u);
  EXPECT_EQ(snaps[1].net.total_weight(), 4u);
  EXPECT_EQ(snaps[1].net.meta().window, (TimeWindow{6, 11}));
}

TEST(Snapshots, WideWindowEqualsBuild) {
  const auto es = sequence({3, 1, 4, 1, 5, 9, 2, 6});
  const auto snaps = build_snapshots(es, kLine, {}, 100);
  ASSERT_EQ(snaps.size(), 1u);
  const auto full = build(es, kLine);
  EXPECT_EQ(snaps[0].net.links(), full.links());
  EXPECT_EQ(snaps[0].net.nodes(), full.nodes());
  EXPECT_THROW(build_snapshots(es, kLine, {}, 0), Error);
  EXPECT_TRUE(build_snapshots(EventSet{}, kLine, {}, 5).empty());
}

TEST(Snapshots, ConservationAcrossBoundaries) {
  Rng rng(41);
  const auto g = GridSpec::rect({0, 1, 0, 1}, 5, 5);
  for (int round = 0; round < 20; ++round) {
    const auto es = random_events(rng, 500, g, false);
    const double dt = 5 + static_cast<double>(rng.below(200));
    const auto snaps = build_snapshots(es, g, {}, dt);
    std::uint64_t sum = 0;
    for (const auto& s : snaps) sum += s.net.total_weight();
    // consecutive pairs that straddle a window boundary
    const double t0 = es[0].t;
    std::uint64_t cross = 0;
    for (std::size_t i = 1; i < es.size(); ++i) {
      cross += std::floor((es[i].t - t0) / dt) != std::floor((es[i - 1].t - t0) / dt);
    }
    EXPECT_EQ(sum + cross, build(es, g).total_weight());
    EXPECT_EQ(sum + cross, es.size() - 1);
  }
}
