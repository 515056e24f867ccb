#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chronnet/chronnet.hpp"
#include "chronnet/events.hpp"
#include "chronnet/grid.hpp"

namespace chronnet {

/// Flat community assignment; labels are 0..community_count-1, numbered in
/// order of first appearance along nodes.
struct Partition {
  std::vector<CellId> nodes;
  std::vector<int> label;
  std::size_t community_count = 0;
  double modularity = 0.0;

  /// Label of a cell, or -1 when the cell is not a node.
  [[nodiscard]] int label_of(CellId c) const;
};

/// Weighted modularity sum_c [w_in(c) / W - (s_c / 2W)^2], computed directly
/// from the links. Self-loops are excluded from W, w_in and s.
double modularity(const Chronnet& c, std::span<const int> labels);

struct Merge {
  /// surviving community (the lower label) and the one absorbed into it
  std::size_t into = 0;
  std::size_t from = 0;
  double delta_q = 0.0;
  double q_after = 0.0;
};

/// Agglomerative merge history over leaves (node indices).
struct Dendrogram {
  std::vector<CellId> leaves;
  std::vector<Merge> merges;
  double q_initial = 0.0;
  /// number of merges applied at the best-modularity cut
  std::size_t best_merge_count = 0;
  double best_q = 0.0;
  std::string method = "fastgreedy";

  [[nodiscard]] std::size_t best_community_count() const { return leaves.size() - best_merge_count; }
};

/// Greedy modularity agglomeration on the undirected projection: starting
/// from singletons, repeatedly merge the connected pair with the largest
/// delta Q (ties: lowest labels). Once no connected pairs remain, the
/// remaining communities are merged smallest-first so the tree is complete.
/// Throws when the network has no non-self-loop link.
Dendrogram fast_greedy(const Chronnet& c);

/// Partition after undoing the last k - 1 merges. 1 <= k <= leaves.
Partition cut_dendrogram(const Dendrogram& d, std::size_t k);
/// Partition at the best-modularity cut.
Partition best_partition(const Dendrogram& d);

/// Asynchronous weighted label propagation. Each round visits nodes in a
/// seeded random order; a node keeps its label when that label is among the
/// heaviest neighbor labels, otherwise it takes one of them uniformly at
/// random. Stops after a round without changes (error after 100 n rounds).
/// Isolated nodes keep singleton labels.
Partition label_propagation(const Chronnet& c, std::uint64_t seed);

/// Label reserved for events whose cell is not in the partition.
inline constexpr int kNoiseLabel = -1;

struct CommunitySeries {
  std::vector<int> labels;
  std::size_t noise_count = 0;
};

/// c_t = community of the cell of event t, in event order.
CommunitySeries cluster_events(const EventSet& es, const GridSpec& g, const Partition& p);

/// Smoothing with window radius delta (odd, >= 1): c_t becomes v when all of
/// c_{t-delta..t-1} and c_{t+1..t+delta} equal v. Every replacement reads the
/// input series; the first and last delta positions are left unchanged.
/// Requires |labels| > 2 delta.
std::vector<int> correct_series(std::span<const int> labels, std::size_t delta);

/// 1-based indices t in 2..T with c_t != c_{t-1}.
std::vector<std::size_t> change_points(std::span<const int> labels);

enum class OutlierMetric { Degree, Strength };
OutlierMetric parse_outlier_metric(const std::string& name);

struct OutlierResult {
  std::vector<CellId> nodes;
  std::uint64_t cutoff = 0;
  /// the cutoff tie pulled in every node
  bool degenerate = false;
};

/// Nodes in the top ceil(top_fraction * n) by degree or strength; all nodes
/// tied with the cutoff value are included.
OutlierResult outlier_nodes(const Chronnet& c, OutlierMetric metric, double top_fraction);

/// Adjusted Rand index between two labelings of the same items.
double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

}  // namespace chronnet
