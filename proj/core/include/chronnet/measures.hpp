#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chronnet/chronnet.hpp"

namespace chronnet {

// Self-loop policy for every measure below: self-loops are ignored by
// degree, paths, transitivity, density and centralities, and counted once in
// strength. Directed chronnets are measured through their undirected
// projection, so degree and strength report in+out aggregates.

struct DegreeVector {
  std::vector<CellId> nodes;
  std::vector<std::uint64_t> k;
};

struct StrengthVector {
  std::vector<CellId> nodes;
  std::vector<std::uint64_t> s;
};

DegreeVector degree(const Chronnet& c);
StrengthVector strength(const Chronnet& c);

struct DistributionBin {
  std::uint64_t value = 0;
  std::size_t count = 0;
  double fraction = 0.0;
};

/// Empirical P(k), ascending in k. Throws on empty input.
std::vector<DistributionBin> degree_distribution(std::span<const std::uint64_t> values);

struct PathStats {
  /// mean over ordered pairs (i, j), i != j, with j reachable from i
  double avg_path_length = 0.0;
  double diameter = 0.0;
  std::size_t reachable_pairs = 0;
  std::size_t component_count = 0;
  double largest_component_fraction = 0.0;
};

/// Hop distances, or with `weighted` the length mean(w) / w per link so that
/// strong links are short and uniform weights give hop counts. Throws when no
/// pair of distinct nodes is connected.
PathStats path_stats(const Chronnet& c, bool weighted, std::size_t threads = 0);

/// 3 * triangles / connected triples. Throws without any connected triple.
double transitivity(const Chronnet& c);

/// |E| / (n (n - 1) / 2) over non-self-loop links. Throws for n < 2.
double edge_density(const Chronnet& c);

/// 2 |E| / n over non-self-loop links.
double average_degree(const Chronnet& c);

enum class CentralityKind { Degree, Betweenness, Closeness, WeightedCloseness };

CentralityKind parse_centrality_kind(const std::string& name);
std::string to_string(CentralityKind kind);

/// Per-node scores in Chronnet::nodes() order.
///   degree              k_i
///   betweenness         sum over unordered pairs {j, k} not containing i of
///                       (shortest j-k paths through i) / (shortest j-k paths)
///   closeness           1 / sum of hop distances to reachable nodes (0 if none)
///   weighted-closeness  same with link length mean(w) / w
std::vector<double> centrality(const Chronnet& c, CentralityKind kind, std::size_t threads = 0);

/// Component label per node (labels numbered by first node) and count.
struct Components {
  std::vector<std::size_t> label;
  std::size_t count = 0;
  [[nodiscard]] std::vector<std::size_t> sizes() const;
};
Components connected_components(const Chronnet& c);

/// Nodes whose removal increases the number of components (Tarjan lowpoint).
std::vector<CellId> articulation_points(const Chronnet& c);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  /// g1 = m3 / m2^1.5
  double skewness = 0.0;
  /// g2 = m4 / m2^2 - 3
  double excess_kurtosis = 0.0;
};
Moments sample_moments(std::span<const double> values);

}  // namespace chronnet
