#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "chronnet/events.hpp"
#include "chronnet/grid.hpp"

namespace chronnet {

/// Weighted link. In undirected networks src <= dst.
struct Link {
  CellId src;
  CellId dst;
  std::uint64_t weight = 0;

  friend auto operator<=>(const Link&, const Link&) = default;
};

struct TimeWindow {
  double t_start = 0.0;
  /// exclusive
  double t_end = 0.0;

  friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Construction parameters carried along with a network.
struct NetworkMeta {
  std::size_t h = 1;
  double d_max = std::numeric_limits<double>::infinity();
  std::optional<double> tau;
  std::optional<double> keep_fraction;
  std::optional<TimeWindow> window;

  friend bool operator==(const NetworkMeta&, const NetworkMeta&) = default;
};

/// Weighted network over grid cells with self-loops.
///
/// Stored in canonical form: nodes ascending, links ascending by (src, dst),
/// every weight >= 1 and every endpoint a node. Two networks built from the
/// same data compare equal exactly.
class Chronnet {
 public:
  Chronnet() = default;
  /// Sorts and validates; throws on duplicate links, zero weights, or
  /// endpoints that are not nodes.
  Chronnet(bool directed, GridSpec grid, std::vector<CellId> nodes, std::vector<Link> links,
           NetworkMeta meta = {});

  [[nodiscard]] bool directed() const noexcept { return directed_; }
  [[nodiscard]] const GridSpec& grid() const noexcept { return grid_; }
  [[nodiscard]] const std::vector<CellId>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }
  [[nodiscard]] const NetworkMeta& meta() const noexcept { return meta_; }

  [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] std::size_t link_count() const noexcept { return links_.size(); }
  [[nodiscard]] std::uint64_t total_weight() const noexcept;
  [[nodiscard]] bool has_node(CellId c) const;
  /// Weight of (u, v); 0 when absent. Undirected lookups accept either order.
  [[nodiscard]] std::uint64_t weight(CellId u, CellId v) const;
  /// Index of a node in nodes(); throws if absent.
  [[nodiscard]] std::size_t index_of(CellId c) const;

  friend bool operator==(const Chronnet&, const Chronnet&) = default;

 private:
  bool directed_ = true;
  GridSpec grid_;
  std::vector<CellId> nodes_;
  std::vector<Link> links_;
  NetworkMeta meta_;
};

struct BuildOptions {
  /// offset between the two events (or timestamp groups) of a linked pair
  std::size_t h = 1;
  /// pairs whose cell centers are farther apart are skipped
  double d_max = std::numeric_limits<double>::infinity();
  /// every grid cell becomes a node, not only cells holding events
  bool all_cells = false;
};

/// Directed chronnet of a time-sorted event set.
///
/// Without parallel events, each pair (e_a, e_{a+h}) adds 1 to w(cell(e_a),
/// cell(e_{a+h})). When some timestamps repeat, the offset h runs over
/// timestamp groups instead, and every pair of cells (u in group g, v in
/// group g + h) adds 1; a cell repeated within one group counts once. Events
/// sharing a timestamp are never linked to each other.
Chronnet build(const EventSet& es, const GridSpec& g, const BuildOptions& opts = {});

/// Same result as build(), computed on `chunks` contiguous segments
/// concurrently. `threads` = 0 uses default_thread_count().
Chronnet build_parallel(const EventSet& es, const GridSpec& g, const BuildOptions& opts,
                        std::size_t chunks, std::size_t threads = 0);

/// Drops links with weight <= tau. Nodes are kept.
Chronnet prune(const Chronnet& c, double tau);

/// Keeps the ceil(keep_fraction * |E|) heaviest links plus every link tied
/// with the weakest one kept.
Chronnet prune_quantile(const Chronnet& c, double keep_fraction);

/// Undirected projection: w{u,v} = w(u,v) + w(v,u), self-loops copied.
Chronnet undirect(const Chronnet& c);

/// Removes nodes without any non-self-loop link.
Chronnet remove_isolated(const Chronnet& c);

/// Removes the given nodes and their links.
Chronnet remove_nodes(const Chronnet& c, const std::vector<CellId>& drop);

struct Snapshot {
  TimeWindow window;
  Chronnet net;
};

/// One independent chronnet per time window [t0 + k*dt, t0 + (k+1)*dt),
/// t0 = min t, covering every event.
std::vector<Snapshot> build_snapshots(const EventSet& es, const GridSpec& g,
                                      const BuildOptions& opts, double dt);

/// Cell of every event (assign_cell), in event order.
std::vector<CellId> cells_of(const EventSet& es, const GridSpec& g);

}  // namespace chronnet
