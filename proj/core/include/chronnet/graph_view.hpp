#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chronnet/chronnet.hpp"

namespace chronnet {

struct Neighbor {
  std::size_t node = 0;
  std::uint64_t weight = 0;
};

/// Undirected adjacency (CSR) over node indices 0..n-1, in the order of
/// Chronnet::nodes(). Directed networks are projected first. Self-loops are
/// kept out of the neighbor lists; neighbor lists are sorted by index.
class GraphView {
 public:
  explicit GraphView(const Chronnet& c);

  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
  [[nodiscard]] CellId cell(std::size_t i) const { return cells_[i]; }
  [[nodiscard]] const std::vector<CellId>& cells() const noexcept { return cells_; }
  [[nodiscard]] std::span<const Neighbor> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  [[nodiscard]] std::size_t degree(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  [[nodiscard]] std::uint64_t self_loop(std::size_t i) const { return self_loops_[i]; }
  /// Number of undirected non-self-loop links.
  [[nodiscard]] std::size_t link_count() const noexcept { return adj_.size() / 2; }
  /// Sum of non-self-loop link weights, each link once.
  [[nodiscard]] std::uint64_t link_weight() const noexcept { return link_weight_; }

 private:
  std::vector<CellId> cells_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adj_;
  std::vector<std::uint64_t> self_loops_;
  std::uint64_t link_weight_ = 0;
};

}  // namespace chronnet
