#include "chronnet/graph_view.hpp"

#include <algorithm>

namespace chronnet {

GraphView::GraphView(const Chronnet& c) {
  const Chronnet projected = c.directed() ? undirect(c) : Chronnet{};
  const Chronnet& g = c.directed() ? projected : c;

  cells_ = g.nodes();
  const std::size_t n = cells_.size();
  self_loops_.assign(n, 0);
  std::vector<std::size_t> deg(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  ends.reserve(g.link_count());
  for (const auto& l : g.links()) {
    const std::size_t a = g.index_of(l.src);
    const std::size_t b = g.index_of(l.dst);
    ends.emplace_back(a, b);
    if (a == b) {
      self_loops_[a] += l.weight;
    } else {
      ++deg[a];
      ++deg[b];
      link_weight_ += l.weight;
    }
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adj_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t k = 0; k < ends.size(); ++k) {
    const auto [a, b] = ends[k];
    if (a == b) continue;
    const std::uint64_t w = g.links()[k].weight;
    adj_[fill[a]++] = Neighbor{b, w};
    adj_[fill[b]++] = Neighbor{a, w};
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }
}

}  // namespace chronnet
