#include "chronnet/chronnet.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <unordered_map>

#include "chronnet/error.hpp"
#include "chronnet/parallel.hpp"

namespace chronnet {

Chronnet::Chronnet(bool directed, GridSpec grid, std::vector<CellId> nodes, std::vector<Link> links,
                   NetworkMeta meta)
    : directed_(directed),
      grid_(std::move(grid)),
      nodes_(std::move(nodes)),
      links_(std::move(links)),
      meta_(std::move(meta)) {
  std::sort(nodes_.begin(), nodes_.end());
  if (std::adjacent_find(nodes_.begin(), nodes_.end()) != nodes_.end()) {
    throw Error("duplicate node in chronnet");
  }
  for (auto& l : links_) {
    if (!directed_ && l.dst < l.src) std::swap(l.src, l.dst);
    if (l.weight == 0) throw Error("chronnet link weights must be >= 1");
    if (!has_node(l.src) || !has_node(l.dst)) {
      throw Error("link (" + std::to_string(l.src.value) + ", " + std::to_string(l.dst.value) +
                  ") has an endpoint that is not a node");
    }
  }
  std::sort(links_.begin(), links_.end());
  for (std::size_t i = 1; i < links_.size(); ++i) {
    if (links_[i].src == links_[i - 1].src && links_[i].dst == links_[i - 1].dst) {
      throw Error("duplicate link (" + std::to_string(links_[i].src.value) + ", " +
                  std::to_string(links_[i].dst.value) + ")");
    }
  }
}

std::uint64_t Chronnet::total_weight() const noexcept {
  std::uint64_t total = 0;
  for (const auto& l : links_) total += l.weight;
  return total;
}

bool Chronnet::has_node(CellId c) const { return std::binary_search(nodes_.begin(), nodes_.end(), c); }

std::size_t Chronnet::index_of(CellId c) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), c);
  if (it == nodes_.end() || *it != c) throw Error("cell " + std::to_string(c.value) + " is not a node");
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::uint64_t Chronnet::weight(CellId u, CellId v) const {
  if (!directed_ && v < u) std::swap(u, v);
  auto it = std::lower_bound(links_.begin(), links_.end(), Link{u, v, 0});
  if (it != links_.end() && it->src == u && it->dst == v) return it->weight;
  return 0;
}

std::vector<CellId> cells_of(const EventSet& es, const GridSpec& g) {
  std::vector<CellId> cells;
  cells.reserve(es.size());
  for (const auto& e : es.events()) cells.push_back(assign_cell(g, e.x, e.y));
  return cells;
}

namespace {

using WeightMap = std::unordered_map<std::uint64_t, std::uint64_t>;

std::uint64_t pack(CellId u, CellId v) {
  return (static_cast<std::uint64_t>(u.value) << 32) | static_cast<std::uint64_t>(v.value);
}

/// Cells per pairing unit: one unit per event, or one per timestamp group
/// (distinct cells, ascending) when parallel events exist.
struct Units {
  std::vector<std::size_t> offsets{0};
  std::vector<CellId> cells;
  std::vector<CellId> event_cells;

  [[nodiscard]] std::size_t size() const { return offsets.size() - 1; }
};

Units make_units(const EventSet& es, const GridSpec& g, const BuildOptions& opts) {
  if (!es.sorted()) throw Error("chronnet construction requires a time-sorted EventSet");
  if (opts.h < 1) throw Error("window size h must be >= 1");
  if (std::isnan(opts.d_max) || opts.d_max < 0.0) throw Error("d_max must be >= 0");
  if (g.cell_count() > (std::int64_t{1} << 32)) throw Error("grid has too many cells");

  Units u;
  u.event_cells = cells_of(es, g);
  const auto groups = group_parallel(es);
  if (groups.size() == es.size()) {
    u.cells = u.event_cells;
    u.offsets.resize(es.size() + 1);
    for (std::size_t i = 0; i <= es.size(); ++i) u.offsets[i] = i;
    return u;
  }
  for (const auto& grp : groups) {
    std::vector<CellId> cs(u.event_cells.begin() + static_cast<std::ptrdiff_t>(grp.first),
                           u.event_cells.begin() + static_cast<std::ptrdiff_t>(grp.first + grp.count));
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    u.cells.insert(u.cells.end(), cs.begin(), cs.end());
    u.offsets.push_back(u.cells.size());
  }
  return u;
}

/// Counts pairs whose first unit index lies in [lo, hi).
void count_pairs(const Units& u, const GridSpec& g, const BuildOptions& opts, std::size_t lo,
                 std::size_t hi, WeightMap& acc) {
  const bool capped = std::isfinite(opts.d_max);
  for (std::size_t a = lo; a < hi; ++a) {
    const std::size_t b = a + opts.h;
    for (std::size_t i = u.offsets[a]; i < u.offsets[a + 1]; ++i) {
      for (std::size_t j = u.offsets[b]; j < u.offsets[b + 1]; ++j) {
        const CellId from = u.cells[i];
        const CellId to = u.cells[j];
        if (capped && cell_distance(g, from, to) > opts.d_max) continue;
        ++acc[pack(from, to)];
      }
    }
  }
}

std::vector<CellId> node_set(const Units& u, const GridSpec& g, const BuildOptions& opts) {
  std::vector<CellId> nodes;
  if (opts.all_cells) {
    nodes.reserve(static_cast<std::size_t>(g.cell_count()));
    for (std::int64_t id = 0; id < g.cell_count(); ++id) nodes.push_back(CellId{id});
    return nodes;
  }
  nodes = u.event_cells;
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

Chronnet assemble(const WeightMap& acc, std::vector<CellId> nodes, const GridSpec& g,
                  const BuildOptions& opts) {
  std::vector<Link> links;
  links.reserve(acc.size());
  for (const auto& [key, w] : acc) {
    links.push_back(Link{CellId{static_cast<std::int64_t>(key >> 32)},
                         CellId{static_cast<std::int64_t>(key & 0xffffffffULL)}, w});
  }
  NetworkMeta meta;
  meta.h = opts.h;
  meta.d_max = opts.d_max;
  return Chronnet(true, g, std::move(nodes), std::move(links), meta);
}

std::size_t pair_count(const Units& u, std::size_t h) { return u.size() > h ? u.size() - h : 0; }

}  // namespace

Chronnet build(const EventSet& es, const GridSpec& g, const BuildOptions& opts) {
  const Units u = make_units(es, g, opts);
  WeightMap acc;
  count_pairs(u, g, opts, 0, pair_count(u, opts.h), acc);
  return assemble(acc, node_set(u, g, opts), g, opts);
}

Chronnet build_parallel(const EventSet& es, const GridSpec& g, const BuildOptions& opts,
                        std::size_t chunks, std::size_t threads) {
  if (chunks < 1) throw Error("chunks must be >= 1");
  const Units u = make_units(es, g, opts);
  const std::size_t pairs = pair_count(u, opts.h);

  // Chunk k owns the pairs starting in [k*P/chunks, (k+1)*P/chunks) and reads
  // h units past its end, so each pair is counted exactly once.
  std::vector<WeightMap> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t k) {
    const std::size_t lo = pairs * k / chunks;
    const std::size_t hi = pairs * (k + 1) / chunks;
    count_pairs(u, g, opts, lo, hi, partial[k]);
  });

  WeightMap merged = std::move(partial[0]);
  for (std::size_t k = 1; k < chunks; ++k) {
    for (const auto& [key, w] : partial[k]) merged[key] += w;
  }
  return assemble(merged, node_set(u, g, opts), g, opts);
}

Chronnet prune(const Chronnet& c, double tau) {
  if (std::isnan(tau) || tau < 0.0) throw Error("pruning threshold tau must be >= 0");
  std::vector<Link> kept;
  for (const auto& l : c.links()) {
    if (static_cast<double>(l.weight) > tau) kept.push_back(l);
  }
  NetworkMeta meta = c.meta();
  meta.tau = meta.tau ? std::max(*meta.tau, tau) : tau;
  return Chronnet(c.directed(), c.grid(), c.nodes(), std::move(kept), meta);
}

Chronnet prune_quantile(const Chronnet& c, double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) throw Error("keep_fraction must be in (0, 1]");
  NetworkMeta meta = c.meta();
  meta.keep_fraction = keep_fraction;
  if (c.link_count() == 0) return Chronnet(c.directed(), c.grid(), c.nodes(), {}, meta);

  std::vector<std::uint64_t> w;
  w.reserve(c.link_count());
  for (const auto& l : c.links()) w.push_back(l.weight);
  std::sort(w.begin(), w.end(), std::greater<>());
  auto keep = static_cast<std::size_t>(
      std::ceil(keep_fraction * static_cast<double>(w.size()) - 1e-9));
  keep = std::clamp<std::size_t>(keep, 1, w.size());
  const std::uint64_t cutoff = w[keep - 1];

  std::vector<Link> kept;
  for (const auto& l : c.links()) {
    if (l.weight >= cutoff) kept.push_back(l);
  }
  return Chronnet(c.directed(), c.grid(), c.nodes(), std::move(kept), meta);
}

Chronnet undirect(const Chronnet& c) {
  if (!c.directed()) throw Error("chronnet is already undirected");
  std::vector<Link> out;
  out.reserve(c.link_count());
  for (const auto& l : c.links()) out.push_back(Link{std::min(l.src, l.dst), std::max(l.src, l.dst), l.weight});
  std::sort(out.begin(), out.end(), [](const Link& a, const Link& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  std::vector<Link> merged;
  merged.reserve(out.size());
  for (const auto& l : out) {
    if (!merged.empty() && merged.back().src == l.src && merged.back().dst == l.dst) {
      merged.back().weight += l.weight;
    } else {
      merged.push_back(l);
    }
  }
  return Chronnet(false, c.grid(), c.nodes(), std::move(merged), c.meta());
}

Chronnet remove_nodes(const Chronnet& c, const std::vector<CellId>& drop) {
  std::vector<CellId> sorted_drop = drop;
  std::sort(sorted_drop.begin(), sorted_drop.end());
  auto dropped = [&](CellId id) { return std::binary_search(sorted_drop.begin(), sorted_drop.end(), id); };
  std::vector<CellId> nodes;
  for (auto id : c.nodes()) {
    if (!dropped(id)) nodes.push_back(id);
  }
  std::vector<Link> links;
  for (const auto& l : c.links()) {
    if (!dropped(l.src) && !dropped(l.dst)) links.push_back(l);
  }
  return Chronnet(c.directed(), c.grid(), std::move(nodes), std::move(links), c.meta());
}

Chronnet remove_isolated(const Chronnet& c) {
  std::vector<char> linked(c.node_count(), 0);
  for (const auto& l : c.links()) {
    if (l.src == l.dst) continue;
    linked[c.index_of(l.src)] = 1;
    linked[c.index_of(l.dst)] = 1;
  }
  std::vector<CellId> drop;
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    if (!linked[i]) drop.push_back(c.nodes()[i]);
  }
  return remove_nodes(c, drop);
}

std::vector<Snapshot> build_snapshots(const EventSet& es, const GridSpec& g,
                                      const BuildOptions& opts, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("snapshot window length must be > 0");
  if (!es.sorted()) throw Error("snapshots require a time-sorted EventSet");
  std::vector<Snapshot> out;
  if (es.empty()) return out;

  const double t0 = es[0].t;
  const double t_last = es[es.size() - 1].t;
  const auto windows = static_cast<std::size_t>(std::floor((t_last - t0) / dt)) + 1;
  const auto& ev = es.events();
  std::size_t i = 0;
  for (std::size_t k = 0; k < windows; ++k) {
    const double start = t0 + static_cast<double>(k) * dt;
    const double end = t0 + static_cast<double>(k + 1) * dt;
    std::vector<Event> slice;
    while (i < ev.size() && (ev[i].t < end || k + 1 == windows)) slice.push_back(ev[i++]);
    Chronnet net = build(EventSet(std::move(slice)), g, opts);
    NetworkMeta meta = net.meta();
    meta.window = TimeWindow{start, end};
    out.push_back(Snapshot{TimeWindow{start, end},
                           Chronnet(true, g, net.nodes(), net.links(), meta)});
  }
  return out;
}

}  // namespace chronnet
