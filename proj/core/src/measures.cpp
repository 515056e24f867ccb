#include "chronnet/measures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

#include "chronnet/error.hpp"
#include "chronnet/graph_view.hpp"
#include "chronnet/parallel.hpp"

namespace chronnet {

DegreeVector degree(const Chronnet& c) {
  const GraphView g(c);
  DegreeVector out{g.cells(), std::vector<std::uint64_t>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) out.k[i] = g.degree(i);
  return out;
}

StrengthVector strength(const Chronnet& c) {
  const GraphView g(c);
  StrengthVector out{g.cells(), std::vector<std::uint64_t>(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::uint64_t s = g.self_loop(i);
    for (const auto& nb : g.neighbors(i)) s += nb.weight;
    out.s[i] = s;
  }
  return out;
}

std::vector<DistributionBin> degree_distribution(std::span<const std::uint64_t> values) {
  if (values.empty()) throw Error("degree distribution of an empty graph");
  std::map<std::uint64_t, std::size_t> counts;
  for (auto v : values) ++counts[v];
  std::vector<DistributionBin> out;
  out.reserve(counts.size());
  for (const auto& [v, n] : counts) {
    out.push_back({v, n, static_cast<double>(n) / static_cast<double>(values.size())});
  }
  return out;
}

namespace {

constexpr std::size_t kSourceBlock = 32;
constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> link_lengths(const GraphView& g, bool weighted) {
  // one length per adjacency slot, same layout as the CSR
  std::vector<double> len;
  len.reserve(2 * g.link_count());
  const double mean = g.link_count() ? static_cast<double>(g.link_weight()) / static_cast<double>(g.link_count()) : 1.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (const auto& nb : g.neighbors(i)) {
      len.push_back(weighted ? mean / static_cast<double>(nb.weight) : 1.0);
    }
  }
  return len;
}

std::vector<std::size_t> slot_offsets(const GraphView& g) {
  std::vector<std::size_t> off(g.size() + 1, 0);
  for (std::size_t i = 0; i < g.size(); ++i) off[i + 1] = off[i] + g.degree(i);
  return off;
}

void bfs_distances(const GraphView& g, std::size_t src, std::vector<double>& dist) {
  std::fill(dist.begin(), dist.end(), kInf);
  std::vector<std::size_t> queue{src};
  dist[src] = 0.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (const auto& nb : g.neighbors(u)) {
      if (dist[nb.node] == kInf) {
        dist[nb.node] = dist[u] + 1.0;
        queue.push_back(nb.node);
      }
    }
  }
}

void dijkstra_distances(const GraphView& g, const std::vector<double>& len,
                        const std::vector<std::size_t>& off, std::size_t src, std::vector<double>& dist) {
  std::fill(dist.begin(), dist.end(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    const auto nbs = g.neighbors(u);
    for (std::size_t k = 0; k < nbs.size(); ++k) {
      const double nd = d + len[off[u] + k];
      if (nd < dist[nbs[k].node]) {
        dist[nbs[k].node] = nd;
        pq.emplace(nd, nbs[k].node);
      }
    }
  }
}

struct SourceSummary {
  double sum = 0.0;
  double max = 0.0;
  std::size_t reached = 0;
};

std::vector<SourceSummary> per_source(const GraphView& g, bool weighted, std::size_t threads) {
  const std::size_t n = g.size();
  const auto len = link_lengths(g, weighted);
  const auto off = slot_offsets(g);
  std::vector<SourceSummary> out(n);
  const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    std::vector<double> dist(n);
    for (std::size_t s = b * kSourceBlock; s < std::min(n, (b + 1) * kSourceBlock); ++s) {
      if (weighted) {
        dijkstra_distances(g, len, off, s, dist);
      } else {
        bfs_distances(g, s, dist);
      }
      SourceSummary sum;
      for (std::size_t t = 0; t < n; ++t) {
        if (t == s || dist[t] == kInf) continue;
        sum.sum += dist[t];
        sum.max = std::max(sum.max, dist[t]);
        ++sum.reached;
      }
      out[s] = sum;
    }
  });
  return out;
}

Components components_of(const GraphView& g) {
  Components comp;
  comp.label.assign(g.size(), std::numeric_limits<std::size_t>::max());
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (comp.label[s] != std::numeric_limits<std::size_t>::max()) continue;
    comp.label[s] = comp.count;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u)) {
        if (comp.label[nb.node] == std::numeric_limits<std::size_t>::max()) {
          comp.label[nb.node] = comp.count;
          stack.push_back(nb.node);
        }
      }
    }
    ++comp.count;
  }
  return comp;
}

}  // namespace

std::vector<std::size_t> Components::sizes() const {
  std::vector<std::size_t> out(count, 0);
  for (auto l : label) ++out[l];
  return out;
}

Components connected_components(const Chronnet& c) { return components_of(GraphView(c)); }

PathStats path_stats(const Chronnet& c, bool weighted, std::size_t threads) {
  const GraphView g(c);
  if (g.size() < 2) throw Error("path statistics need at least 2 nodes");
  const auto summaries = per_source(g, weighted, threads);
  PathStats ps;
  double total = 0.0;
  for (const auto& s : summaries) {
    total += s.sum;
    ps.reachable_pairs += s.reached;
    ps.diameter = std::max(ps.diameter, s.max);
  }
  if (ps.reachable_pairs == 0) throw Error("no pair of distinct nodes is connected");
  ps.avg_path_length = total / static_cast<double>(ps.reachable_pairs);
  const Components comp = components_of(g);
  ps.component_count = comp.count;
  const auto sizes = comp.sizes();
  ps.largest_component_fraction =
      static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(g.size());
  return ps;
}

double transitivity(const Chronnet& c) {
  const GraphView g(c);
  if (g.size() < 3) throw Error("transitivity needs at least 3 nodes");
  std::uint64_t triangles3 = 0;  // each triangle counted once per corner
  std::uint64_t triples = 0;
  for (std::size_t u = 0; u < g.size(); ++u) {
    const std::uint64_t k = g.degree(u);
    triples += k * (k - (k > 0 ? 1 : 0)) / 2;
    const auto nu = g.neighbors(u);
    for (const auto& v : nu) {
      if (v.node <= u) continue;
      // common neighbors w > v close a triangle u < v < w
      const auto nv = g.neighbors(v.node);
      auto a = nu.begin();
      auto b = nv.begin();
      while (a != nu.end() && b != nv.end()) {
        if (a->node < b->node) {
          ++a;
        } else if (b->node < a->node) {
          ++b;
        } else {
          if (a->node > v.node) triangles3 += 3;
          ++a;
          ++b;
        }
      }
    }
  }
  if (triples == 0) throw Error("transitivity undefined: no connected triple");
  return static_cast<double>(triangles3) / static_cast<double>(triples);
}

double edge_density(const Chronnet& c) {
  const GraphView g(c);
  const double n = static_cast<double>(g.size());
  if (g.size() < 2) throw Error("edge density needs at least 2 nodes");
  return static_cast<double>(g.link_count()) / (n * (n - 1.0) / 2.0);
}

double average_degree(const Chronnet& c) {
  const GraphView g(c);
  if (g.size() == 0) return 0.0;
  return 2.0 * static_cast<double>(g.link_count()) / static_cast<double>(g.size());
}

CentralityKind parse_centrality_kind(const std::string& name) {
  if (name == "degree") return CentralityKind::Degree;
  if (name == "betweenness") return CentralityKind::Betweenness;
  if (name == "closeness") return CentralityKind::Closeness;
  if (name == "weighted-closeness") return CentralityKind::WeightedCloseness;
  throw Error("unknown centrality '" + name + "'");
}

std::string to_string(CentralityKind kind) {
  switch (kind) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::WeightedCloseness: return "weighted-closeness";
  }
  return "?";
}

namespace {

// Brandes accumulation from one source (unweighted).
void brandes_source(const GraphView& g, std::size_t s, std::vector<double>& acc) {
  const std::size_t n = g.size();
  std::vector<std::size_t> order;
  order.reserve(n);
  std::vector<double> sigma(n, 0.0);
  std::vector<long long> dist(n, -1);
  std::vector<double> delta(n, 0.0);
  sigma[s] = 1.0;
  dist[s] = 0;
  order.push_back(s);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const std::size_t v = order[head];
    for (const auto& nb : g.neighbors(v)) {
      if (dist[nb.node] < 0) {
        dist[nb.node] = dist[v] + 1;
        order.push_back(nb.node);
      }
      if (dist[nb.node] == dist[v] + 1) sigma[nb.node] += sigma[v];
    }
  }
  for (std::size_t idx = order.size(); idx-- > 0;) {
    const std::size_t w = order[idx];
    for (const auto& nb : g.neighbors(w)) {
      if (dist[nb.node] == dist[w] - 1) delta[nb.node] += sigma[nb.node] / sigma[w] * (1.0 + delta[w]);
    }
    if (w != s) acc[w] += delta[w];
  }
}

}  // namespace

std::vector<double> centrality(const Chronnet& c, CentralityKind kind, std::size_t threads) {
  const GraphView g(c);
  const std::size_t n = g.size();
  std::vector<double> out(n, 0.0);
  switch (kind) {
    case CentralityKind::Degree:
      for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(g.degree(i));
      return out;
    case CentralityKind::Closeness:
    case CentralityKind::WeightedCloseness: {
      const auto summaries = per_source(g, kind == CentralityKind::WeightedCloseness, threads);
      for (std::size_t i = 0; i < n; ++i) out[i] = summaries[i].sum > 0.0 ? 1.0 / summaries[i].sum : 0.0;
      return out;
    }
    case CentralityKind::Betweenness: {
      // fixed source blocks reduced in block order, whatever the thread count
      const std::size_t blocks = (n + kSourceBlock - 1) / kSourceBlock;
      std::vector<std::vector<double>> partial(blocks, std::vector<double>(n, 0.0));
      parallel_for(blocks, threads, [&](std::size_t b) {
        for (std::size_t s = b * kSourceBlock; s < std::min(n, (b + 1) * kSourceBlock); ++s) {
          brandes_source(g, s, partial[b]);
        }
      });
      for (const auto& p : partial) {
        for (std::size_t i = 0; i < n; ++i) out[i] += p[i];
      }
      for (auto& v : out) v /= 2.0;
      return out;
    }
  }
  throw Error("unknown centrality kind");
}

std::vector<CellId> articulation_points(const Chronnet& c) {
  const GraphView g(c);
  const std::size_t n = g.size();
  constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> disc(n, kUnseen), low(n, 0), parent(n, kUnseen);
  std::vector<char> is_cut(n, 0);
  std::size_t timer = 0;
  struct Frame {
    std::size_t node;
    std::size_t next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (disc[root] != kUnseen) continue;
    std::size_t root_children = 0;
    std::vector<Frame> stack{{root, 0}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto nbs = g.neighbors(f.node);
      if (f.next < nbs.size()) {
        const std::size_t v = nbs[f.next++].node;
        if (disc[v] == kUnseen) {
          parent[v] = f.node;
          if (f.node == root) ++root_children;
          disc[v] = low[v] = timer++;
          stack.push_back({v, 0});
        } else if (v != parent[f.node]) {
          low[f.node] = std::min(low[f.node], disc[v]);
        }
      } else {
        const std::size_t u = f.node;
        stack.pop_back();
        if (!stack.empty()) {
          const std::size_t p = stack.back().node;
          low[p] = std::min(low[p], low[u]);
          if (p != root && low[u] >= disc[p]) is_cut[p] = 1;
        }
      }
    }
    if (root_children > 1) is_cut[root] = 1;
  }
  std::vector<CellId> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_cut[i]) out.push_back(g.cell(i));
  }
  return out;
}

Moments sample_moments(std::span<const double> values) {
  Moments m;
  if (values.empty()) return m;
  const double n = static_cast<double>(values.size());
  m.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

}  // namespace chronnet
