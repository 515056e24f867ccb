#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include "chronnet/error.hpp"
#include "chronnet/graph_view.hpp"
#include "chronnet/mining.hpp"
#include "chronnet/random.hpp"

namespace chronnet {

int Partition::label_of(CellId c) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), c);
  if (it == nodes.end() || *it != c) return -1;
  return label[static_cast<std::size_t>(it - nodes.begin())];
}

double modularity(const Chronnet& c, std::span<const int> labels) {
  const GraphView g(c);
  if (labels.size() != g.size()) throw Error("label count does not match node count");
  const double two_w = 2.0 * static_cast<double>(g.link_weight());
  if (two_w == 0.0) return 0.0;
  std::map<int, double> inside, total;
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& nb : g.neighbors(u)) {
      total[labels[u]] += static_cast<double>(nb.weight);
      if (labels[nb.node] == labels[u]) inside[labels[u]] += static_cast<double>(nb.weight);
    }
  }
  double q = 0.0;
  for (const auto& [lab, s] : total) {
    // inside[] counted each internal link from both ends
    q += inside[lab] / two_w - (s / two_w) * (s / two_w);
  }
  return q;
}

namespace {

std::vector<int> relabel_by_first_appearance(const std::vector<std::size_t>& raw, std::size_t& count) {
  std::unordered_map<std::size_t, int> map;
  std::vector<int> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = map.emplace(raw[i], static_cast<int>(map.size()));
    out[i] = it->second;
  }
  count = map.size();
  return out;
}

struct Candidate {
  double dq;
  std::size_t i;
  std::size_t j;

  bool operator<(const Candidate& o) const {
    if (dq != o.dq) return dq > o.dq;
    return std::tie(i, j) < std::tie(o.i, o.j);
  }
};

struct PairState {
  double e = 0.0;
  double dq = 0.0;
};

}  // namespace

Dendrogram fast_greedy(const Chronnet& c) {
  const GraphView g(c);
  const std::size_t n = g.size();
  if (g.link_count() == 0) throw Error("fast greedy needs at least one link between distinct nodes");
  const double two_w = 2.0 * static_cast<double>(g.link_weight());

  std::vector<std::map<std::size_t, PairState>> adj(n);
  std::vector<double> a(n, 0.0);
  std::vector<char> alive(n, 1);
  std::set<Candidate> heap;

  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& nb : g.neighbors(u)) {
      adj[u][nb.node].e = static_cast<double>(nb.weight) / two_w;
      a[u] += static_cast<double>(nb.weight) / two_w;
    }
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (auto& [v, st] : adj[u]) {
      st.dq = 2.0 * (st.e - a[u] * a[v]);
      if (u < v) heap.insert({st.dq, u, v});
    }
  }

  Dendrogram d;
  d.leaves = g.cells();
  d.q_initial = 0.0;
  for (double ai : a) d.q_initial -= ai * ai;
  double q = d.q_initial;
  d.best_q = q;
  d.best_merge_count = 0;

  auto record = [&](std::size_t into, std::size_t from, double dq) {
    q += dq;
    d.merges.push_back({into, from, dq, q});
    if (q > d.best_q + 1e-12) {
      d.best_q = q;
      d.best_merge_count = d.merges.size();
    }
  };

  while (!heap.empty()) {
    const Candidate top = *heap.begin();
    const std::size_t i = top.i;  // survivor (lower label)
    const std::size_t j = top.j;

    // drop every candidate that involves i or j
    for (const auto& [k, st] : adj[i]) heap.erase({st.dq, std::min(i, k), std::max(i, k)});
    for (const auto& [k, st] : adj[j]) heap.erase({st.dq, std::min(j, k), std::max(j, k)});

    adj[i].erase(j);
    adj[j].erase(i);
    for (const auto& [k, st] : adj[j]) {
      adj[i][k].e += st.e;
      auto& back = adj[k];
      back[i].e += back[j].e;
      back.erase(j);
    }
    adj[j].clear();
    a[i] += a[j];
    a[j] = 0.0;
    alive[j] = 0;

    for (auto& [k, st] : adj[i]) {
      st.dq = 2.0 * (st.e - a[i] * a[k]);
      adj[k][i].dq = st.dq;
      heap.insert({st.dq, std::min(i, k), std::max(i, k)});
    }
    record(i, j, top.dq);
  }

  // Disconnected remainder: merging i and j costs 2 a_i a_j, so the two
  // smallest communities go first.
  std::set<std::pair<double, std::size_t>> rest;
  for (std::size_t u = 0; u < n; ++u) {
    if (alive[u]) rest.insert({a[u], u});
  }
  while (rest.size() > 1) {
    const auto x = *rest.begin();
    rest.erase(rest.begin());
    const auto y = *rest.begin();
    rest.erase(rest.begin());
    const std::size_t into = std::min(x.second, y.second);
    const std::size_t from = std::max(x.second, y.second);
    const double dq = -2.0 * x.first * y.first;
    a[into] = x.first + y.first;
    rest.insert({a[into], into});
    record(into, from, dq);
  }
  return d;
}

Partition cut_dendrogram(const Dendrogram& d, std::size_t k) {
  const std::size_t n = d.leaves.size();
  if (k < 1 || k > n) throw Error("community count k must be in [1, " + std::to_string(n) + "]");
  if (d.merges.size() + 1 < n) throw Error("dendrogram is incomplete");
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  const std::size_t applied = n - k;
  for (std::size_t m = 0; m < applied; ++m) {
    const auto& mg = d.merges[m];
    parent[find(mg.from)] = find(mg.into);
  }
  std::vector<std::size_t> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = find(i);
  Partition p;
  p.nodes = d.leaves;
  p.label = relabel_by_first_appearance(root, p.community_count);
  p.modularity = applied == 0 ? d.q_initial : d.merges[applied - 1].q_after;
  return p;
}

Partition best_partition(const Dendrogram& d) {
  return cut_dendrogram(d, d.leaves.size() - d.best_merge_count);
}

Partition label_propagation(const Chronnet& c, std::uint64_t seed) {
  const GraphView g(c);
  const std::size_t n = g.size();
  if (g.link_count() == 0) throw Error("label propagation needs at least one link between distinct nodes");

  Rng rng(seed);
  std::vector<std::size_t> label(n);
  std::iota(label.begin(), label.end(), 0);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  std::vector<double> votes(n, 0.0);
  std::vector<std::size_t> touched;
  std::vector<std::size_t> best;
  const std::size_t max_rounds = 100 * std::max<std::size_t>(n, 1);
  bool changed = true;
  std::size_t rounds = 0;
  while (changed) {
    if (++rounds > max_rounds) throw Error("label propagation did not converge");
    changed = false;
    rng.shuffle(order);
    for (std::size_t u : order) {
      if (g.degree(u) == 0) continue;
      touched.clear();
      for (const auto& nb : g.neighbors(u)) {
        const std::size_t l = label[nb.node];
        if (votes[l] == 0.0) touched.push_back(l);
        votes[l] += static_cast<double>(nb.weight);
      }
      double top = 0.0;
      for (auto l : touched) top = std::max(top, votes[l]);
      best.clear();
      for (auto l : touched) {
        if (votes[l] == top) best.push_back(l);
      }
      for (auto l : touched) votes[l] = 0.0;
      if (std::find(best.begin(), best.end(), label[u]) != best.end()) continue;
      std::sort(best.begin(), best.end());
      label[u] = best[rng.below(best.size())];
      changed = true;
    }
  }

  Partition p;
  p.nodes = g.cells();
  p.label = relabel_by_first_appearance(label, p.community_count);
  p.modularity = modularity(c, p.label);
  return p;
}

}  // namespace chronnet
