#include "chronnet/mining.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "chronnet/error.hpp"
#include "chronnet/measures.hpp"

namespace chronnet {

CommunitySeries cluster_events(const EventSet& es, const GridSpec& g, const Partition& p) {
  CommunitySeries cs;
  cs.labels.reserve(es.size());
  std::unordered_map<CellId, int> lookup;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) lookup.emplace(p.nodes[i], p.label[i]);
  for (const auto& e : es.events()) {
    auto it = lookup.find(assign_cell(g, e.x, e.y));
    if (it == lookup.end()) {
      cs.labels.push_back(kNoiseLabel);
      ++cs.noise_count;
    } else {
      cs.labels.push_back(it->second);
    }
  }
  return cs;
}

std::vector<int> correct_series(std::span<const int> labels, std::size_t delta) {
  if (delta < 1 || delta % 2 == 0) throw Error("correction window delta must be an odd number >= 1");
  if (labels.size() <= 2 * delta) {
    throw Error("series of length " + std::to_string(labels.size()) + " is too short for delta " +
                std::to_string(delta));
  }
  std::vector<int> out(labels.begin(), labels.end());
  for (std::size_t t = delta; t + delta < labels.size(); ++t) {
    const int v = labels[t - delta];
    bool unique = true;
    for (std::size_t k = t - delta; k <= t + delta && unique; ++k) {
      if (k != t && labels[k] != v) unique = false;
    }
    if (unique) out[t] = v;
  }
  return out;
}

std::vector<std::size_t> change_points(std::span<const int> labels) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != labels[i - 1]) out.push_back(i + 1);
  }
  return out;
}

OutlierMetric parse_outlier_metric(const std::string& name) {
  if (name == "degree") return OutlierMetric::Degree;
  if (name == "strength") return OutlierMetric::Strength;
  throw Error("unknown outlier metric '" + name + "'");
}

OutlierResult outlier_nodes(const Chronnet& c, OutlierMetric metric, double top_fraction) {
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) throw Error("top_fraction must be in (0, 1)");
  std::vector<CellId> nodes;
  std::vector<std::uint64_t> values;
  if (metric == OutlierMetric::Degree) {
    auto d = degree(c);
    nodes = std::move(d.nodes);
    values = std::move(d.k);
  } else {
    auto s = strength(c);
    nodes = std::move(s.nodes);
    values = std::move(s.s);
  }
  OutlierResult r;
  if (nodes.empty()) return r;
  std::vector<std::uint64_t> sorted = values;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  auto count = static_cast<std::size_t>(std::ceil(top_fraction * static_cast<double>(sorted.size()) - 1e-9));
  count = std::clamp<std::size_t>(count, 1, sorted.size());
  r.cutoff = sorted[count - 1];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (values[i] >= r.cutoff) r.nodes.push_back(nodes[i]);
  }
  r.degenerate = r.nodes.size() == nodes.size() && count < nodes.size();
  return r;
}

double adjusted_rand_index(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw Error("ARI needs labelings of equal length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  auto c2 = [](double x) { return x * (x - 1.0) / 2.0; };
  double index = 0.0, sa = 0.0, sb = 0.0;
  for (const auto& [k, v] : joint) index += c2(v);
  for (const auto& [k, v] : ra) sa += c2(v);
  for (const auto& [k, v] : rb) sb += c2(v);
  const double expected = sa * sb / c2(n);
  const double max_index = 0.5 * (sa + sb);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

}  // namespace chronnet
