#include "chronnet_app/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "chronnet/chronnet.hpp"
#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"
#include "chronnet/fitting.hpp"
#include "chronnet/measures.hpp"
#include "chronnet/mining.hpp"
#include "chronnet/network_io.hpp"
#include "chronnet_app/tables.hpp"

namespace chronnet::app {

using nlohmann::json;

SourceData load_source(const EventSource& src) {
  SourceData d;
  if (src.scenario) {
    const auto spec = make_scenario(*src.scenario, src.seed, src.params);
    auto labeled = generate_labeled_events(spec);
    d.truth = std::move(labeled.period);
    d.events = std::move(labeled.events);
    d.native_grid = spec.grid;
  } else if (src.ode) {
    d.events = sample_trajectory(make_ode(*src.ode, src.params));
  } else if (src.input) {
    if (!std::filesystem::exists(*src.input)) {
      throw Error("input file '" + src.input->string() + "' does not exist");
    }
    d.events = sort_events(load_events(*src.input, src.format, src.filters));
  } else {
    throw Error("no event source");
  }
  if (d.events.empty()) throw Error("the event source produced no events");
  return d;
}

GridSpec resolve_grid(const GridConfig& g, const SourceData& data) {
  if (!g.kind) {
    if (!data.native_grid) throw Error("no grid configured");
    return *data.native_grid;
  }
  const BBox box = g.bbox ? *g.bbox : data_bbox(data.events, g.symmetric);
  return *g.kind == GridKind::Rect ? GridSpec::rect(box, g.nx, g.ny) : GridSpec::hex(box, g.r);
}

namespace {

std::vector<double> as_doubles(const std::vector<std::uint64_t>& v) { return {v.begin(), v.end()}; }

json summary_of(const std::vector<std::uint64_t>& v) {
  const auto m = sample_moments(as_doubles(v));
  json j;
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  j["skewness"] = m.skewness;
  j["excess_kurtosis"] = m.excess_kurtosis;
  j["max"] = v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  return j;
}

template <typename F>
json guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    return json{{"error", e.what()}};
  }
}

json path_json(const PathStats& p) {
  return {{"avg_path_length", p.avg_path_length},
          {"diameter", p.diameter},
          {"reachable_pairs", p.reachable_pairs},
          {"component_count", p.component_count},
          {"largest_component_fraction", p.largest_component_fraction}};
}

std::string variant_label(const std::string& kind, double v) { return kind + "-" + csv::format_double(v); }

struct Variant {
  std::string label;
  std::optional<double> tau;
  std::optional<double> keep;
};

json analyse(const RunConfig& cfg, const Variant& var, const Chronnet& base, const SourceData& data,
             const GridSpec& grid, ArtifactDir& dir) {
  Chronnet net = base;
  if (var.tau) net = prune(net, *var.tau);
  if (var.keep) net = prune_quantile(net, *var.keep);
  if (cfg.drop_isolated) net = remove_isolated(net);
  const std::string pre = var.label + "/";
  write_network(net, dir.file(pre + "net.csv"), dir.file(pre + "net.meta.json"));

  json r;
  r["label"] = var.label;
  r["tau"] = var.tau ? json(*var.tau) : json(nullptr);
  r["keep_fraction"] = var.keep ? json(*var.keep) : json(nullptr);
  r["nodes"] = net.node_count();
  r["links"] = net.link_count();
  r["total_weight"] = net.total_weight();
  r["retained_link_fraction"] =
      base.link_count() ? static_cast<double>(net.link_count()) / static_cast<double>(base.link_count()) : 0.0;
  r["retained_weight_fraction"] =
      base.total_weight() ? static_cast<double>(net.total_weight()) / static_cast<double>(base.total_weight())
                          : 0.0;

  const auto deg = degree(net);
  const auto str = strength(net);
  std::vector<std::pair<std::string, std::vector<double>>> columns{{"degree", as_doubles(deg.k)},
                                                                    {"strength", as_doubles(str.s)}};
  json m = json::object();
  const auto wants = [&](const char* name) {
    return std::find(cfg.measures.begin(), cfg.measures.end(), name) != cfg.measures.end();
  };
  if (wants("degree")) {
    write_distribution(dir.file(pre + "degree_distribution.csv"), deg.k);
    m["degree"] = summary_of(deg.k);
  }
  if (wants("strength")) {
    write_distribution(dir.file(pre + "strength_distribution.csv"), str.s);
    m["strength"] = summary_of(str.s);
  }
  if (wants("paths")) m["paths"] = guarded([&] { return path_json(path_stats(net, false, cfg.threads)); });
  if (wants("weighted-paths")) {
    m["weighted_paths"] = guarded([&] { return path_json(path_stats(net, true, cfg.threads)); });
  }
  if (wants("transitivity")) m["transitivity"] = guarded([&] { return json(transitivity(net)); });
  if (wants("density")) {
    m["density"] = guarded([&] { return json(edge_density(net)); });
    m["average_degree"] = average_degree(net);
  }
  if (wants("components")) {
    const auto comp = connected_components(net);
    const auto sizes = comp.sizes();
    m["components"] = {{"count", comp.count},
                       {"largest", sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end())},
                       {"articulation_points", articulation_points(net).size()}};
  }
  r["measures"] = m;

  for (auto kind : cfg.centralities) {
    columns.emplace_back(to_string(kind), centrality(net, kind, cfg.threads));
    const auto& v = columns.back().second;
    if (!v.empty()) {
      const auto top = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
      r["centrality"][to_string(kind)] = {{"top_cell", net.nodes()[top].value}, {"top_value", v[top]}};
    }
  }

  if (cfg.fit) {
    r["fit"] = tail_fits(cfg.fit->target == "degree" ? deg.k : str.s, cfg.fit->discrete);
    r["fit"]["target"] = cfg.fit->target;
  }

  if (cfg.communities) {
    const auto& cc = *cfg.communities;
    Partition p;
    json cj;
    cj["method"] = cc.method;
    if (cc.method == "fastgreedy") {
      const auto d = fast_greedy(net);
      write_dendrogram(dir.file(pre + "dendrogram.csv"), d);
      p = cc.k ? cut_dendrogram(d, *cc.k) : best_partition(d);
      cj["best_q"] = d.best_q;
      cj["best_community_count"] = d.best_community_count();
    } else {
      if (cc.k) throw Error("communities.k applies to fastgreedy only");
      p = label_propagation(net, cc.seed);
      cj["seed"] = cc.seed;
    }
    write_partition(dir.file(pre + "partition.csv"), p);
    cj["community_count"] = p.community_count;
    cj["modularity"] = p.modularity;
    std::vector<double> labels(p.label.begin(), p.label.end());
    columns.emplace_back("community", labels);

    const auto series = cluster_events(data.events, grid, p);
    cj["noise_events"] = series.noise_count;
    std::vector<int> corrected = series.labels;
    if (series.labels.size() > 2 * cc.delta) {
      corrected = correct_series(series.labels, cc.delta);
      cj["delta"] = cc.delta;
    } else {
      cj["delta"] = nullptr;
    }
    write_series(dir.file(pre + "series.csv"), data.events, series.labels, corrected, data.truth);
    const auto cps = change_points(corrected);
    {
      std::ofstream out(dir.file(pre + "change_points.csv"));
      out << "index\n";
      for (auto t : cps) out << t << '\n';
    }
    cj["change_points"] = cps.size();
    if (!data.truth.empty()) {
      cj["ari_raw"] = adjusted_rand_index(series.labels, data.truth);
      cj["ari_corrected"] = adjusted_rand_index(corrected, data.truth);
    }
    r["communities"] = cj;
  }

  if (cfg.outliers) {
    const auto o = outlier_nodes(net, cfg.outliers->metric, cfg.outliers->top_fraction);
    std::ofstream out(dir.file(pre + "outliers.csv"));
    out << "cell\n";
    for (auto c : o.nodes) out << c.value << '\n';
    std::vector<double> flag(net.node_count(), 0.0);
    for (auto c : o.nodes) flag[net.index_of(c)] = 1.0;
    columns.emplace_back("outlier", flag);
    r["outliers"] = {{"count", o.nodes.size()}, {"cutoff", o.cutoff}, {"degenerate", o.degenerate}};
  }

  write_node_table(dir.file(pre + "nodes.csv"), net, columns);
  return r;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  std::string stage = "setup";
  std::optional<ArtifactDir> dir;
  json report;
  try {
    dir.emplace(cfg.output);
    report["name"] = cfg.name;
    report["config"] = to_json(cfg);

    stage = "events";
    SourceData data = load_source(cfg.source);
    EventSet events_out = data.events;
    if (!data.truth.empty()) {
      std::vector<Event> tagged = data.events.events();
      for (std::size_t i = 0; i < tagged.size(); ++i) tagged[i].attrs["period"] = std::to_string(data.truth[i] + 1);
      events_out = EventSet(std::move(tagged));
    }
    write_events(events_out, dir->file("events.csv"));
    report["events"] = {{"count", data.events.size()},
                        {"time_span", data.events.time_span()},
                        {"distinct_timestamps", data.events.distinct_timestamps()},
                        {"parallel", data.events.has_parallel_events()},
                        {"ground_truth", !data.truth.empty()}};

    stage = "grid";
    const GridSpec grid = resolve_grid(cfg.grid, data);
    dir->write_json("grid.json", grid_to_json(grid));
    report["grid"] = grid_to_json(grid);

    stage = "build";
    const Chronnet raw = cfg.chunks > 1 ? build_parallel(data.events, grid, cfg.build, cfg.chunks, cfg.threads)
                                        : build(data.events, grid, cfg.build);
    write_network(raw, dir->file("net.csv"), dir->file("meta.json"));
    report["network"] = {{"directed", raw.directed()},
                         {"nodes", raw.node_count()},
                         {"links", raw.link_count()},
                         {"total_weight", raw.total_weight()}};

    if (cfg.snapshot_dt) {
      stage = "snapshots";
      const auto snaps = build_snapshots(data.events, grid, cfg.build, *cfg.snapshot_dt);
      std::ofstream summary(dir->file("snapshots/summary.csv"));
      summary << "index,t_start,t_end,nodes,links,total_weight\n";
      json sj = json::array();
      for (std::size_t k = 0; k < snaps.size(); ++k) {
        const auto& s = snaps[k];
        char name[64];
        std::snprintf(name, sizeof name, "snapshots/snapshot_%04zu.csv", k);
        std::ofstream edges(dir->file(name));
        write_edges(s.net, edges);
        summary << k << ',' << csv::format_double(s.window.t_start) << ',' << csv::format_double(s.window.t_end)
                << ',' << s.net.node_count() << ',' << s.net.link_count() << ',' << s.net.total_weight() << '\n';
        sj.push_back({{"t_start", s.window.t_start},
                      {"t_end", s.window.t_end},
                      {"links", s.net.link_count()},
                      {"total_weight", s.net.total_weight()}});
      }
      report["snapshots"] = sj;
    }

    const Chronnet base = cfg.undirected ? undirect(raw) : raw;
    std::vector<Variant> variants;
    for (double t : cfg.taus) variants.push_back({variant_label("tau", t), t, std::nullopt});
    if (cfg.keep_fraction) variants.push_back({variant_label("keep", *cfg.keep_fraction), std::nullopt, cfg.keep_fraction});
    if (variants.empty()) variants.push_back({"full", std::nullopt, std::nullopt});
    report["analyses"] = json::array();
    for (const auto& v : variants) {
      stage = "analysis:" + v.label;
      report["analyses"].push_back(analyse(cfg, v, base, data, grid, *dir));
    }

    stage = "report";
    dir->write_json("report.json", report);
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.failed_stage = stage;
    result.error = e.what();
  }
  result.report = report;
  if (dir) {
    json manifest;
    manifest["status"] = result.ok ? "ok" : "failed";
    manifest["failed_stage"] = result.ok ? json(nullptr) : json(result.failed_stage);
    manifest["error"] = result.ok ? json(nullptr) : json(result.error);
    manifest["files"] = dir->files();
    try {
      std::ofstream out(cfg.output / "MANIFEST.json");
      out << manifest.dump(2) << '\n';
    } catch (...) {
    }
  }
  return result;
}

}  // namespace chronnet::app
