#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chronnet/chronnet.hpp"
#include "chronnet/csv.hpp"
#include "chronnet/datagen.hpp"
#include "chronnet/error.hpp"
#include "chronnet/events.hpp"
#include "chronnet/fitting.hpp"
#include "chronnet/measures.hpp"
#include "chronnet/mining.hpp"
#include "chronnet/network_io.hpp"
#include "chronnet_app/config.hpp"
#include "chronnet_app/pipeline.hpp"
#include "chronnet_app/repro.hpp"
#include "chronnet_app/tables.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace chronnet;
using namespace chronnet::app;

namespace {

struct EventArgs {
  std::string path;
  std::string format = "generic-csv";
  double min_confidence = 75.0;
  std::string granularity = "day";
  std::vector<std::string> keep_types;

  void attach(CLI::App* cmd) {
    cmd->add_option("--events", path, "Event CSV")->required();
    cmd->add_option("--format", format, "generic-csv | mcd14ml-csv")->capture_default_str();
    cmd->add_option("--min-confidence", min_confidence, "mcd14ml: keep rows with confidence above this")
        ->capture_default_str();
    cmd->add_option("--granularity", granularity, "mcd14ml timestamp unit: day | minute")->capture_default_str();
    cmd->add_option("--keep-type", keep_types, "mcd14ml: keep only these type values");
  }

  [[nodiscard]] EventSet load() const {
    FilterSpec f;
    f.min_confidence = min_confidence;
    if (granularity == "day") {
      f.granularity = TimeGranularity::Day;
    } else if (granularity == "minute") {
      f.granularity = TimeGranularity::Minute;
    } else {
      throw Error("unknown granularity '" + granularity + "'");
    }
    f.keep_types = keep_types;
    return sort_events(load_events(path, parse_event_format(format), f));
  }
};

struct GridArgs {
  std::string grid_file;
  std::string kind;
  int nx = 0;
  int ny = 0;
  double r = 0.0;
  std::string bbox;
  bool symmetric = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--grid-file", grid_file, "Grid JSON (as written by generate)");
    cmd->add_option("--grid", kind, "rect | hex");
    cmd->add_option("--nx", nx, "Rect columns");
    cmd->add_option("--ny", ny, "Rect rows (default nx)");
    cmd->add_option("--r", r, "Hex circumradius");
    cmd->add_option("--bbox", bbox, "xmin,xmax,ymin,ymax (default: data box)");
    cmd->add_flag("--symmetric", symmetric, "Widen the data box to be symmetric about the origin");
  }

  [[nodiscard]] GridSpec resolve(const EventSet& es, const std::string& events_path) const {
    fs::path file = grid_file;
    if (file.empty() && kind.empty()) {
      file = fs::path(events_path).replace_extension(".grid.json");
      if (!fs::exists(file)) throw Error("no grid given and no '" + file.string() + "' next to the events");
    }
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw Error("cannot open grid file '" + file.string() + "'");
      json j;
      in >> j;
      return grid_from_json(j.contains("grid") ? j["grid"] : j);
    }
    GridConfig g;
    g.kind = parse_grid_kind(kind);
    g.nx = nx;
    g.ny = ny > 0 ? ny : nx;
    g.r = r;
    g.symmetric = symmetric;
    if (!bbox.empty()) {
      const auto f = csv::split_line(bbox);
      double v[4];
      if (f.size() != 4) throw Error("--bbox needs four comma-separated numbers");
      for (int i = 0; i < 4; ++i) {
        if (!csv::parse_double(f[i], v[i])) throw Error("--bbox needs four comma-separated numbers");
      }
      g.bbox = BBox{v[0], v[1], v[2], v[3]};
    }
    if (*g.kind == GridKind::Rect && (g.nx < 1 || g.ny < 1)) throw Error("rect grid needs --nx");
    if (*g.kind == GridKind::Hex && !(g.r > 0)) throw Error("hex grid needs --r");
    SourceData data;
    data.events = es;
    return resolve_grid(g, data);
  }
};

std::vector<double> read_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open values file '" + path + "'");
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (csv::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    double v = 0.0;
    if (!csv::parse_double(f[0], v)) {
      if (lineno == 1) continue;
      throw ParseError(path, lineno, "non-numeric value");
    }
    out.push_back(v);
  }
  return out;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream f(out);
    if (!f) throw Error("cannot write '" + out + "'");
    f << j.dump(2) << '\n';
  }
}

int print_repro(const ReproResult& r) {
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << r.figure << ": " << c.name << " -- " << c.detail << '\n';
  }
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chronnet: chronological networks from spatiotemporal events"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (also CHRONNET_THREADS); 0 = hardware count");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a synthetic event set");
  std::string g_scenario;
  std::uint64_t g_seed = 1;
  std::string g_out;
  std::vector<std::string> g_params;
  bool g_list = false;
  gen->add_option("--scenario", g_scenario, "Scenario or ODE name (see --list)");
  gen->add_option("--seed", g_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", g_out, "Output events CSV");
  gen->add_option("--param", g_params, "Parameter override key=value (repeatable)");
  gen->add_flag("--list", g_list, "List scenarios with their default parameters");

  // build
  auto* bld = app.add_subcommand("build", "Build a chronnet from events");
  EventArgs b_events;
  GridArgs b_grid;
  BuildOptions b_opts;
  std::string b_dmax = "inf";
  std::size_t b_chunks = 1;
  bool b_undirected = false;
  std::string b_out;
  b_events.attach(bld);
  b_grid.attach(bld);
  bld->add_option("--h", b_opts.h, "Offset between linked events")->capture_default_str();
  bld->add_option("--d-max,--dmax", b_dmax, "Maximum cell-center distance of a link")->capture_default_str();
  bld->add_flag("--all-cells", b_opts.all_cells, "Every grid cell becomes a node");
  bld->add_option("--chunks", b_chunks, "Build on this many segments in parallel")->capture_default_str();
  bld->add_flag("--undirected", b_undirected, "Write the undirected projection");
  bld->add_option("--out", b_out, "Edge list CSV (meta JSON written alongside)")->required();

  // prune
  auto* prn = app.add_subcommand("prune", "Remove weak links");
  std::string p_net;
  std::optional<double> p_tau;
  std::optional<double> p_keep;
  bool p_undirected = false;
  bool p_isolated = false;
  std::string p_out;
  prn->add_option("--net", p_net, "Input edge list")->required();
  auto* tau_opt = prn->add_option("--tau", p_tau, "Drop links with weight <= tau");
  prn->add_option("--keep-fraction,--keep-top", p_keep, "Keep the heaviest fraction of links")->excludes(tau_opt);
  prn->add_flag("--undirected", p_undirected, "Project to undirected before pruning");
  prn->add_flag("--drop-isolated", p_isolated, "Remove nodes left without links");
  prn->add_option("--out", p_out, "Output edge list")->required();

  // snapshots
  auto* snp = app.add_subcommand("snapshots", "Build one chronnet per time window");
  EventArgs s_events;
  GridArgs s_grid;
  double s_dt = 0.0;
  std::size_t s_h = 1;
  std::string s_dir;
  s_events.attach(snp);
  s_grid.attach(snp);
  snp->add_option("--dt", s_dt, "Window length")->required();
  snp->add_option("--h", s_h, "Offset between linked events")->capture_default_str();
  snp->add_option("--out-dir", s_dir, "Output directory")->required();

  // measure
  auto* msr = app.add_subcommand("measure", "Network measures");
  std::string m_net;
  std::vector<std::string> m_measures{"degree", "strength", "paths", "weighted-paths", "transitivity", "density",
                                      "components"};
  std::vector<std::string> m_cent;
  std::string m_dir;
  std::string m_out;
  msr->add_option("--net", m_net, "Input edge list")->required();
  msr->add_option("--measures", m_measures, "Measures to compute")->delimiter(',');
  msr->add_option("--centrality", m_cent, "degree,betweenness,closeness,weighted-closeness")->delimiter(',');
  msr->add_option("--out-dir", m_dir, "Write nodes.csv and distribution tables here");
  msr->add_option("--out", m_out, "Report JSON (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit power-law / log-normal tails");
  std::string f_net;
  std::string f_values;
  std::string f_target = "degree";
  std::string f_family = "both";
  std::optional<double> f_xmin;
  bool f_continuous = false;
  std::string f_out;
  auto* fnet = fit->add_option("--net", f_net, "Edge list whose degrees or strengths are fitted");
  fit->add_option("--values", f_values, "CSV whose first column holds the samples")->excludes(fnet);
  fit->add_option("--target", f_target, "degree | strength")->capture_default_str();
  fit->add_option("--family", f_family, "powerlaw | lognormal | both")->capture_default_str();
  fit->add_option("--xmin", f_xmin, "Fixed lower cutoff");
  fit->add_flag("--continuous", f_continuous, "Continuous instead of discrete likelihoods");
  fit->add_option("--out", f_out, "Result JSON (default stdout)");

  // communities
  auto* com = app.add_subcommand("communities", "Community detection");
  std::string c_net;
  std::string c_method = "fastgreedy";
  std::optional<std::size_t> c_k;
  std::uint64_t c_seed = 1;
  std::string c_out;
  std::string c_dendro;
  com->add_option("--net", c_net, "Input edge list")->required();
  com->add_option("--method", c_method, "fastgreedy | labelprop")->capture_default_str();
  com->add_option("--k", c_k, "Cut the fast-greedy dendrogram into k communities");
  com->add_option("--seed", c_seed, "Label propagation seed")->capture_default_str();
  com->add_option("--out", c_out, "Partition CSV cell,community")->required();
  com->add_option("--dendrogram", c_dendro, "Also write the merge sequence");

  // cluster
  auto* clu = app.add_subcommand("cluster", "Label events by community");
  EventArgs k_events;
  std::string k_part;
  std::string k_grid;
  std::size_t k_delta = 3;
  std::string k_out;
  std::string k_truth;
  k_events.attach(clu);
  clu->add_option("--partition", k_part, "Partition CSV")->required();
  clu->add_option("--grid-file", k_grid, "Grid JSON (default: the partition's meta file)");
  clu->add_option("--delta", k_delta, "Correction window radius (odd)")->capture_default_str();
  clu->add_option("--out", k_out, "Series CSV")->required();
  clu->add_option("--truth-attr", k_truth, "Event attribute holding ground-truth labels (ARI report)");

  // changes
  auto* chg = app.add_subcommand("changes", "Change points of a community series");
  std::string h_series;
  std::string h_column = "corrected";
  std::string h_out;
  chg->add_option("--series", h_series, "Series CSV from cluster")->required();
  chg->add_option("--column", h_column, "Label column")->capture_default_str();
  chg->add_option("--out", h_out, "Result JSON (default stdout)");

  // outliers
  auto* out = app.add_subcommand("outliers", "Highest degree / strength nodes");
  std::string o_net;
  std::string o_metric = "degree";
  double o_frac = 0.02;
  std::string o_out;
  out->add_option("--net", o_net, "Input edge list")->required();
  out->add_option("--metric", o_metric, "degree | strength")->capture_default_str();
  out->add_option("--top-fraction", o_frac, "Fraction of nodes to flag")->capture_default_str();
  out->add_option("--out", o_out, "CSV of flagged cells (default stdout)");

  // run
  auto* rn = app.add_subcommand("run", "Run a JSON-configured pipeline");
  std::string r_config;
  std::string r_out;
  rn->add_option("--config", r_config, "Run config JSON")->required();
  rn->add_option("--out", r_out, "Override the output directory");

  // repro
  auto* rep = app.add_subcommand("repro", "Reproduce a figure-class experiment");
  std::string e_fig;
  std::string e_out;
  std::size_t e_seeds = 10;
  std::uint64_t e_first = 1;
  rep->add_option("figure", e_fig, "fig1..fig5 or all")->required();
  rep->add_option("--out", e_out, "Artifact directory");
  rep->add_option("--seeds", e_seeds, "Number of seeds")->capture_default_str();
  rep->add_option("--first-seed", e_first, "First seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (threads > 0) setenv("CHRONNET_THREADS", std::to_string(threads).c_str(), 1);

  try {
    if (*gen) {
      if (g_list) {
        for (const auto& n : scenario_names()) std::cout << n << ' ' << json(scenario_defaults(n)).dump() << '\n';
        for (const auto& n : ode_names()) std::cout << n << ' ' << json(ode_defaults(n)).dump() << '\n';
        return 0;
      }
      if (g_scenario.empty() || g_out.empty()) throw Error("generate needs --scenario and --out");
      ScenarioParams params;
      for (const auto& kv : g_params) params.insert(parse_param(kv));
      const auto odes = ode_names();
      if (std::find(odes.begin(), odes.end(), g_scenario) != odes.end()) {
        write_events(sample_trajectory(make_ode(g_scenario, params)), g_out);
      } else {
        const auto spec = make_scenario(g_scenario, g_seed, params);
        const auto le = generate_labeled_events(spec);
        std::vector<Event> tagged = le.events.events();
        for (std::size_t i = 0; i < tagged.size(); ++i) tagged[i].attrs["period"] = std::to_string(le.period[i] + 1);
        write_events(EventSet(std::move(tagged)), g_out);
        std::ofstream grid(fs::path(g_out).replace_extension(".grid.json"));
        grid << grid_to_json(spec.grid).dump(2) << '\n';
      }
      return 0;
    }

    if (*bld) {
      const EventSet es = b_events.load();
      const GridSpec g = b_grid.resolve(es, b_events.path);
      if (b_dmax != "inf") {
        if (!csv::parse_double(b_dmax, b_opts.d_max)) throw Error("--d-max must be a number or inf");
      }
      Chronnet c = b_chunks > 1 ? build_parallel(es, g, b_opts, b_chunks) : build(es, g, b_opts);
      if (b_undirected) c = undirect(c);
      write_network(c, b_out);
      std::cerr << "nodes " << c.node_count() << ", links " << c.link_count() << ", weight " << c.total_weight()
                << '\n';
      return 0;
    }

    if (*prn) {
      if (!p_tau && !p_keep) throw Error("prune needs --tau or --keep-fraction");
      Chronnet c = read_network(p_net);
      if (p_undirected && c.directed()) c = undirect(c);
      const std::size_t before = c.link_count();
      c = p_tau ? prune(c, *p_tau) : prune_quantile(c, *p_keep);
      if (p_isolated) c = remove_isolated(c);
      write_network(c, p_out);
      std::cerr << "kept " << c.link_count() << " of " << before << " links\n";
      return 0;
    }

    if (*snp) {
      const EventSet es = s_events.load();
      const GridSpec g = s_grid.resolve(es, s_events.path);
      BuildOptions o;
      o.h = s_h;
      const auto snaps = build_snapshots(es, g, o, s_dt);
      fs::create_directories(s_dir);
      std::ofstream summary(fs::path(s_dir) / "summary.csv");
      summary << "index,t_start,t_end,nodes,links,total_weight\n";
      for (std::size_t k = 0; k < snaps.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%04zu.csv", k);
        write_network(snaps[k].net, fs::path(s_dir) / name);
        const auto& w = snaps[k].window;
        summary << k << ',' << csv::format_double(w.t_start) << ',' << csv::format_double(w.t_end) << ','
                << snaps[k].net.node_count() << ',' << snaps[k].net.link_count() << ','
                << snaps[k].net.total_weight() << '\n';
      }
      return 0;
    }

    if (*msr) {
      const Chronnet c = read_network(m_net);
      json report;
      report["nodes"] = c.node_count();
      report["links"] = c.link_count();
      report["total_weight"] = c.total_weight();
      const auto has = [&](const char* m) { return std::find(m_measures.begin(), m_measures.end(), m) != m_measures.end(); };
      const auto guarded = [](auto&& f) -> json {
        try {
          return f();
        } catch (const Error& e) {
          return json{{"error", e.what()}};
        }
      };
      const auto paths = [](const PathStats& p) {
        return json{{"avg_path_length", p.avg_path_length}, {"diameter", p.diameter},
                    {"reachable_pairs", p.reachable_pairs}, {"component_count", p.component_count},
                    {"largest_component_fraction", p.largest_component_fraction}};
      };
      const auto deg = degree(c);
      const auto str = strength(c);
      if (has("degree")) {
        const auto m = sample_moments(std::vector<double>(deg.k.begin(), deg.k.end()));
        report["degree"] = {{"mean", m.mean}, {"skewness", m.skewness}, {"excess_kurtosis", m.excess_kurtosis}};
      }
      if (has("strength")) {
        const auto m = sample_moments(std::vector<double>(str.s.begin(), str.s.end()));
        report["strength"] = {{"mean", m.mean}, {"skewness", m.skewness}, {"excess_kurtosis", m.excess_kurtosis}};
      }
      if (has("paths")) report["paths"] = guarded([&] { return paths(path_stats(c, false)); });
      if (has("weighted-paths")) report["weighted_paths"] = guarded([&] { return paths(path_stats(c, true)); });
      if (has("transitivity")) report["transitivity"] = guarded([&] { return json(transitivity(c)); });
      if (has("density")) {
        report["density"] = guarded([&] { return json(edge_density(c)); });
        report["average_degree"] = average_degree(c);
      }
      if (has("components")) {
        const auto comp = connected_components(c);
        report["components"] = {{"count", comp.count}, {"articulation_points", articulation_points(c).size()}};
      }
      std::vector<std::pair<std::string, std::vector<double>>> cols{
          {"degree", std::vector<double>(deg.k.begin(), deg.k.end())},
          {"strength", std::vector<double>(str.s.begin(), str.s.end())}};
      for (const auto& name : m_cent) {
        const auto kind = parse_centrality_kind(name);
        cols.emplace_back(to_string(kind), centrality(c, kind));
      }
      if (!m_dir.empty()) {
        fs::create_directories(m_dir);
        write_node_table(fs::path(m_dir) / "nodes.csv", c, cols);
        write_distribution(fs::path(m_dir) / "degree_distribution.csv", deg.k);
        write_distribution(fs::path(m_dir) / "strength_distribution.csv", str.s);
      }
      emit(report, m_out);
      return 0;
    }

    if (*fit) {
      std::vector<double> xs;
      if (!f_values.empty()) {
        xs = read_values(f_values);
      } else if (!f_net.empty()) {
        const Chronnet c = read_network(f_net);
        if (f_target == "degree") {
          for (auto v : degree(c).k) xs.push_back(static_cast<double>(v));
        } else if (f_target == "strength") {
          for (auto v : strength(c).s) xs.push_back(static_cast<double>(v));
        } else {
          throw Error("--target must be degree or strength");
        }
        std::erase_if(xs, [](double v) { return v <= 0; });
      } else {
        throw Error("fit needs --net or --values");
      }
      json j;
      std::optional<double> xmin = f_xmin;
      if (f_family == "powerlaw" || f_family == "both") {
        PowerLawOptions po;
        po.discrete = !f_continuous;
        po.x_min = f_xmin;
        const auto r = fit_power_law(xs, po);
        if (!xmin) xmin = r.x_min;
        j["powerlaw"] = fit_to_json(r);
      }
      if (f_family == "lognormal" || f_family == "both") {
        LogNormalOptions lo;
        lo.discrete = !f_continuous;
        lo.x_min = xmin;
        j["lognormal"] = fit_to_json(fit_log_normal(xs, lo));
      }
      if (j.empty()) throw Error("--family must be powerlaw, lognormal or both");
      emit(j, f_out);
      return 0;
    }

    if (*com) {
      const Chronnet c = read_network(c_net);
      Partition p;
      json j;
      if (c_method == "fastgreedy") {
        const auto d = fast_greedy(c);
        p = c_k ? cut_dendrogram(d, *c_k) : best_partition(d);
        if (!c_dendro.empty()) write_dendrogram(c_dendro, d);
        j["best_q"] = d.best_q;
        j["best_community_count"] = d.best_community_count();
      } else if (c_method == "labelprop") {
        if (c_k) throw Error("--k applies to fastgreedy only");
        p = label_propagation(c, c_seed);
      } else {
        throw Error("unknown method '" + c_method + "'");
      }
      write_partition(c_out, p);
      std::ofstream meta(default_meta_path(c_out));
      meta << json{{"grid", grid_to_json(c.grid())}}.dump(2) << '\n';
      j["communities"] = p.community_count;
      j["modularity"] = p.modularity;
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*clu) {
      const EventSet es = k_events.load();
      const Partition p = read_partition(k_part);
      fs::path gpath = k_grid.empty() ? default_meta_path(k_part) : fs::path(k_grid);
      std::ifstream gin(gpath);
      if (!gin) throw Error("cannot open grid file '" + gpath.string() + "'");
      json gj;
      gin >> gj;
      const GridSpec g = grid_from_json(gj.contains("grid") ? gj["grid"] : gj);
      const auto series = cluster_events(es, g, p);
      const auto corrected = correct_series(series.labels, k_delta);
      std::vector<int> truth;
      if (!k_truth.empty()) {
        for (const auto& e : es.events()) {
          const auto it = e.attrs.find(k_truth);
          long long v = 0;
          if (it == e.attrs.end() || !csv::parse_int64(it->second, v)) {
            throw Error("event lacks an integer '" + k_truth + "' attribute");
          }
          truth.push_back(static_cast<int>(v));
        }
      }
      write_series(k_out, es, series.labels, corrected, truth);
      json j{{"events", es.size()}, {"noise_events", series.noise_count}};
      if (!truth.empty()) {
        j["ari_raw"] = adjusted_rand_index(series.labels, truth);
        j["ari_corrected"] = adjusted_rand_index(corrected, truth);
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*chg) {
      std::ifstream in(h_series);
      if (!in) throw Error("cannot open series '" + h_series + "'");
      std::string line;
      if (!csv::read_line(in, line)) throw ParseError(h_series, 1, "empty series file");
      const auto header = csv::split_line(line);
      const auto it = std::find(header.begin(), header.end(), h_column);
      if (it == header.end()) throw ParseError(h_series, 1, "no column '" + h_column + "'");
      const auto col = static_cast<std::size_t>(it - header.begin());
      std::vector<int> labels;
      std::size_t lineno = 1;
      while (csv::read_line(in, line)) {
        ++lineno;
        const auto f = csv::split_line(line);
        long long v = 0;
        if (f.size() <= col || !csv::parse_int64(f[col], v)) throw ParseError(h_series, lineno, "bad label");
        labels.push_back(static_cast<int>(v));
      }
      emit(json{{"change_points", change_points(labels)}}, h_out);
      return 0;
    }

    if (*out) {
      const Chronnet c = read_network(o_net);
      const auto r = outlier_nodes(c, parse_outlier_metric(o_metric), o_frac);
      std::ostringstream s;
      s << "cell\n";
      for (auto cell : r.nodes) s << cell.value << '\n';
      if (o_out.empty()) {
        std::cout << s.str();
      } else {
        std::ofstream f(o_out);
        f << s.str();
      }
      std::cerr << r.nodes.size() << " outlier nodes, cutoff " << r.cutoff << (r.degenerate ? " (degenerate)" : "")
                << '\n';
      return 0;
    }

    if (*rn) {
      RunConfig cfg = load_run_config(r_config);
      if (!r_out.empty()) cfg.output = r_out;
      if (threads > 0) cfg.threads = threads;
      const auto result = run(cfg);
      if (!result.ok) {
        std::cerr << "chronnet run: stage '" << result.failed_stage << "' failed: " << result.error << '\n';
        return 1;
      }
      std::cerr << "artifacts in " << cfg.output.string() << '\n';
      return 0;
    }

    if (*rep) {
      ReproOptions opts;
      if (!e_out.empty()) opts.output = e_out;
      opts.seeds = e_seeds;
      opts.first_seed = e_first;
      opts.threads = threads;
      int status = 0;
      const auto figs = e_fig == "all" ? figure_names() : std::vector<std::string>{e_fig};
      for (const auto& f : figs) status |= print_repro(repro(f, opts));
      return status;
    }
  } catch (const std::exception& e) {
    std::cerr << "chronnet: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
