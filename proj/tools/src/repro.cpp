#include "chronnet_app/repro.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "chronnet/error.hpp"
#include "chronnet/fitting.hpp"
#include "chronnet/measures.hpp"
#include "chronnet/mining.hpp"
#include "chronnet/network_io.hpp"
#include "chronnet/random.hpp"
#include "chronnet_app/config.hpp"
#include "chronnet_app/tables.hpp"

namespace chronnet::app {

using nlohmann::json;

bool ReproResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4", "fig5"}; }

OdeSpec perturbed_ode(const std::string& name, std::uint64_t seed, double eps) {
  OdeSpec spec = make_ode(name);
  Rng rng(seed);
  for (auto& v : spec.initial) v += eps * (2.0 * rng.uniform01() - 1.0);
  return spec;
}

Chronnet lorenz_network(std::uint64_t seed) {
  const EventSet es = sample_trajectory(perturbed_ode("lorenz", seed, 0.1));
  const GridSpec g = GridSpec::rect(data_bbox(es, true), 15, 15);
  return remove_isolated(prune(undirect(build(es, g)), 15.0));
}

namespace {

std::vector<double> positive(const std::vector<std::uint64_t>& v) {
  std::vector<double> out;
  for (auto x : v) {
    if (x > 0) out.push_back(static_cast<double>(x));
  }
  return out;
}

std::size_t required(std::size_t seeds, double fraction) {
  return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(seeds) - 1e-9));
}

std::string tally(std::size_t hits, std::size_t seeds, std::size_t need) {
  std::ostringstream s;
  s << hits << "/" << seeds << " seeds (need " << need << ")";
  return s.str();
}

class Output {
 public:
  Output(const ReproOptions& opts, const std::string& figure) {
    if (opts.output) dir_.emplace(*opts.output / figure);
  }
  [[nodiscard]] bool enabled() const { return dir_.has_value(); }
  ArtifactDir& dir() { return *dir_; }

 private:
  std::optional<ArtifactDir> dir_;
};

Chronnet scenario_network(const std::string& name, std::uint64_t seed, const ScenarioParams& params = {}) {
  const auto spec = make_scenario(name, seed, params);
  return undirect(build(generate_events(spec), spec.grid));
}

// -- fig1: degree and strength distributions of three probability layouts

ReproResult fig1(const ReproOptions& opts) {
  ReproResult r{"fig1", {}, json::object()};
  Output out(opts, "fig1");
  const char* names[] = {"uniform", "power-law", "exponential"};
  std::map<std::string, std::vector<json>> rows;
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    const auto seed = opts.first_seed + s;
    for (const char* name : names) {
      const auto net = scenario_network(name, seed);
      const auto k = degree(net).k;
      const auto st = strength(net).s;
      const auto m = sample_moments(std::vector<double>(k.begin(), k.end()));
      json row;
      row["seed"] = seed;
      row["nodes"] = net.node_count();
      row["links"] = net.link_count();
      row["degree_skewness"] = m.skewness;
      row["degree_excess_kurtosis"] = m.excess_kurtosis;
      row["degree_fits"] = tail_fits(k, true);
      row["strength_fits"] = tail_fits(st, true);
      rows[name].push_back(row);
      if (s == 0 && out.enabled()) {
        write_distribution(out.dir().file(std::string(name) + "_degree_distribution.csv"), k);
        write_distribution(out.dir().file(std::string(name) + "_strength_distribution.csv"), st);
      }
    }
  }
  for (const auto& [name, v] : rows) r.data[name] = v;

  const std::size_t need = required(opts.seeds, 0.8);
  std::size_t skew_ok = 0;
  std::size_t ks_ok = 0;
  std::size_t decay_ok = 0;
  const auto gamma_of = [](const json& fits) -> double {
    return fits["powerlaw"].contains("gamma") ? fits["powerlaw"]["gamma"].get<double>() : std::nan("");
  };
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    if (std::abs(rows["uniform"][s]["degree_skewness"].get<double>()) < 0.3) ++skew_ok;
    const auto& pf = rows["power-law"][s]["strength_fits"];
    if (pf["powerlaw"].contains("ks") && pf["lognormal"].contains("ks") &&
        pf["powerlaw"]["ks"].get<double>() < pf["lognormal"]["ks"].get<double>()) {
      ++ks_ok;
    }
    if (gamma_of(rows["exponential"][s]["strength_fits"]) > gamma_of(pf)) ++decay_ok;
  }
  r.checks.push_back({"uniform degree |skewness| < 0.3", skew_ok >= need, tally(skew_ok, opts.seeds, need)});
  r.checks.push_back({"power-law strength tail: KS(power law) < KS(log-normal)", ks_ok >= need,
                      tally(ks_ok, opts.seeds, need)});
  r.checks.push_back({"exponential strength exponent > power-law strength exponent", decay_ok >= need,
                      tally(decay_ok, opts.seeds, need)});
  return r;
}

// -- fig2: pruning sweep on the power-law layout

ReproResult fig2(const ReproOptions& opts) {
  ReproResult r{"fig2", {}, json::object()};
  Output out(opts, "fig2");
  const double taus[] = {1, 2, 5, 9};
  json seeds = json::array();
  std::size_t retained_ok = 0;
  std::size_t gamma_ok = 0;
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    const auto seed = opts.first_seed + s;
    const auto net = scenario_network("power-law-dense", seed);
    json row;
    row["seed"] = seed;
    row["links"] = net.link_count();
    for (double tau : taus) {
      const auto pruned = prune(net, tau);
      const auto k = degree(pruned).k;
      const double retained = static_cast<double>(pruned.link_count()) / static_cast<double>(net.link_count());
      const std::string key = "tau-" + std::to_string(static_cast<int>(tau));
      row["retained"][key] = retained;
      if (s == 0 && out.enabled()) write_distribution(out.dir().file("degree_distribution_" + key + ".csv"), k);
      if (tau == 9) {
        const auto fit = fit_power_law(positive(k));
        row["fit"] = fit_to_json(fit);
        if (retained <= 0.10) ++retained_ok;
        if (fit.gamma >= 1.6 && fit.gamma <= 2.5) ++gamma_ok;
      }
    }
    seeds.push_back(row);
  }
  r.data["seeds"] = seeds;
  const std::size_t need = required(opts.seeds, 0.8);
  r.checks.push_back({"tau=9 retained link fraction <= 0.10", retained_ok == opts.seeds,
                      tally(retained_ok, opts.seeds, opts.seeds)});
  r.checks.push_back({"tau=9 degree exponent in [1.6, 2.5]", gamma_ok >= need, tally(gamma_ok, opts.seeds, need)});
  return r;
}

// -- fig3: centrality views; the Lorenz chronnet is checked structurally

struct LorenzOutcome {
  CellId top;
  bool articulation = false;
  bool separates = false;
  std::size_t component_nodes = 0;
};

Chronnet largest_component(const Chronnet& c) {
  const auto comp = connected_components(c);
  const auto sizes = comp.sizes();
  const auto big = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  std::vector<CellId> drop;
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    if (comp.label[i] != big) drop.push_back(c.nodes()[i]);
  }
  return remove_nodes(c, drop);
}

LorenzOutcome lorenz_outcome(const Chronnet& net) {
  LorenzOutcome o;
  const Chronnet lc = largest_component(net);
  o.component_nodes = lc.node_count();
  const auto clo = centrality(lc, CentralityKind::Closeness);
  const auto top = static_cast<std::size_t>(std::max_element(clo.begin(), clo.end()) - clo.begin());
  o.top = lc.nodes()[top];
  const auto aps = articulation_points(lc);
  o.articulation = std::find(aps.begin(), aps.end(), o.top) != aps.end();
  if (!o.articulation) return o;

  // Each lobe is represented by its strongest cell on that side of x = 0.
  const auto st = strength(lc).s;
  std::optional<std::size_t> left;
  std::optional<std::size_t> right;
  for (std::size_t i = 0; i < lc.node_count(); ++i) {
    if (i == top) continue;
    const double x = cell_center(lc.grid(), lc.nodes()[i]).x;
    if (x == 0) continue;
    auto& side = x < 0 ? left : right;
    if (!side || st[i] > st[*side]) side = i;
  }
  if (!left || !right) return o;
  const Chronnet rest = remove_nodes(lc, {o.top});
  const auto comp = connected_components(rest);
  o.separates = comp.label[rest.index_of(lc.nodes()[*left])] != comp.label[rest.index_of(lc.nodes()[*right])];
  return o;
}

ReproResult fig3(const ReproOptions& opts) {
  ReproResult r{"fig3", {}, json::object()};
  Output out(opts, "fig3");
  json seeds = json::array();
  std::size_t ok = 0;
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    const auto seed = opts.first_seed + s;
    const Chronnet net = lorenz_network(seed);
    const auto o = lorenz_outcome(net);
    const auto c = cell_center(net.grid(), o.top);
    seeds.push_back({{"seed", seed},
                     {"nodes", net.node_count()},
                     {"component_nodes", o.component_nodes},
                     {"top_cell", o.top.value},
                     {"top_x", c.x},
                     {"top_y", c.y},
                     {"articulation", o.articulation},
                     {"separates_lobes", o.separates}});
    if (o.articulation && o.separates) ++ok;
    if (s == 0 && out.enabled()) {
      write_network(net, out.dir().file("lorenz_net.csv"), out.dir().file("lorenz_net.meta.json"));
      write_node_table(out.dir().file("lorenz_nodes.csv"), net,
                       {{"closeness", centrality(net, CentralityKind::Closeness, opts.threads)},
                        {"degree", centrality(net, CentralityKind::Degree, opts.threads)}});
    }
  }
  r.data["lorenz"] = seeds;

  if (out.enabled()) {
    const auto seed = opts.first_seed;
    const auto pl = prune(scenario_network("power-law", seed, {{"nx", 10}, {"ny", 10}, {"T", 100000}}), 1.0);
    write_node_table(out.dir().file("powerlaw_nodes.csv"), pl,
                     {{"degree", centrality(pl, CentralityKind::Degree, opts.threads)}});
    const auto tc = prune(scenario_network("two-cluster", seed), 1.0);
    write_node_table(out.dir().file("twocluster_nodes.csv"), tc,
                     {{"betweenness", centrality(tc, CentralityKind::Betweenness, opts.threads)}});
    const EventSet ros = sample_trajectory(make_ode("rossler"));
    const auto rn = undirect(build(ros, GridSpec::rect(data_bbox(ros, false), 30, 30)));
    write_node_table(out.dir().file("rossler_nodes.csv"), rn,
                     {{"weighted-closeness", centrality(rn, CentralityKind::WeightedCloseness, opts.threads)},
                      {"closeness", centrality(rn, CentralityKind::Closeness, opts.threads)}});
  }

  const std::size_t need = required(opts.seeds, 0.8);
  r.checks.push_back({"Lorenz top-closeness node is an articulation point splitting the lobes", ok >= need,
                      tally(ok, opts.seeds, need)});
  return r;
}

// -- fig4: four-period community clustering

ReproResult fig4(const ReproOptions& opts) {
  ReproResult r{"fig4", {}, json::object()};
  Output out(opts, "fig4");
  json seeds = json::array();
  std::size_t best_ok = 0;
  std::size_t split_ok = 0;
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    const auto seed = opts.first_seed + s;
    const auto spec = make_scenario("four-period", seed);
    const auto le = generate_labeled_events(spec);
    const auto net = undirect(build(le.events, spec.grid));
    const auto d = fast_greedy(net);
    const auto best = best_partition(d);
    const auto series = cluster_events(le.events, spec.grid, best);
    const auto corrected = correct_series(series.labels, 3);
    const double ari_raw = adjusted_rand_index(series.labels, le.period);
    const double ari = adjusted_rand_index(corrected, le.period);

    const auto two = cut_dendrogram(d, 2);
    const auto two_series = correct_series(cluster_events(le.events, spec.grid, two).labels, 3);
    std::vector<int> halves(le.period.size());
    for (std::size_t i = 0; i < halves.size(); ++i) halves[i] = le.period[i] < 2 ? 0 : 1;
    const double ari_two = adjusted_rand_index(two_series, halves);

    const bool good = d.best_community_count() == 4 && ari >= 1.0 - 1e-12;
    if (good) ++best_ok;
    if (ari_two >= 1.0 - 1e-12) ++split_ok;
    seeds.push_back({{"seed", seed},
                     {"nodes", net.node_count()},
                     {"best_community_count", d.best_community_count()},
                     {"best_q", d.best_q},
                     {"ari_raw", ari_raw},
                     {"ari_corrected", ari},
                     {"ari_two_way", ari_two}});
    if (s == 0 && out.enabled()) {
      std::vector<Event> tagged = le.events.events();
      for (std::size_t i = 0; i < tagged.size(); ++i) tagged[i].attrs["period"] = std::to_string(le.period[i] + 1);
      write_events(EventSet(std::move(tagged)), out.dir().file("events.csv"));
      write_dendrogram(out.dir().file("dendrogram.csv"), d);
      write_partition(out.dir().file("partition.csv"), best);
      write_partition(out.dir().file("partition_k2.csv"), two);
      write_series(out.dir().file("series.csv"), le.events, series.labels, corrected, le.period);
    }
  }
  r.data["seeds"] = seeds;
  const std::size_t need = required(opts.seeds, 0.9);
  r.checks.push_back({"best cut has 4 communities and corrected ARI = 1", best_ok >= need,
                      tally(best_ok, opts.seeds, need)});
  r.checks.push_back({"k=2 cut separates periods {1,2} from {3,4}", split_ok == opts.seeds,
                      tally(split_ok, opts.seeds, opts.seeds)});
  return r;
}

// -- fig5: change points of three alternating regions

ReproResult fig5(const ReproOptions& opts) {
  ReproResult r{"fig5", {}, json::object()};
  Output out(opts, "fig5");
  constexpr std::size_t delta = 3;
  json seeds = json::array();
  std::size_t ok = 0;
  for (std::size_t s = 0; s < opts.seeds; ++s) {
    const auto seed = opts.first_seed + s;
    const auto spec = make_scenario("three-region", seed);
    const auto le = generate_labeled_events(spec);
    const auto net = undirect(build(le.events, spec.grid));
    const auto d = fast_greedy(net);
    const auto p = best_partition(d);
    const auto series = cluster_events(le.events, spec.grid, p);
    const auto corrected = correct_series(series.labels, delta);
    const auto detected = change_points(corrected);
    const auto truth = change_points(le.period);
    const auto near = [&](std::size_t a, const std::vector<std::size_t>& set) {
      return std::any_of(set.begin(), set.end(), [&](std::size_t b) { return (a > b ? a - b : b - a) <= delta; });
    };
    std::size_t missed = 0;
    std::size_t spurious = 0;
    for (auto b : truth) missed += !near(b, detected);
    for (auto c : detected) spurious += !near(c, truth);
    if (missed == 0 && spurious == 0) ++ok;
    seeds.push_back({{"seed", seed},
                     {"communities", p.community_count},
                     {"boundaries", truth.size()},
                     {"detected", detected.size()},
                     {"missed", missed},
                     {"spurious", spurious}});
    if (s == 0 && out.enabled()) {
      write_series(out.dir().file("series.csv"), le.events, series.labels, corrected, le.period);
      std::ofstream cp(out.dir().file("change_points.csv"));
      cp << "index,kind\n";
      for (auto t : truth) cp << t << ",truth\n";
      for (auto t : detected) cp << t << ",detected\n";
    }
  }
  r.data["seeds"] = seeds;
  r.checks.push_back({"every boundary detected within +-3 and no spurious change points", ok == opts.seeds,
                      tally(ok, opts.seeds, opts.seeds)});
  return r;
}

}  // namespace

ReproResult repro(const std::string& figure, const ReproOptions& opts) {
  if (opts.seeds == 0) throw Error("repro needs at least one seed");
  ReproResult r;
  if (figure == "fig1") {
    r = fig1(opts);
  } else if (figure == "fig2") {
    r = fig2(opts);
  } else if (figure == "fig3") {
    r = fig3(opts);
  } else if (figure == "fig4") {
    r = fig4(opts);
  } else if (figure == "fig5") {
    r = fig5(opts);
  } else {
    throw Error("unknown figure '" + figure + "' (expected fig1..fig5)");
  }
  if (opts.output) {
    ArtifactDir dir(*opts.output / figure);
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    dir.write_json("summary.json", {{"figure", figure}, {"passed", r.passed()}, {"checks", checks}, {"data", r.data}});
  }
  return r;
}

}  // namespace chronnet::app
