#include "chronnet_app/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "chronnet/error.hpp"

namespace chronnet::app {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw Error(where + " must be a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!ok.count(key)) throw Error("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j[key].is_null()) return fallback;
  return j[key].get<T>();
}

BBox bbox_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error("bbox must be [xmin, xmax, ymin, ymax]");
  BBox b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!(b.xmin < b.xmax && b.ymin < b.ymax)) throw Error("bbox must have xmin < xmax and ymin < ymax");
  return b;
}

TimeGranularity parse_granularity(const std::string& s) {
  if (s == "day") return TimeGranularity::Day;
  if (s == "minute") return TimeGranularity::Minute;
  throw Error("unknown granularity '" + s + "' (expected day or minute)");
}

std::string format_name(EventFormat f) {
  return f == EventFormat::GenericCsv ? "generic-csv" : "mcd14ml-csv";
}

EventSource parse_source(const json& j, const std::filesystem::path& base) {
  check_keys(j, "events", {"scenario", "ode", "input", "seed", "params", "format", "min_confidence",
                           "granularity", "keep_types"});
  EventSource s;
  int chosen = 0;
  if (j.contains("scenario")) s.scenario = j["scenario"].get<std::string>(), ++chosen;
  if (j.contains("ode")) s.ode = j["ode"].get<std::string>(), ++chosen;
  if (j.contains("input")) {
    std::filesystem::path p = j["input"].get<std::string>();
    s.input = p.is_relative() && !base.empty() ? base / p : p;
    ++chosen;
  }
  if (chosen != 1) throw Error("events needs exactly one of scenario, ode or input");
  s.seed = get_or<std::uint64_t>(j, "seed", 1);
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) s.params[k] = v.get<double>();
  }
  if (j.contains("format")) s.format = parse_event_format(j["format"].get<std::string>());
  s.filters.min_confidence = get_or<double>(j, "min_confidence", s.filters.min_confidence);
  if (j.contains("granularity")) s.filters.granularity = parse_granularity(j["granularity"]);
  if (j.contains("keep_types")) s.filters.keep_types = j["keep_types"].get<std::vector<std::string>>();
  return s;
}

GridConfig parse_grid(const json& j) {
  check_keys(j, "grid", {"kind", "nx", "ny", "r", "bbox", "symmetric"});
  GridConfig g;
  if (j.contains("kind")) g.kind = parse_grid_kind(j["kind"].get<std::string>());
  g.nx = get_or<int>(j, "nx", 0);
  g.ny = get_or<int>(j, "ny", g.nx);
  g.r = get_or<double>(j, "r", 0.0);
  if (j.contains("bbox") && !j["bbox"].is_null()) g.bbox = bbox_from_json(j["bbox"]);
  g.symmetric = get_or<bool>(j, "symmetric", false);
  if (g.kind == GridKind::Rect && (g.nx < 1 || g.ny < 1)) throw Error("rect grid needs nx, ny >= 1");
  if (g.kind == GridKind::Hex && !(g.r > 0.0)) throw Error("hex grid needs r > 0");
  return g;
}

}  // namespace

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
  try {
    check_keys(j, "run config", {"name", "events", "grid", "build", "undirected", "tau", "keep_fraction",
                                 "drop_isolated", "measures", "centralities", "fit", "communities",
                                 "outliers", "snapshots", "output", "threads"});
    RunConfig cfg;
    cfg.name = get_or<std::string>(j, "name", cfg.name);
    if (!j.contains("events")) throw Error("run config needs an events section");
    cfg.source = parse_source(j["events"], base_dir);
    if (j.contains("grid")) cfg.grid = parse_grid(j["grid"]);
    if (!cfg.source.scenario && !cfg.grid.kind) throw Error("grid.kind is required unless events come from a scenario");

    if (j.contains("build")) {
      const auto& b = j["build"];
      check_keys(b, "build", {"h", "d_max", "all_cells", "chunks"});
      cfg.build.h = get_or<std::size_t>(b, "h", 1);
      if (b.contains("d_max") && !b["d_max"].is_null()) {
        if (b["d_max"].is_string()) {
          if (b["d_max"].get<std::string>() != "inf") throw Error("d_max must be a number or \"inf\"");
        } else {
          cfg.build.d_max = b["d_max"].get<double>();
        }
      }
      cfg.build.all_cells = get_or<bool>(b, "all_cells", false);
      cfg.chunks = get_or<std::size_t>(b, "chunks", 1);
      if (cfg.build.h < 1) throw Error("h must be >= 1");
      if (cfg.chunks < 1) throw Error("chunks must be >= 1");
    }
    cfg.undirected = get_or<bool>(j, "undirected", true);
    if (j.contains("tau") && !j["tau"].is_null()) {
      if (j["tau"].is_array()) {
        cfg.taus = j["tau"].get<std::vector<double>>();
      } else {
        cfg.taus = {j["tau"].get<double>()};
      }
      for (double t : cfg.taus) {
        if (!(t >= 0)) throw Error("tau must be >= 0");
      }
    }
    if (j.contains("keep_fraction") && !j["keep_fraction"].is_null()) {
      cfg.keep_fraction = j["keep_fraction"].get<double>();
      if (!(*cfg.keep_fraction > 0.0 && *cfg.keep_fraction <= 1.0)) throw Error("keep_fraction must be in (0, 1]");
    }
    cfg.drop_isolated = get_or<bool>(j, "drop_isolated", false);
    if (j.contains("measures")) {
      cfg.measures = j["measures"].get<std::vector<std::string>>();
      static const std::set<std::string> known{"degree", "strength", "paths", "weighted-paths",
                                               "transitivity", "density", "components"};
      for (const auto& m : cfg.measures) {
        if (!known.count(m)) throw Error("unknown measure '" + m + "'");
      }
    }
    if (j.contains("centralities")) {
      for (const auto& name : j["centralities"].get<std::vector<std::string>>()) {
        cfg.centralities.push_back(parse_centrality_kind(name));
      }
    }
    if (j.contains("fit") && !j["fit"].is_null()) {
      const auto& f = j["fit"];
      check_keys(f, "fit", {"target", "discrete"});
      FitConfig fc;
      fc.target = get_or<std::string>(f, "target", fc.target);
      fc.discrete = get_or<bool>(f, "discrete", true);
      if (fc.target != "degree" && fc.target != "strength") throw Error("fit.target must be degree or strength");
      cfg.fit = fc;
    }
    if (j.contains("communities") && !j["communities"].is_null()) {
      const auto& c = j["communities"];
      check_keys(c, "communities", {"method", "k", "seed", "delta"});
      CommunityConfig cc;
      cc.method = get_or<std::string>(c, "method", cc.method);
      if (cc.method != "fastgreedy" && cc.method != "labelprop") {
        throw Error("communities.method must be fastgreedy or labelprop");
      }
      if (c.contains("k") && !c["k"].is_null()) cc.k = c["k"].get<std::size_t>();
      cc.seed = get_or<std::uint64_t>(c, "seed", 1);
      cc.delta = get_or<std::size_t>(c, "delta", 3);
      if (cc.delta % 2 == 0) throw Error("communities.delta must be odd and >= 1");
      cfg.communities = cc;
    }
    if (j.contains("outliers") && !j["outliers"].is_null()) {
      const auto& o = j["outliers"];
      check_keys(o, "outliers", {"metric", "top_fraction"});
      OutlierConfig oc;
      if (o.contains("metric")) oc.metric = parse_outlier_metric(o["metric"].get<std::string>());
      oc.top_fraction = get_or<double>(o, "top_fraction", oc.top_fraction);
      cfg.outliers = oc;
    }
    if (j.contains("snapshots") && !j["snapshots"].is_null()) {
      const auto& s = j["snapshots"];
      check_keys(s, "snapshots", {"dt"});
      cfg.snapshot_dt = s.at("dt").get<double>();
      if (!(*cfg.snapshot_dt > 0.0)) throw Error("snapshots.dt must be positive");
    }
    if (j.contains("output")) {
      std::filesystem::path p = j["output"].get<std::string>();
      cfg.output = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    cfg.threads = get_or<std::size_t>(j, "threads", 0);
    return cfg;
  } catch (const json::exception& e) {
    throw Error(std::string("bad run config: ") + e.what());
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open run config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("cannot parse run config '" + path.string() + "': " + e.what());
  }
  return parse_run_config(j, path.parent_path());
}

json to_json(const RunConfig& cfg) {
  json j;
  j["name"] = cfg.name;
  json ev;
  const auto& s = cfg.source;
  if (s.scenario) ev["scenario"] = *s.scenario;
  if (s.ode) ev["ode"] = *s.ode;
  if (s.input) {
    ev["input"] = s.input->generic_string();
    ev["format"] = format_name(s.format);
    ev["min_confidence"] = s.filters.min_confidence;
    ev["granularity"] = s.filters.granularity == TimeGranularity::Day ? "day" : "minute";
    ev["keep_types"] = s.filters.keep_types;
  } else {
    ev["seed"] = s.seed;
    ev["params"] = s.params;
  }
  j["events"] = ev;
  json g = json::object();
  if (cfg.grid.kind) {
    g["kind"] = to_string(*cfg.grid.kind);
    if (*cfg.grid.kind == GridKind::Rect) {
      g["nx"] = cfg.grid.nx;
      g["ny"] = cfg.grid.ny;
    } else {
      g["r"] = cfg.grid.r;
    }
    if (cfg.grid.bbox) {
      const auto& b = *cfg.grid.bbox;
      g["bbox"] = {b.xmin, b.xmax, b.ymin, b.ymax};
    }
    g["symmetric"] = cfg.grid.symmetric;
  }
  j["grid"] = g;
  j["build"] = {{"h", cfg.build.h},
                {"d_max", std::isinf(cfg.build.d_max) ? json("inf") : json(cfg.build.d_max)},
                {"all_cells", cfg.build.all_cells},
                {"chunks", cfg.chunks}};
  j["undirected"] = cfg.undirected;
  j["tau"] = cfg.taus;
  j["keep_fraction"] = cfg.keep_fraction ? json(*cfg.keep_fraction) : json(nullptr);
  j["drop_isolated"] = cfg.drop_isolated;
  j["measures"] = cfg.measures;
  json cents = json::array();
  for (auto k : cfg.centralities) cents.push_back(to_string(k));
  j["centralities"] = cents;
  j["fit"] = cfg.fit ? json{{"target", cfg.fit->target}, {"discrete", cfg.fit->discrete}} : json(nullptr);
  if (cfg.communities) {
    const auto& c = *cfg.communities;
    j["communities"] = {{"method", c.method},
                        {"k", c.k ? json(*c.k) : json(nullptr)},
                        {"seed", c.seed},
                        {"delta", c.delta}};
  } else {
    j["communities"] = nullptr;
  }
  if (cfg.outliers) {
    j["outliers"] = {{"metric", cfg.outliers->metric == OutlierMetric::Degree ? "degree" : "strength"},
                     {"top_fraction", cfg.outliers->top_fraction}};
  } else {
    j["outliers"] = nullptr;
  }
  j["snapshots"] = cfg.snapshot_dt ? json{{"dt", *cfg.snapshot_dt}} : json(nullptr);
  return j;
}

std::pair<std::string, double> parse_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw Error("parameter '" + kv + "' is not of the form key=value");
  const std::string key = kv.substr(0, eq);
  const std::string value = kv.substr(eq + 1);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.empty()) throw Error("parameter '" + key + "' needs a numeric value");
  return {key, v};
}

BBox data_bbox(const EventSet& es, bool symmetric) {
  std::vector<Point> pts;
  pts.reserve(es.size());
  for (const auto& e : es.events()) pts.push_back({e.x, e.y});
  BBox b = bounding_box_of(pts);
  if (symmetric) {
    const double X = std::max(std::abs(b.xmin), std::abs(b.xmax));
    const double Y = std::max(std::abs(b.ymin), std::abs(b.ymax));
    b = {-X, X, -Y, Y};
  }
  return b;
}

}  // namespace chronnet::app
