#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronnet/chronnet.hpp"
#include "chronnet/datagen.hpp"
#include "chronnet/events.hpp"
#include "chronnet/grid.hpp"
#include "chronnet/measures.hpp"
#include "chronnet/mining.hpp"

namespace chronnet::app {

/// Where the events of a run come from. Exactly one of scenario, ode and
/// input is set.
struct EventSource {
  std::optional<std::string> scenario;
  std::optional<std::string> ode;
  std::optional<std::filesystem::path> input;
  std::uint64_t seed = 1;
  ScenarioParams params;
  EventFormat format = EventFormat::GenericCsv;
  FilterSpec filters;
};

/// Grid of a run. Without a kind, a scenario run uses the scenario's own
/// grid. Without a bbox the box is fitted to the data, optionally widened to
/// be symmetric about the origin.
struct GridConfig {
  std::optional<GridKind> kind;
  int nx = 0;
  int ny = 0;
  double r = 0.0;
  std::optional<BBox> bbox;
  bool symmetric = false;
};

struct CommunityConfig {
  std::string method = "fastgreedy";
  std::optional<std::size_t> k;
  std::uint64_t seed = 1;
  std::size_t delta = 3;
};

struct OutlierConfig {
  OutlierMetric metric = OutlierMetric::Degree;
  double top_fraction = 0.02;
};

struct FitConfig {
  /// "degree" or "strength"
  std::string target = "degree";
  bool discrete = true;
};

struct RunConfig {
  std::string name = "run";
  EventSource source;
  GridConfig grid;
  BuildOptions build;
  std::size_t chunks = 1;
  bool undirected = true;
  /// one analysis per threshold; with neither taus nor keep_fraction the
  /// unpruned network is analysed
  std::vector<double> taus;
  std::optional<double> keep_fraction;
  bool drop_isolated = false;
  /// any of degree, strength, paths, weighted-paths, transitivity, density,
  /// components
  std::vector<std::string> measures{"degree", "strength"};
  std::vector<CentralityKind> centralities;
  std::optional<FitConfig> fit;
  std::optional<CommunityConfig> communities;
  std::optional<OutlierConfig> outliers;
  std::optional<double> snapshot_dt;
  std::filesystem::path output = "out";
  std::size_t threads = 0;
};

/// Relative input paths are resolved against `base_dir`. Unknown keys are
/// rejected.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

/// Parses "k=v" scenario overrides.
std::pair<std::string, double> parse_param(const std::string& kv);

/// Box of the points, optionally made symmetric about the origin.
BBox data_bbox(const EventSet& es, bool symmetric);

}  // namespace chronnet::app
