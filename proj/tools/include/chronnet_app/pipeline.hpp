#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronnet/events.hpp"
#include "chronnet/grid.hpp"
#include "chronnet_app/config.hpp"

namespace chronnet::app {

/// Events of a run plus, for scenarios, the generating period of each event
/// and the scenario grid.
struct SourceData {
  EventSet events;
  std::vector<int> truth;
  std::optional<GridSpec> native_grid;
};

SourceData load_source(const EventSource& src);
GridSpec resolve_grid(const GridConfig& g, const SourceData& data);

struct RunResult {
  bool ok = false;
  std::string failed_stage;
  std::string error;
  nlohmann::json report;
};

/// generate/load -> build -> prune -> measure -> mine, writing every artifact
/// below cfg.output. Stage errors do not throw: they are reported in the
/// result and in MANIFEST.json next to whatever was already written.
RunResult run(const RunConfig& cfg);

}  // namespace chronnet::app
