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

namespace chronnet::app {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ReproOptions {
  /// tables and summary.json go to <output>/<figure>/ when set
  std::optional<std::filesystem::path> output;
  std::size_t seeds = 10;
  std::uint64_t first_seed = 1;
  std::size_t threads = 0;
};

struct ReproResult {
  std::string figure;
  std::vector<Check> checks;
  /// per-seed measurements behind the checks
  nlohmann::json data;

  [[nodiscard]] bool passed() const;
};

/// fig1 .. fig5
std::vector<std::string> figure_names();
ReproResult repro(const std::string& figure, const ReproOptions& opts = {});

/// Named ODE whose initial state is shifted by independent uniform draws in
/// [-eps, eps] seeded by `seed`.
OdeSpec perturbed_ode(const std::string& name, std::uint64_t seed, double eps);

/// Lorenz chronnet of the structural check: xy samples on a 15x15 rect grid
/// over the data box made symmetric about the origin, undirected, links with
/// weight <= 15 removed, isolated nodes dropped.
Chronnet lorenz_network(std::uint64_t seed);

}  // namespace chronnet::app
