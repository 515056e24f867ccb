#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "chronnet/events.hpp"
#include "chronnet/grid.hpp"

namespace chronnet {

/// Per-cell event weights over an nx-by-ny grid, row-major (`j * nx + i`),
/// matching rect CellId numbering.
class ProbabilityGrid {
 public:
  ProbabilityGrid(int nx, int ny, std::vector<double> weights);
  static ProbabilityGrid uniform(int nx, int ny);

  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
  [[nodiscard]] double at(int i, int j) const { return weights_.at(static_cast<std::size_t>(j) * nx_ + i); }

 private:
  int nx_;
  int ny_;
  std::vector<double> weights_;
};

/// Isotropic Gaussian blob sampled in continuous coordinates.
struct GaussianSource {
  double cx = 0.0;
  double cy = 0.0;
  double sigma = 1.0;
};

struct Period {
  std::variant<ProbabilityGrid, GaussianSource> source;
  std::int64_t duration = 1;
};

enum class SamplingMode {
  /// exactly one event per tick drawn from the normalized weights
  Categorical,
  /// every cell fires independently with probability min(1, weight)
  Bernoulli,
};

struct ScenarioSpec {
  std::string name;
  GridSpec grid;
  std::vector<Period> periods;
  std::uint64_t seed = 1;
  SamplingMode mode = SamplingMode::Categorical;

  [[nodiscard]] std::int64_t total_duration() const;
};

/// Events plus the index of the period that generated each one.
struct LabeledEvents {
  EventSet events;
  std::vector<int> period;
};

EventSet generate_events(const ScenarioSpec& spec);
LabeledEvents generate_labeled_events(const ScenarioSpec& spec);

enum class OdeSystem { Lorenz, Rossler };

struct OdeSpec {
  OdeSystem system = OdeSystem::Lorenz;
  /// (sigma, beta, rho) for Lorenz, (a, b, c) for Rossler
  std::array<double, 3> params{10.0, 8.0 / 3.0, 28.0};
  std::array<double, 3> initial{1.0, 1.0, 1.0};
  double total_time = 200.0;
  double sample_step = 0.01;
  /// 0 selects sample_step / 10
  double integrator_step = 0.0;
  /// state components projected to (x, y); 0 = x, 1 = y, 2 = z
  std::array<int, 2> projection{0, 1};
};

/// Integrates with classic fixed-step RK4 and emits one event per sample
/// step, stamped with the integer sample index 1..N.
EventSet sample_trajectory(const OdeSpec& spec);

/// Dense state samples (no projection), the first being the state after one
/// sample step. Exposed for tests and for grid sizing.
std::vector<std::array<double, 3>> integrate_trajectory(const OdeSpec& spec);

using ScenarioParams = std::map<std::string, double>;

/// Names accepted by make_scenario.
std::vector<std::string> scenario_names();
/// Default parameters of a named scenario (all tunables are listed).
ScenarioParams scenario_defaults(const std::string& name);
/// Builds a named scenario; `overrides` replaces entries of the defaults and
/// unknown keys are rejected.
ScenarioSpec make_scenario(const std::string& name, std::uint64_t seed,
                           const ScenarioParams& overrides = {});
/// All named scenarios with default parameters.
std::map<std::string, ScenarioSpec> builtin_scenarios(std::uint64_t seed = 1);

std::vector<std::string> ode_names();
ScenarioParams ode_defaults(const std::string& name);
OdeSpec make_ode(const std::string& name, const ScenarioParams& overrides = {});

}  // namespace chronnet
