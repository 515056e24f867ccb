#include "chronnet/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"
#include "chronnet/random.hpp"

namespace chronnet {

ProbabilityGrid::ProbabilityGrid(int nx, int ny, std::vector<double> weights)
    : nx_(nx), ny_(ny), weights_(std::move(weights)) {
  if (nx < 1 || ny < 1) throw Error("probability grid needs positive dimensions");
  if (weights_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw Error("probability grid has " + std::to_string(weights_.size()) + " weights, expected " +
                std::to_string(nx * ny));
  }
  double sum = 0.0;
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) throw Error("probability grid weights must be finite and >= 0");
    sum += w;
  }
  if (!(sum > 0.0)) throw Error("probability grid is all zero");
}

ProbabilityGrid ProbabilityGrid::uniform(int nx, int ny) {
  return ProbabilityGrid(nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, 1.0));
}

std::int64_t ScenarioSpec::total_duration() const {
  std::int64_t total = 0;
  for (const auto& p : periods) total += p.duration;
  return total;
}

namespace {

void validate(const ScenarioSpec& spec) {
  if (spec.periods.empty()) throw Error("scenario '" + spec.name + "' has no periods");
  for (const auto& p : spec.periods) {
    if (p.duration < 1) throw Error("scenario period durations must be >= 1");
    if (const auto* pg = std::get_if<ProbabilityGrid>(&p.source)) {
      if (spec.grid.kind() != GridKind::Rect || spec.grid.nx() != pg->nx() ||
          spec.grid.ny() != pg->ny()) {
        throw Error("probability grid shape does not match the scenario grid");
      }
    } else {
      const auto& g = std::get<GaussianSource>(p.source);
      if (!(g.sigma > 0.0)) throw Error("Gaussian source needs sigma > 0");
      if (!spec.grid.bbox().contains(g.cx, g.cy)) {
        throw Error("Gaussian source center lies outside the scenario box");
      }
    }
  }
}

Point sample_gaussian(const GaussianSource& src, const BBox& box, Rng& rng) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double x = src.cx + src.sigma * rng.normal();
    const double y = src.cy + src.sigma * rng.normal();
    if (box.contains(x, y)) return {x, y};
  }
  throw Error("Gaussian source keeps sampling outside the scenario box");
}

}  // namespace

LabeledEvents generate_labeled_events(const ScenarioSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  std::vector<Event> events;
  std::vector<int> labels;
  events.reserve(static_cast<std::size_t>(spec.total_duration()));
  labels.reserve(events.capacity());

  std::int64_t tick = 0;
  for (std::size_t pi = 0; pi < spec.periods.size(); ++pi) {
    const Period& period = spec.periods[pi];
    if (const auto* pg = std::get_if<ProbabilityGrid>(&period.source)) {
      const auto& w = pg->weights();
      if (spec.mode == SamplingMode::Categorical) {
        const CategoricalSampler sampler(w);
        for (std::int64_t k = 0; k < period.duration; ++k) {
          ++tick;
          const Point c = cell_center(spec.grid, CellId{static_cast<std::int64_t>(sampler.sample(rng))});
          events.push_back(Event{static_cast<double>(tick), c.x, c.y, {}});
          labels.push_back(static_cast<int>(pi));
        }
      } else {
        for (std::int64_t k = 0; k < period.duration; ++k) {
          ++tick;
          for (std::size_t cell = 0; cell < w.size(); ++cell) {
            if (rng.uniform01() < std::min(1.0, w[cell])) {
              const Point c = cell_center(spec.grid, CellId{static_cast<std::int64_t>(cell)});
              events.push_back(Event{static_cast<double>(tick), c.x, c.y, {}});
              labels.push_back(static_cast<int>(pi));
            }
          }
        }
      }
    } else {
      const auto& src = std::get<GaussianSource>(period.source);
      for (std::int64_t k = 0; k < period.duration; ++k) {
        ++tick;
        const Point p = sample_gaussian(src, spec.grid.bbox(), rng);
        events.push_back(Event{static_cast<double>(tick), p.x, p.y, {}});
        labels.push_back(static_cast<int>(pi));
      }
    }
  }
  return {EventSet(std::move(events)), std::move(labels)};
}

EventSet generate_events(const ScenarioSpec& spec) { return generate_labeled_events(spec).events; }

// ---------------------------------------------------------------------------
// ODE trajectories

namespace {

using State = std::array<double, 3>;

State derivative(OdeSystem sys, const std::array<double, 3>& p, const State& s) {
  if (sys == OdeSystem::Lorenz) {
    return {p[0] * (s[1] - s[0]), s[0] * (p[2] - s[2]) - s[1], s[0] * s[1] - p[1] * s[2]};
  }
  return {-s[1] - s[2], s[0] + p[0] * s[1], p[1] + s[2] * (s[0] - p[2])};
}

State axpy(const State& s, double h, const State& k) {
  return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]};
}

State rk4_step(OdeSystem sys, const std::array<double, 3>& p, const State& s, double h) {
  const State k1 = derivative(sys, p, s);
  const State k2 = derivative(sys, p, axpy(s, h / 2, k1));
  const State k3 = derivative(sys, p, axpy(s, h / 2, k2));
  const State k4 = derivative(sys, p, axpy(s, h, k3));
  State out;
  for (int i = 0; i < 3; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  return out;
}

}  // namespace

std::vector<std::array<double, 3>> integrate_trajectory(const OdeSpec& spec) {
  const double h_req = spec.integrator_step > 0.0 ? spec.integrator_step : spec.sample_step / 10.0;
  if (!(spec.sample_step > 0.0) || !(spec.total_time > 0.0) || !(h_req > 0.0)) {
    throw Error("ODE sampling needs positive total time, sample step and integrator step");
  }
  if (h_req > spec.sample_step * (1.0 + 1e-12)) throw Error("integrator step exceeds the sample step");
  for (int c : spec.projection) {
    if (c < 0 || c > 2) throw Error("projection components must be 0, 1 or 2");
  }
  // whole number of RK4 steps per sample
  const auto substeps = std::max<long long>(1, std::llround(spec.sample_step / h_req));
  const double h = spec.sample_step / static_cast<double>(substeps);
  const auto samples = std::llround(spec.total_time / spec.sample_step);

  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(samples));
  State s = spec.initial;
  for (long long k = 1; k <= samples; ++k) {
    for (long long j = 0; j < substeps; ++j) s = rk4_step(spec.system, spec.params, s, h);
    if (!std::isfinite(s[0]) || !std::isfinite(s[1]) || !std::isfinite(s[2])) {
      throw Error("ODE state diverged at t = " +
                  csv::format_double(static_cast<double>(k) * spec.sample_step));
    }
    out.push_back(s);
  }
  return out;
}

EventSet sample_trajectory(const OdeSpec& spec) {
  const auto states = integrate_trajectory(spec);
  std::vector<Event> events;
  events.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    events.push_back(Event{static_cast<double>(k + 1), states[k][spec.projection[0]],
                           states[k][spec.projection[1]], {}});
  }
  return EventSet(std::move(events));
}

// ---------------------------------------------------------------------------
// Scenario catalog

namespace {

const std::map<std::string, ScenarioParams>& catalog() {
  static const std::map<std::string, ScenarioParams> kCatalog = {
      {"uniform", {{"nx", 20}, {"ny", 20}, {"T", 10000}}},
      {"power-law", {{"nx", 20}, {"ny", 20}, {"T", 10000}, {"alpha", 1.0}}},
      {"power-law-dense", {{"nx", 30}, {"ny", 30}, {"T", 200000}, {"alpha", 1.0}}},
      {"exponential", {{"nx", 20}, {"ny", 20}, {"T", 10000}, {"scale", 40}}},
      {"two-cluster",
       {{"nx", 10}, {"ny", 10}, {"extent", 1000}, {"sigma", 100}, {"alternations", 40},
        {"T", 1000000}, {"x1", 300}, {"y1", 300}, {"x2", 700}, {"y2", 700}}},
      {"four-period",
       {{"nx", 10}, {"ny", 10}, {"T", 12000}, {"block", 4}, {"outlier_mass", 0.002},
        {"outlier_scope", 1}}},
      {"three-region",
       {{"nx", 10}, {"ny", 10}, {"extent", 1000}, {"sigma", 60}, {"groups", 12},
        {"group_size", 500}}},
      {"bernoulli-uniform", {{"nx", 5}, {"ny", 5}, {"T", 1000}, {"p", 0.1}}},
  };
  return kCatalog;
}

ScenarioParams merged(const std::string& name, const ScenarioParams& defaults,
                      const ScenarioParams& overrides) {
  ScenarioParams p = defaults;
  for (const auto& [k, v] : overrides) {
    if (!p.contains(k)) throw Error("scenario '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  return p;
}

int as_int(const ScenarioParams& p, const char* key, int min_value) {
  const double v = p.at(key);
  if (v != std::floor(v) || v < min_value) {
    throw Error(std::string("parameter '") + key + "' must be an integer >= " + std::to_string(min_value));
  }
  return static_cast<int>(v);
}

std::int64_t as_count(const ScenarioParams& p, const char* key) {
  const double v = p.at(key);
  if (v != std::floor(v) || v < 1) throw Error(std::string("parameter '") + key + "' must be a positive integer");
  return static_cast<std::int64_t>(v);
}

// Rank-ordered weights placed on cells by a seeded permutation, so the
// spatial layout varies with the seed while the weight distribution does not.
ProbabilityGrid ranked_grid(int nx, int ny, std::uint64_t seed, auto weight_of_rank) {
  const std::size_t n = static_cast<std::size_t>(nx) * ny;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  rng.shuffle(order);
  std::vector<double> w(n);
  for (std::size_t rank = 0; rank < n; ++rank) w[order[rank]] = weight_of_rank(static_cast<double>(rank));
  return ProbabilityGrid(nx, ny, std::move(w));
}

GridSpec unit_grid(int nx, int ny) {
  return GridSpec::rect(BBox{0.0, static_cast<double>(nx), 0.0, static_cast<double>(ny)}, nx, ny);
}

ScenarioSpec single_period(const std::string& name, int nx, int ny, std::int64_t T,
                           ProbabilityGrid grid, std::uint64_t seed) {
  ScenarioSpec s;
  s.name = name;
  s.grid = unit_grid(nx, ny);
  s.periods.push_back(Period{std::move(grid), T});
  s.seed = seed;
  return s;
}

// Four active blocks in the grid corners, in time order: bottom-left,
// top-left, bottom-right, top-right. Outlier mass is spread uniformly over
// cells outside the active block, either over the whole grid (scope 0) or
// over the half of the grid (left or right) that holds the active block.
ScenarioSpec four_period(const ScenarioParams& p, std::uint64_t seed) {
  const int nx = as_int(p, "nx", 2);
  const int ny = as_int(p, "ny", 2);
  const int block = as_int(p, "block", 1);
  const std::int64_t T = as_count(p, "T");
  const double outlier_mass = p.at("outlier_mass");
  const int scope = as_int(p, "outlier_scope", 0);
  if (2 * block > nx || 2 * block > ny) throw Error("four-period block does not fit the grid");
  if (outlier_mass < 0.0 || outlier_mass >= 1.0) throw Error("outlier_mass must be in [0, 1)");
  if (T < 4) throw Error("four-period needs T >= 4");

  ScenarioSpec s;
  s.name = "four-period";
  s.grid = unit_grid(nx, ny);
  s.seed = seed;
  const int x0[4] = {0, 0, nx - block, nx - block};
  const int y0[4] = {0, ny - block, 0, ny - block};
  for (int k = 0; k < 4; ++k) {
    std::vector<double> w(static_cast<std::size_t>(nx) * ny, 0.0);
    const bool left = x0[k] == 0;
    std::size_t active = 0;
    std::size_t background = 0;
    auto in_block = [&](int i, int j) {
      return i >= x0[k] && i < x0[k] + block && j >= y0[k] && j < y0[k] + block;
    };
    auto in_scope = [&](int i) { return scope == 0 || (left ? i < nx / 2 : i >= nx / 2); };
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (in_block(i, j)) {
          ++active;
        } else if (in_scope(i)) {
          ++background;
        }
      }
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double& cell = w[static_cast<std::size_t>(j) * nx + i];
        if (in_block(i, j)) {
          cell = (1.0 - outlier_mass) / static_cast<double>(active);
        } else if (in_scope(i) && background > 0) {
          cell = outlier_mass / static_cast<double>(background);
        }
      }
    }
    const std::int64_t duration = T / 4 + (k < T % 4 ? 1 : 0);
    s.periods.push_back(Period{ProbabilityGrid(nx, ny, std::move(w)), duration});
  }
  return s;
}

}  // namespace

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : catalog()) names.push_back(k);
  return names;
}

ScenarioParams scenario_defaults(const std::string& name) {
  auto it = catalog().find(name);
  if (it == catalog().end()) throw Error("unknown scenario '" + name + "'");
  return it->second;
}

ScenarioSpec make_scenario(const std::string& name, std::uint64_t seed,
                           const ScenarioParams& overrides) {
  const ScenarioParams p = merged(name, scenario_defaults(name), overrides);

  if (name == "uniform") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    return single_period(name, nx, ny, as_count(p, "T"), ProbabilityGrid::uniform(nx, ny), seed);
  }
  if (name == "power-law" || name == "power-law-dense") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    const double alpha = p.at("alpha");
    if (!(alpha > 0.0)) throw Error("alpha must be > 0");
    return single_period(name, nx, ny, as_count(p, "T"),
                         ranked_grid(nx, ny, seed, [alpha](double r) { return std::pow(r + 1.0, -alpha); }),
                         seed);
  }
  if (name == "exponential") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    const double scale = p.at("scale");
    if (!(scale > 0.0)) throw Error("scale must be > 0");
    return single_period(name, nx, ny, as_count(p, "T"),
                         ranked_grid(nx, ny, seed, [scale](double r) { return std::exp(-r / scale); }),
                         seed);
  }
  if (name == "two-cluster") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    const double extent = p.at("extent");
    const int alternations = as_int(p, "alternations", 1);
    const std::int64_t T = as_count(p, "T");
    if (T < alternations) throw Error("two-cluster needs T >= alternations");
    ScenarioSpec s;
    s.name = name;
    s.grid = GridSpec::rect(BBox{0.0, extent, 0.0, extent}, nx, ny);
    s.seed = seed;
    const GaussianSource a{p.at("x1"), p.at("y1"), p.at("sigma")};
    const GaussianSource b{p.at("x2"), p.at("y2"), p.at("sigma")};
    for (int k = 0; k < alternations; ++k) {
      const std::int64_t duration = T / alternations + (k < T % alternations ? 1 : 0);
      s.periods.push_back(Period{k % 2 == 0 ? a : b, duration});
    }
    return s;
  }
  if (name == "four-period") return four_period(p, seed);
  if (name == "three-region") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    const double e = p.at("extent");
    const int groups = as_int(p, "groups", 1);
    const std::int64_t size = as_count(p, "group_size");
    ScenarioSpec s;
    s.name = name;
    s.grid = GridSpec::rect(BBox{0.0, e, 0.0, e}, nx, ny);
    s.seed = seed;
    const GaussianSource regions[3] = {{0.2 * e, 0.2 * e, p.at("sigma")},
                                       {0.8 * e, 0.2 * e, p.at("sigma")},
                                       {0.5 * e, 0.8 * e, p.at("sigma")}};
    for (int k = 0; k < groups; ++k) s.periods.push_back(Period{regions[k % 3], size});
    return s;
  }
  if (name == "bernoulli-uniform") {
    const int nx = as_int(p, "nx", 1), ny = as_int(p, "ny", 1);
    const double prob = p.at("p");
    if (!(prob > 0.0 && prob <= 1.0)) throw Error("p must be in (0, 1]");
    auto s = single_period(name, nx, ny, as_count(p, "T"),
                           ProbabilityGrid(nx, ny, std::vector<double>(static_cast<std::size_t>(nx) * ny, prob)),
                           seed);
    s.mode = SamplingMode::Bernoulli;
    return s;
  }
  throw Error("unknown scenario '" + name + "'");
}

std::map<std::string, ScenarioSpec> builtin_scenarios(std::uint64_t seed) {
  std::map<std::string, ScenarioSpec> out;
  for (const auto& name : scenario_names()) out.emplace(name, make_scenario(name, seed));
  return out;
}

std::vector<std::string> ode_names() { return {"lorenz", "rossler"}; }

ScenarioParams ode_defaults(const std::string& name) {
  if (name == "lorenz") {
    return {{"sigma", 10.0}, {"beta", 8.0 / 3.0}, {"rho", 28.0}, {"x0", 1.0}, {"y0", 1.0},
            {"z0", 1.0},     {"T", 200.0},        {"dt", 0.01},  {"h", 0.001}};
  }
  if (name == "rossler") {
    return {{"a", 0.2}, {"b", 0.2}, {"c", 5.7},     {"x0", 1.0}, {"y0", 1.0},
            {"z0", 1.0}, {"T", 1000.0}, {"dt", 0.02}, {"h", 0.002}};
  }
  throw Error("unknown ODE system '" + name + "'");
}

OdeSpec make_ode(const std::string& name, const ScenarioParams& overrides) {
  const ScenarioParams p = merged(name, ode_defaults(name), overrides);
  OdeSpec s;
  if (name == "lorenz") {
    s.system = OdeSystem::Lorenz;
    s.params = {p.at("sigma"), p.at("beta"), p.at("rho")};
    s.projection = {0, 1};
  } else {
    s.system = OdeSystem::Rossler;
    s.params = {p.at("a"), p.at("b"), p.at("c")};
    s.projection = {0, 2};
  }
  s.initial = {p.at("x0"), p.at("y0"), p.at("z0")};
  s.total_time = p.at("T");
  s.sample_step = p.at("dt");
  s.integrator_step = p.at("h");
  return s;
}

}  // namespace chronnet
