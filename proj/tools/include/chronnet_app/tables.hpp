#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chronnet/chronnet.hpp"
#include "chronnet/fitting.hpp"
#include "chronnet/mining.hpp"

namespace chronnet::app {

/// Records every file written below a root directory.
class ArtifactDir {
 public:
  explicit ArtifactDir(std::filesystem::path root);

  [[nodiscard]] const std::filesystem::path& root() const noexcept { return root_; }
  /// Path for a relative artifact name; parent directories are created.
  std::filesystem::path file(const std::string& rel);
  [[nodiscard]] std::vector<std::string> files() const;

  void write_json(const std::string& rel, const nlohmann::json& j);

 private:
  std::filesystem::path root_;
  std::vector<std::string> files_;
};

/// `value,count,fraction,ccdf` with ccdf = P(X >= value).
void write_distribution(const std::filesystem::path& path, std::span<const std::uint64_t> values);

/// Per-node table: `cell,x,y` followed by one column per entry of `columns`.
void write_node_table(const std::filesystem::path& path, const Chronnet& c,
                      const std::vector<std::pair<std::string, std::vector<double>>>& columns);

/// `cell,community`
void write_partition(const std::filesystem::path& path, const Partition& p);
Partition read_partition(const std::filesystem::path& path);

/// `step,into,from,into_cell,from_cell,delta_q,q_after`
void write_dendrogram(const std::filesystem::path& path, const Dendrogram& d);

/// `index,t,community,corrected[,truth]`
void write_series(const std::filesystem::path& path, const EventSet& es, std::span<const int> raw,
                  std::span<const int> corrected, std::span<const int> truth = {});

nlohmann::json fit_to_json(const FitResult& f);

/// Power-law and log-normal fits of the positive entries of `values`; the
/// log-normal is truncated at the power-law x_min so both describe the same
/// tail. Fits that cannot be computed are reported as {"error": ...}.
nlohmann::json tail_fits(std::span<const std::uint64_t> values, bool discrete);

}  // namespace chronnet::app
