#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include <nlohmann/json.hpp>

#include "chronnet/chronnet.hpp"
#include "chronnet/grid.hpp"

namespace chronnet {

/// `{"kind": "rect", "bbox": [xmin, xmax, ymin, ymax], "nx": .., "ny": ..}` or
/// `{"kind": "hex", "bbox": [...], "r": ..}`.
nlohmann::json grid_to_json(const GridSpec& g);
GridSpec grid_from_json(const nlohmann::json& j);

/// `{directed, h, d_max, tau, keep_fraction, window, grid, nodes}`; an
/// infinite d_max is written as the string "inf".
nlohmann::json meta_to_json(const Chronnet& c);

/// `net.csv` -> `net.meta.json`
std::filesystem::path default_meta_path(const std::filesystem::path& edges);

/// Edge list `src,dst,weight` plus the companion meta JSON.
void write_network(const Chronnet& c, const std::filesystem::path& edges,
                   const std::optional<std::filesystem::path>& meta = std::nullopt);
void write_edges(const Chronnet& c, std::ostream& out);

/// Reads an edge list and its meta JSON. If the meta file does not exist the
/// network is read as directed, with nodes taken from link endpoints.
Chronnet read_network(const std::filesystem::path& edges,
                      const std::optional<std::filesystem::path>& meta = std::nullopt);
Chronnet read_network(std::istream& edges, const nlohmann::json* meta,
                      const std::string& source = "<stream>");

}  // namespace chronnet
