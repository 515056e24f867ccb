#include "chronnet/network_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"

namespace chronnet {

using nlohmann::json;

json grid_to_json(const GridSpec& g) {
  const BBox& b = g.bbox();
  json j;
  j["kind"] = to_string(g.kind());
  j["bbox"] = {b.xmin, b.xmax, b.ymin, b.ymax};
  if (g.kind() == GridKind::Rect) {
    j["nx"] = g.nx();
    j["ny"] = g.ny();
  } else {
    j["r"] = g.radius();
  }
  return j;
}

GridSpec grid_from_json(const json& j) {
  try {
    const GridKind kind = parse_grid_kind(j.at("kind").get<std::string>());
    const auto& bb = j.at("bbox");
    if (!bb.is_array() || bb.size() != 4) throw Error("grid.bbox must be [xmin, xmax, ymin, ymax]");
    const BBox box{bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(), bb[3].get<double>()};
    if (kind == GridKind::Rect) return GridSpec::rect(box, j.at("nx").get<int>(), j.at("ny").get<int>());
    return GridSpec::hex(box, j.at("r").get<double>());
  } catch (const json::exception& e) {
    throw Error(std::string("invalid grid spec: ") + e.what());
  }
}

json meta_to_json(const Chronnet& c) {
  const NetworkMeta& m = c.meta();
  json j;
  j["directed"] = c.directed();
  j["h"] = m.h;
  j["d_max"] = std::isinf(m.d_max) ? json("inf") : json(m.d_max);
  j["tau"] = m.tau ? json(*m.tau) : json(nullptr);
  j["keep_fraction"] = m.keep_fraction ? json(*m.keep_fraction) : json(nullptr);
  j["window"] = m.window ? json::array({m.window->t_start, m.window->t_end}) : json(nullptr);
  j["grid"] = grid_to_json(c.grid());
  json nodes = json::array();
  for (auto id : c.nodes()) nodes.push_back(id.value);
  j["nodes"] = std::move(nodes);
  return j;
}

std::filesystem::path default_meta_path(const std::filesystem::path& edges) {
  std::filesystem::path p = edges;
  p.replace_extension(".meta.json");
  return p;
}

void write_edges(const Chronnet& c, std::ostream& out) {
  out << "src,dst,weight\n";
  for (const auto& l : c.links()) out << l.src.value << ',' << l.dst.value << ',' << l.weight << '\n';
}

void write_network(const Chronnet& c, const std::filesystem::path& edges,
                   const std::optional<std::filesystem::path>& meta) {
  {
    std::ofstream out(edges);
    if (!out) throw Error("cannot write '" + edges.string() + "'");
    write_edges(c, out);
  }
  const auto meta_path = meta.value_or(default_meta_path(edges));
  std::ofstream out(meta_path);
  if (!out) throw Error("cannot write '" + meta_path.string() + "'");
  out << meta_to_json(c).dump(2) << '\n';
}

namespace {

NetworkMeta meta_from_json(const json& j) {
  NetworkMeta m;
  m.h = j.value("h", std::size_t{1});
  if (j.contains("d_max")) {
    const auto& d = j["d_max"];
    if (d.is_string()) {
      if (d.get<std::string>() != "inf") throw Error("d_max must be a number or \"inf\"");
      m.d_max = std::numeric_limits<double>::infinity();
    } else if (d.is_number()) {
      m.d_max = d.get<double>();
    }
  }
  if (j.contains("tau") && j["tau"].is_number()) m.tau = j["tau"].get<double>();
  if (j.contains("keep_fraction") && j["keep_fraction"].is_number()) {
    m.keep_fraction = j["keep_fraction"].get<double>();
  }
  if (j.contains("window") && j["window"].is_array()) {
    m.window = TimeWindow{j["window"].at(0).get<double>(), j["window"].at(1).get<double>()};
  }
  return m;
}

}  // namespace

Chronnet read_network(std::istream& in, const json* meta, const std::string& source) {
  std::string line;
  if (!csv::read_line(in, line)) throw ParseError(source, 1, "empty edge list (missing header)");
  {
    const auto header = csv::split_line(line);
    if (header.size() != 3 || header[0] != "src" || header[1] != "dst" || header[2] != "weight") {
      throw ParseError(source, 1, "edge list header must be src,dst,weight");
    }
  }
  std::vector<Link> links;
  std::size_t lineno = 1;
  while (csv::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    if (f.size() != 3) throw ParseError(source, lineno, "expected 3 fields");
    long long src = 0, dst = 0, w = 0;
    if (!csv::parse_int64(f[0], src) || src < 0) throw ParseError(source, lineno, "bad src id");
    if (!csv::parse_int64(f[1], dst) || dst < 0) throw ParseError(source, lineno, "bad dst id");
    if (!csv::parse_int64(f[2], w)) throw ParseError(source, lineno, "non-integer weight");
    if (w < 1) throw ParseError(source, lineno, "link weight must be >= 1");
    links.push_back(Link{CellId{src}, CellId{dst}, static_cast<std::uint64_t>(w)});
  }

  try {
    if (meta == nullptr) {
      std::vector<CellId> nodes;
      for (const auto& l : links) {
        nodes.push_back(l.src);
        nodes.push_back(l.dst);
      }
      std::sort(nodes.begin(), nodes.end());
      nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
      return Chronnet(true, GridSpec{}, std::move(nodes), std::move(links));
    }
    std::vector<CellId> nodes;
    for (const auto& v : meta->at("nodes")) nodes.push_back(CellId{v.get<std::int64_t>()});
    return Chronnet(meta->at("directed").get<bool>(), grid_from_json(meta->at("grid")),
                    std::move(nodes), std::move(links), meta_from_json(*meta));
  } catch (const json::exception& e) {
    throw Error(source + ": invalid network meta: " + e.what());
  }
}

Chronnet read_network(const std::filesystem::path& edges,
                      const std::optional<std::filesystem::path>& meta) {
  std::ifstream in(edges);
  if (!in) throw Error("cannot open network file '" + edges.string() + "'");
  const auto meta_path = meta.value_or(default_meta_path(edges));
  if (!std::filesystem::exists(meta_path)) {
    if (meta) throw Error("cannot open network meta '" + meta_path.string() + "'");
    return read_network(in, nullptr, edges.string());
  }
  std::ifstream min(meta_path);
  json j;
  try {
    j = json::parse(min);
  } catch (const json::exception& e) {
    throw Error("cannot parse '" + meta_path.string() + "': " + e.what());
  }
  return read_network(in, &j, edges.string());
}

}  // namespace chronnet
