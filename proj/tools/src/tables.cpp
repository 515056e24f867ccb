#include "chronnet_app/tables.hpp"

#include <algorithm>
#include <fstream>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"
#include "chronnet/measures.hpp"

namespace chronnet::app {

using nlohmann::json;
using csv::format_double;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

ArtifactDir::ArtifactDir(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ArtifactDir::file(const std::string& rel) {
  auto p = root_ / rel;
  std::filesystem::create_directories(p.parent_path());
  if (std::find(files_.begin(), files_.end(), rel) == files_.end()) files_.push_back(rel);
  return p;
}

std::vector<std::string> ArtifactDir::files() const {
  auto out = files_;
  std::sort(out.begin(), out.end());
  return out;
}

void ArtifactDir::write_json(const std::string& rel, const json& j) {
  auto out = open_out(file(rel));
  out << j.dump(2) << '\n';
}

void write_distribution(const std::filesystem::path& path, std::span<const std::uint64_t> values) {
  auto out = open_out(path);
  out << "value,count,fraction,ccdf\n";
  if (values.empty()) return;
  const auto bins = degree_distribution(values);
  double tail = 1.0;
  for (const auto& b : bins) {
    out << b.value << ',' << b.count << ',' << format_double(b.fraction) << ','
        << format_double(std::max(0.0, tail)) << '\n';
    tail -= b.fraction;
  }
}

void write_node_table(const std::filesystem::path& path, const Chronnet& c,
                      const std::vector<std::pair<std::string, std::vector<double>>>& columns) {
  auto out = open_out(path);
  out << "cell,x,y";
  for (const auto& [name, values] : columns) {
    if (values.size() != c.node_count()) throw Error("column '" + name + "' has the wrong length");
    out << ',' << name;
  }
  out << '\n';
  for (std::size_t i = 0; i < c.node_count(); ++i) {
    const auto p = cell_center(c.grid(), c.nodes()[i]);
    out << c.nodes()[i].value << ',' << format_double(p.x) << ',' << format_double(p.y);
    for (const auto& col : columns) out << ',' << format_double(col.second[i]);
    out << '\n';
  }
}

void write_partition(const std::filesystem::path& path, const Partition& p) {
  auto out = open_out(path);
  out << "cell,community\n";
  for (std::size_t i = 0; i < p.nodes.size(); ++i) out << p.nodes[i].value << ',' << p.label[i] << '\n';
}

Partition read_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition '" + path.string() + "'");
  std::string line;
  if (!csv::read_line(in, line)) throw ParseError(path.string(), 1, "empty partition file");
  const auto header = csv::split_line(line);
  if (header.size() < 2 || header[0] != "cell" || header[1] != "community") {
    throw ParseError(path.string(), 1, "partition header must be cell,community");
  }
  std::vector<std::pair<CellId, int>> rows;
  std::size_t lineno = 1;
  while (csv::read_line(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv::split_line(line);
    long long cell = 0;
    long long label = 0;
    if (f.size() < 2 || !csv::parse_int64(f[0], cell) || !csv::parse_int64(f[1], label) || label < 0) {
      throw ParseError(path.string(), lineno, "expected cell,community integers");
    }
    rows.push_back({CellId{cell}, static_cast<int>(label)});
  }
  std::sort(rows.begin(), rows.end());
  Partition p;
  int max_label = -1;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].first == rows[i - 1].first) {
      throw Error("cell " + std::to_string(rows[i].first.value) + " listed twice in '" + path.string() + "'");
    }
    p.nodes.push_back(rows[i].first);
    p.label.push_back(rows[i].second);
    max_label = std::max(max_label, rows[i].second);
  }
  p.community_count = static_cast<std::size_t>(max_label + 1);
  return p;
}

void write_dendrogram(const std::filesystem::path& path, const Dendrogram& d) {
  auto out = open_out(path);
  out << "step,into,from,into_cell,from_cell,delta_q,q_after\n";
  for (std::size_t s = 0; s < d.merges.size(); ++s) {
    const auto& m = d.merges[s];
    out << s + 1 << ',' << m.into << ',' << m.from << ',' << d.leaves[m.into].value << ','
        << d.leaves[m.from].value << ',' << format_double(m.delta_q) << ',' << format_double(m.q_after)
        << '\n';
  }
}

void write_series(const std::filesystem::path& path, const EventSet& es, std::span<const int> raw,
                  std::span<const int> corrected, std::span<const int> truth) {
  auto out = open_out(path);
  out << "index,t,community,corrected";
  if (!truth.empty()) out << ",truth";
  out << '\n';
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out << i + 1 << ',' << format_double(es[i].t) << ',' << raw[i] << ',' << corrected[i];
    if (!truth.empty()) out << ',' << truth[i];
    out << '\n';
  }
}

json fit_to_json(const FitResult& f) {
  json j;
  j["family"] = to_string(f.family);
  j["discrete"] = f.discrete;
  if (f.family == FitFamily::PowerLaw) {
    j["gamma"] = f.gamma;
    j["gamma_stderr"] = f.gamma_stderr;
  } else {
    j["mu"] = f.mu;
    j["sigma"] = f.sigma;
  }
  j["x_min"] = f.x_min;
  j["ks"] = f.ks;
  j["n_tail"] = f.n_tail;
  j["low_tail_warning"] = f.low_tail_warning;
  return j;
}

json tail_fits(std::span<const std::uint64_t> values, bool discrete) {
  std::vector<double> xs;
  for (auto v : values) {
    if (v > 0) xs.push_back(static_cast<double>(v));
  }
  json j;
  std::optional<double> x_min;
  try {
    PowerLawOptions po;
    po.discrete = discrete;
    const auto pl = fit_power_law(xs, po);
    x_min = pl.x_min;
    j["powerlaw"] = fit_to_json(pl);
  } catch (const Error& e) {
    j["powerlaw"] = {{"error", e.what()}};
  }
  try {
    LogNormalOptions lo;
    lo.discrete = discrete;
    lo.x_min = x_min;
    j["lognormal"] = fit_to_json(fit_log_normal(xs, lo));
  } catch (const Error& e) {
    j["lognormal"] = {{"error", e.what()}};
  }
  return j;
}

}  // namespace chronnet::app
