#include "chronnet/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "chronnet/csv.hpp"
#include "chronnet/error.hpp"

namespace chronnet {
namespace {

const double kSqrt3 = std::sqrt(3.0);

void check_bbox(const BBox& b) {
  if (!(std::isfinite(b.xmin) && std::isfinite(b.xmax) && std::isfinite(b.ymin) &&
        std::isfinite(b.ymax))) {
    throw Error("grid bounding box must be finite");
  }
  if (!(b.xmin < b.xmax) || !(b.ymin < b.ymax)) {
    throw Error("grid bounding box needs xmin < xmax and ymin < ymax");
  }
}

}  // namespace

GridSpec GridSpec::rect(BBox bbox, int nx, int ny) {
  check_bbox(bbox);
  if (nx < 1 || ny < 1) throw Error("rect grid needs nx >= 1 and ny >= 1");
  GridSpec g;
  g.kind_ = GridKind::Rect;
  g.bbox_ = bbox;
  g.nx_ = nx;
  g.ny_ = ny;
  return g;
}

GridSpec GridSpec::hex(BBox bbox, double radius) {
  check_bbox(bbox);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("hex grid needs radius > 0");
  GridSpec g;
  g.kind_ = GridKind::Hex;
  g.bbox_ = bbox;
  g.radius_ = radius;
  // A point's nearest center lies within r horizontally and within the
  // inradius vertically, which bounds the columns/rows that can be hit.
  const double w = bbox.xmax - bbox.xmin;
  const double h = bbox.ymax - bbox.ymin;
  const double cols = std::floor(w / (1.5 * radius)) + 2.0;
  const double rows = std::floor(h / (kSqrt3 * radius)) + 3.0;  // includes row -1
  if (cols * rows > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
    throw Error("hex grid has too many cells");
  }
  g.hex_cols_ = static_cast<int>(cols);
  g.hex_rows_ = static_cast<int>(rows);
  return g;
}

std::int64_t GridSpec::cell_count() const noexcept {
  if (kind_ == GridKind::Rect) return static_cast<std::int64_t>(nx_) * ny_;
  return static_cast<std::int64_t>(hex_cols_) * hex_rows_;
}

std::pair<int, int> GridSpec::rect_index(CellId c) const {
  if (kind_ != GridKind::Rect) throw Error("rect_index on a hex grid");
  if (!valid(c)) throw Error("invalid cell id " + std::to_string(c.value));
  return {static_cast<int>(c.value % nx_), static_cast<int>(c.value / nx_)};
}

CellId GridSpec::rect_cell(int i, int j) const {
  if (kind_ != GridKind::Rect) throw Error("rect_cell on a hex grid");
  if (i < 0 || i >= nx_ || j < 0 || j >= ny_) throw Error("rect cell index out of range");
  return CellId{static_cast<std::int64_t>(j) * nx_ + i};
}

namespace {

int rect_bin(double v, double lo, double hi, int n) {
  const double width = (hi - lo) / n;
  auto k = static_cast<long long>(std::floor((v - lo) / width));
  return static_cast<int>(std::clamp<long long>(k, 0, n - 1));
}

}  // namespace

CellId nearest_cell(const GridSpec& g, double x, double y) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw Error("non-finite coordinate");
  const BBox& b = g.bbox_;
  if (g.kind_ == GridKind::Rect) {
    const int i = rect_bin(x, b.xmin, b.xmax, g.nx_);
    const int j = rect_bin(y, b.ymin, b.ymax, g.ny_);
    return CellId{static_cast<std::int64_t>(j) * g.nx_ + i};
  }

  const double r = g.radius_;
  const double dx = x - b.xmin;
  const double dy = y - b.ymin;
  const auto col0 = static_cast<long long>(std::llround(dx / (1.5 * r)));
  CellId best{};
  double best_d2 = std::numeric_limits<double>::infinity();
  for (long long col = col0 - 1; col <= col0 + 1; ++col) {
    if (col < 0 || col >= g.hex_cols_) continue;
    const double shift = (col & 1) ? 0.5 : 0.0;
    const auto row0 = static_cast<long long>(std::llround(dy / (kSqrt3 * r) - shift));
    for (long long row = row0 - 1; row <= row0 + 1; ++row) {
      if (row < -1 || row + 1 >= g.hex_rows_) continue;
      const double cx = 1.5 * r * static_cast<double>(col);
      const double cy = kSqrt3 * r * (static_cast<double>(row) + shift);
      const double d2 = (dx - cx) * (dx - cx) + (dy - cy) * (dy - cy);
      const CellId id{(row + 1) * g.hex_cols_ + col};
      if (d2 < best_d2 || (d2 == best_d2 && id < best)) {
        best_d2 = d2;
        best = id;
      }
    }
  }
  if (best.value < 0) throw Error("point is outside the hex tiling");
  return best;
}

CellId assign_cell(const GridSpec& g, double x, double y) {
  if (!g.bbox_.contains(x, y)) {
    throw Error("point (" + csv::format_double(x) + ", " + csv::format_double(y) +
                ") is outside the grid bounding box");
  }
  return nearest_cell(g, x, y);
}

Point cell_center(const GridSpec& g, CellId c) {
  if (!g.valid(c)) throw Error("invalid cell id " + std::to_string(c.value));
  const BBox& b = g.bbox_;
  if (g.kind_ == GridKind::Rect) {
    const auto i = static_cast<double>(c.value % g.nx_);
    const auto j = static_cast<double>(c.value / g.nx_);
    const double wx = (b.xmax - b.xmin) / g.nx_;
    const double wy = (b.ymax - b.ymin) / g.ny_;
    return {b.xmin + (i + 0.5) * wx, b.ymin + (j + 0.5) * wy};
  }
  const long long col = c.value % g.hex_cols_;
  const long long row = c.value / g.hex_cols_ - 1;
  const double shift = (col & 1) ? 0.5 : 0.0;
  return {b.xmin + 1.5 * g.radius_ * static_cast<double>(col),
          b.ymin + kSqrt3 * g.radius_ * (static_cast<double>(row) + shift)};
}

double cell_distance(const GridSpec& g, CellId a, CellId b) {
  if (a == b) {
    if (!g.valid(a)) throw Error("invalid cell id " + std::to_string(a.value));
    return 0.0;
  }
  const Point pa = cell_center(g, a);
  const Point pb = cell_center(g, b);
  return std::hypot(pa.x - pb.x, pa.y - pb.y);
}

BBox bounding_box_of(const std::vector<Point>& points) {
  if (points.empty()) return BBox{0.0, 1.0, 0.0, 1.0};
  BBox b{points[0].x, points[0].x, points[0].y, points[0].y};
  for (const auto& p : points) {
    b.xmin = std::min(b.xmin, p.x);
    b.xmax = std::max(b.xmax, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.ymax = std::max(b.ymax, p.y);
  }
  if (b.xmax == b.xmin) {
    b.xmin -= 0.5;
    b.xmax += 0.5;
  }
  if (b.ymax == b.ymin) {
    b.ymin -= 0.5;
    b.ymax += 0.5;
  }
  return b;
}

std::string to_string(GridKind kind) { return kind == GridKind::Rect ? "rect" : "hex"; }

GridKind parse_grid_kind(const std::string& name) {
  if (name == "rect") return GridKind::Rect;
  if (name == "hex") return GridKind::Hex;
  throw Error("unknown grid kind '" + name + "' (expected rect or hex)");
}

void write_cell_centers(const GridSpec& g, std::ostream& out) {
  out << "cell,x,y\n";
  for (std::int64_t id = 0; id < g.cell_count(); ++id) {
    const Point p = cell_center(g, CellId{id});
    out << id << ',' << csv::format_double(p.x) << ',' << csv::format_double(p.y) << '\n';
  }
}

}  // namespace chronnet
