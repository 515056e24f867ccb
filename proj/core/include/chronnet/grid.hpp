#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace chronnet {

/// Identifier of one grid cell. Stable for a fixed GridSpec.
struct CellId {
  std::int64_t value = -1;

  friend auto operator<=>(const CellId&, const CellId&) = default;
};

struct BBox {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  [[nodiscard]] bool contains(double x, double y) const noexcept {
    return x >= xmin && x <= xmax && y >= ymin && y <= ymax;
  }
  friend bool operator==(const BBox&, const BBox&) = default;
};

enum class GridKind { Rect, Hex };

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Spatial discretization of a bounding box.
///
/// Rect cells are numbered row-major, `id = j * nx + i`, with column i along x
/// and row j along y. Bins are half-open, and points on the upper edge of the
/// box fall into the last column/row.
///
/// Hex cells use a flat-top tiling with circumradius r whose (0, 0) center
/// sits on (xmin, ymin). Odd columns are shifted up by half a row. Row indices
/// start at -1 so that every hexagon touching the box has an id.
class GridSpec {
 public:
  GridSpec() = default;

  static GridSpec rect(BBox bbox, int nx, int ny);
  static GridSpec hex(BBox bbox, double radius);

  [[nodiscard]] GridKind kind() const noexcept { return kind_; }
  [[nodiscard]] const BBox& bbox() const noexcept { return bbox_; }
  [[nodiscard]] int nx() const noexcept { return nx_; }
  [[nodiscard]] int ny() const noexcept { return ny_; }
  [[nodiscard]] double radius() const noexcept { return radius_; }

  /// Total number of addressable cells.
  [[nodiscard]] std::int64_t cell_count() const noexcept;
  [[nodiscard]] bool valid(CellId c) const noexcept {
    return c.value >= 0 && c.value < cell_count();
  }

  /// Rect only: (column, row) of a cell.
  [[nodiscard]] std::pair<int, int> rect_index(CellId c) const;
  [[nodiscard]] CellId rect_cell(int i, int j) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  GridKind kind_ = GridKind::Rect;
  BBox bbox_{};
  int nx_ = 1;
  int ny_ = 1;
  double radius_ = 1.0;
  // hex tiling extents
  int hex_cols_ = 0;
  int hex_rows_ = 0;

  friend CellId assign_cell(const GridSpec&, double, double);
  friend CellId nearest_cell(const GridSpec&, double, double);
  friend Point cell_center(const GridSpec&, CellId);
};

/// Cell containing (x, y). Throws for points outside the bounding box.
CellId assign_cell(const GridSpec& g, double x, double y);

/// Like assign_cell but without the bounding-box check; hex points are
/// matched to the nearest addressable center.
CellId nearest_cell(const GridSpec& g, double x, double y);

/// Geometric center of a cell.
Point cell_center(const GridSpec& g, CellId c);

/// Euclidean distance between cell centers.
double cell_distance(const GridSpec& g, CellId a, CellId b);

/// Smallest box containing all points, padded so it is never degenerate.
BBox bounding_box_of(const std::vector<Point>& points);

std::string to_string(GridKind kind);
GridKind parse_grid_kind(const std::string& name);

/// Writes `cell,x,y` for every cell of the grid.
void write_cell_centers(const GridSpec& g, std::ostream& out);

}  // namespace chronnet

template <>
struct std::hash<chronnet::CellId> {
  std::size_t operator()(const chronnet::CellId& c) const noexcept {
    return std::hash<std::int64_t>{}(c.value);
  }
};
