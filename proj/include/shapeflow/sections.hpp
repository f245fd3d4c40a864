#pragma once
// Planar domain representations and the bridge between them:
//  - RasterDomain: binary cell mask on a uniform grid inside its bounding box,
//    plus zero-measure obstructions (severed cell-to-cell faces, pinned grid
//    vertices) that solvers honor as Dirichlet constraints.
//  - SectionedDomain: exact 1D sections of the mask along a direction, the
//    representation the continuous symmetrization flow acts on.

#include <cstdint>
#include <vector>

#include "shapeflow/interval_flow.hpp"

namespace shapeflow {

// Severed face between cell (i,j) and its neighbor: axis 0 -> (i+1,j),
// axis 1 -> (i,j+1). Both cells must be masked.
struct CrackEdge {
  int i = 0, j = 0, axis = 0;
  friend bool operator<(const CrackEdge& x, const CrackEdge& y) {
    if (x.axis != y.axis) return x.axis < y.axis;
    if (x.j != y.j) return x.j < y.j;
    return x.i < y.i;
  }
  friend bool operator==(const CrackEdge& x, const CrackEdge& y) {
    return x.i == y.i && x.j == y.j && x.axis == y.axis;
  }
};

// Pinned grid vertex (i in [0,nx], j in [0,ny]): imposes the Dirichlet value on
// the four stencil links whose shared face ends at the vertex.
struct PinVertex {
  int i = 0, j = 0;
  friend bool operator<(const PinVertex& x, const PinVertex& y) {
    if (x.j != y.j) return x.j < y.j;
    return x.i < y.i;
  }
  friend bool operator==(const PinVertex& x, const PinVertex& y) {
    return x.i == y.i && x.j == y.j;
  }
};

class RasterDomain {
 public:
  RasterDomain() = default;
  RasterDomain(int nx, int ny, double h);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  double box_width() const { return nx_ * h_; }
  double box_height() const { return ny_ * h_; }
  double center_x() const { return 0.5 * nx_ * h_; }
  double center_y() const { return 0.5 * ny_ * h_; }

  bool in_grid(int i, int j) const { return i >= 0 && i < nx_ && j >= 0 && j < ny_; }
  bool masked(int i, int j) const { return in_grid(i, j) && mask_[idx(i, j)] != 0; }
  void set_cell(int i, int j, bool on);
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }

  const std::vector<std::uint8_t>& mask() const { return mask_; }
  long cell_count() const;
  double measure() const { return cell_count() * h_ * h_; }
  bool empty() const { return cell_count() == 0; }

  double cell_center_x(int i) const { return (i + 0.5) * h_; }
  double cell_center_y(int j) const { return (j + 0.5) * h_; }

  const std::vector<CrackEdge>& cracks() const { return cracks_; }
  const std::vector<PinVertex>& pins() const { return pins_; }
  void add_crack(const CrackEdge& e);
  void add_pin(const PinVertex& v);
  void clear_obstructions();
  bool grid_matches(const RasterDomain& o) const;

 private:
  int nx_ = 0, ny_ = 0;
  double h_ = 0.0;
  std::vector<std::uint8_t> mask_;
  std::vector<CrackEdge> cracks_;  // sorted, unique
  std::vector<PinVertex> pins_;    // sorted, unique
};

// Sections of a planar set along direction (-sin theta, cos theta), indexed by
// the coordinate along (cos theta, sin theta). Both coordinates are relative to
// the box center, so the flow contracts sections toward the hyperplane through
// the center. Column k spans [x_lo + k*dx, x_lo + (k+1)*dx).
struct SectionedDomain {
  double theta = 0.0;
  double x_lo = 0.0;
  double dx = 0.0;
  std::vector<IntervalUnion> columns;

  double measure() const {
    double s = 0.0;
    for (const auto& c : columns) s += c.total_length();
    return s * dx;
  }
};

// Exact intersection of per-column scanlines with the union of masked cells.
// supersample > 1 narrows the columns to dx = h / supersample.
SectionedDomain section(const RasterDomain& d, double theta, int supersample = 1);

// Continuous symmetrization at flow parameter tau in [0,1]; tau = 1 is the full
// Steiner symmetrization of every column.
SectionedDomain css(const SectionedDomain& s, double tau);

// Left-limit variant: collisions occurring exactly at tau stay as touching
// parts, reported per column so the rasterizer can keep them as slits.
struct SlitMark {
  int column = 0;
  double s = 0.0;
};
struct CssLeftLimit {
  SectionedDomain domain;       // merged view (valid strict unions)
  std::vector<SlitMark> slits;  // contact coordinates
};
CssLeftLimit css_left_limit(const SectionedDomain& s, double tau);

// Measure-preserving rasterization: per column, round(total length / h) cells,
// apportioned to the column's parts by largest remainder and placed to best
// overlap each part. Slit marks become crack edges (axis-aligned theta only).
struct Rasterized {
  RasterDomain domain;
  double measure_error = 0.0;  // |cell measure - sectioned measure|
  long column_deficit = 0;     // cells that could not be placed in their column
};
Rasterized rasterize(const SectionedDomain& s, const RasterDomain& grid_template,
                     const std::vector<SlitMark>* slits = nullptr);

// section -> css(1) -> rasterize on the same grid.
RasterDomain steiner_symmetrize(const RasterDomain& d, double theta);

// h^2 * |A xor B| over the shared grid; throws when grids differ.
double symm_difference_measure(const RasterDomain& a, const RasterDomain& b);

}  // namespace shapeflow
