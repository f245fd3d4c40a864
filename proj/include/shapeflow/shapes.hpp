#pragma once
// Mask generators. Every shape is centered in its bounding box, padded by
// `pad` on each side, and filled by the cell-center-inside rule. Grid counts
// are rounded so aligned rectangles land exactly on cell faces.

#include <cstdint>

#include "shapeflow/sections.hpp"

namespace shapeflow {

RasterDomain rectangle_domain(double width, double height, double h, double pad = 0.25);
RasterDomain disk_domain(double radius, double h, double pad = 0.25);
RasterDomain ellipse_domain(double a, double b, double h, double pad = 0.25);
RasterDomain l_shape_domain(double size, double h, double pad = 0.25);
RasterDomain stadium_domain(double length, double radius, double h, double pad = 0.25);

// Square with a slot cut downward from the top edge midpoint. taper = 0 keeps
// the slot walls parallel; taper > 0 widens it toward the top by that slope.
RasterDomain notched_square_domain(double side, double depth, double width, double h,
                                   double pad = 0.25, double taper = 0.0);

// Star-shaped polygon with `knots` radial control points drawn uniformly from
// [r_lo, r_hi], joined by smooth periodic interpolation. Deterministic in seed.
RasterDomain blob_domain(std::uint64_t seed, double h, double pad = 0.25,
                         double r_lo = 0.45, double r_hi = 1.0, int knots = 7);

// Disk of the same measure as `like`, centered on the same grid.
RasterDomain matched_disk(const RasterDomain& like);

}  // namespace shapeflow
