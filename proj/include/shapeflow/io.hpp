#pragma once
// Plain-text serialization. All writers are deterministic: fixed layouts,
// %.17g doubles, no timestamps.
//
// Mask file: first line "nx ny h", then ny rows of nx characters ('0'/'1'),
// bottom row (j = 0) first. Cracks and pins live in a JSON sidecar next to the
// mask ("<path>.json"), written only when present.

#include <string>
#include <vector>

#include "shapeflow/flows.hpp"
#include "shapeflow/sections.hpp"

namespace shapeflow {

void write_mask(const RasterDomain& d, const std::string& path);
RasterDomain read_mask(const std::string& path);

void write_sectioned(const SectionedDomain& s, const std::string& path);
SectionedDomain read_sectioned(const std::string& path);

// CSV with header "tau,measure,lambda,torsion,perimeter,gamma_to_target";
// a missing gamma target leaves the last field empty.
void write_trace_csv(const FlowTrace& t, const std::string& path);

// Full trace as JSON: samples, jump events, monotonicity stats, warning flag.
void write_trace_json(const FlowTrace& t, const std::string& path);

// Scalar field on the masked cells: CSV rows "x,y,u" (cell centers).
void write_field_csv(const RasterDomain& d, const std::vector<double>& u,
                     const std::string& path);

// PGM (P2) picture of the field, normalized to its maximum; unmasked cells 0.
void write_field_pgm(const RasterDomain& d, const std::vector<double>& u,
                     const std::string& path);

// SVG snapshot: filled cells, crack segments, pin dots.
void write_svg(const RasterDomain& d, const std::string& path);

}  // namespace shapeflow
