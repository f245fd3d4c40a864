#include "shapeflow/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace shapeflow {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  return f;
}

bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}

}  // namespace

void write_mask(const RasterDomain& d, const std::string& path) {
  auto f = open_out(path);
  f << d.nx() << ' ' << d.ny() << ' ' << fmt(d.h()) << '\n';
  for (int j = 0; j < d.ny(); ++j) {
    for (int i = 0; i < d.nx(); ++i) f << (d.masked(i, j) ? '1' : '0');
    f << '\n';
  }
  f.close();
  const std::string side = path + ".json";
  if (d.cracks().empty() && d.pins().empty()) {
    if (file_exists(side)) std::remove(side.c_str());
    return;
  }
  json doc;
  doc["cracks"] = json::array();
  for (const CrackEdge& e : d.cracks()) doc["cracks"].push_back({e.i, e.j, e.axis});
  doc["pins"] = json::array();
  for (const PinVertex& p : d.pins()) doc["pins"].push_back({p.i, p.j});
  auto sf = open_out(side);
  sf << doc.dump(1, ' ') << '\n';
}

RasterDomain read_mask(const std::string& path) {
  auto f = open_in(path);
  int nx = 0, ny = 0;
  double h = 0.0;
  if (!(f >> nx >> ny >> h)) throw std::runtime_error("bad mask header in " + path);
  RasterDomain d(nx, ny, h);
  std::string row;
  std::getline(f, row);  // consume the header newline
  for (int j = 0; j < ny; ++j) {
    if (!std::getline(f, row) || static_cast<int>(row.size()) < nx)
      throw std::runtime_error("truncated mask row in " + path);
    for (int i = 0; i < nx; ++i) {
      if (row[i] == '1') d.set_cell(i, j, true);
      else if (row[i] != '0') throw std::runtime_error("bad mask character in " + path);
    }
  }
  const std::string side = path + ".json";
  if (file_exists(side)) {
    try {
      json doc = json::parse(open_in(side));
      for (const auto& e : doc.value("cracks", json::array()))
        d.add_crack({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()});
      for (const auto& p : doc.value("pins", json::array()))
        d.add_pin({p.at(0).get<int>(), p.at(1).get<int>()});
    } catch (const json::exception& e) {
      throw std::runtime_error("malformed obstruction sidecar " + side + ": " + e.what());
    }
  }
  return d;
}

void write_sectioned(const SectionedDomain& s, const std::string& path) {
  json doc;
  doc["theta"] = s.theta;
  doc["x_lo"] = s.x_lo;
  doc["dx"] = s.dx;
  doc["columns"] = json::array();
  for (const IntervalUnion& col : s.columns) {
    json parts = json::array();
    for (const Interval& p : col.parts()) parts.push_back({p.a, p.b});
    doc["columns"].push_back(std::move(parts));
  }
  auto f = open_out(path);
  f << doc.dump(1, ' ') << '\n';
}

SectionedDomain read_sectioned(const std::string& path) {
  try {
    json doc = json::parse(open_in(path));
    SectionedDomain s;
    s.theta = doc.at("theta").get<double>();
    s.x_lo = doc.at("x_lo").get<double>();
    s.dx = doc.at("dx").get<double>();
    for (const auto& col : doc.at("columns")) {
      std::vector<Interval> parts;
      for (const auto& p : col) parts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
      s.columns.push_back(parts.empty() ? IntervalUnion{} : IntervalUnion(std::move(parts)));
    }
    return s;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed sectioned-domain file " + path + ": " + e.what());
  }
}

void write_trace_csv(const FlowTrace& t, const std::string& path) {
  auto f = open_out(path);
  f << "tau,measure,lambda,torsion,perimeter,gamma_to_target\n";
  for (const FlowSample& s : t.samples) {
    f << fmt(s.tau) << ',' << fmt(s.measure) << ',' << fmt(s.lambda) << ','
      << fmt(s.torsion) << ',' << fmt(s.perimeter) << ',';
    if (std::isfinite(s.gamma_to_target)) f << fmt(s.gamma_to_target);
    f << '\n';
  }
}

void write_trace_json(const FlowTrace& t, const std::string& path) {
  json doc;
  doc["samples"] = json::array();
  for (const FlowSample& s : t.samples) {
    json row;
    row["tau"] = s.tau;
    row["measure"] = s.measure;
    row["lambda"] = s.lambda;
    row["torsion"] = s.torsion;
    row["perimeter"] = s.perimeter;
    if (std::isfinite(s.gamma_to_target)) row["gamma_to_target"] = s.gamma_to_target;
    if (!s.note.empty()) row["note"] = s.note;
    doc["samples"].push_back(std::move(row));
  }
  doc["jumps"] = json::array();
  for (const JumpEvent& j : t.jumps)
    doc["jumps"].push_back({{"tau_before", j.tau_before},
                            {"tau_after", j.tau_after},
                            {"delta_torsion", j.delta_torsion}});
  doc["max_torsion_decrease"] = t.max_torsion_decrease;
  doc["max_lambda_increase"] = t.max_lambda_increase;
  doc["warning"] = t.warning;
  auto f = open_out(path);
  f << doc.dump(1, ' ') << '\n';
}

void write_field_csv(const RasterDomain& d, const std::vector<double>& u,
                     const std::string& path) {
  if (u.size() != d.mask().size()) throw std::invalid_argument("field size mismatch");
  auto f = open_out(path);
  f << "x,y,u\n";
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (d.masked(i, j))
        f << fmt(d.cell_center_x(i)) << ',' << fmt(d.cell_center_y(j)) << ','
          << fmt(u[d.idx(i, j)]) << '\n';
}

void write_field_pgm(const RasterDomain& d, const std::vector<double>& u,
                     const std::string& path) {
  if (u.size() != d.mask().size()) throw std::invalid_argument("field size mismatch");
  double umax = 0.0;
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (d.masked(i, j)) umax = std::max(umax, std::abs(u[d.idx(i, j)]));
  auto f = open_out(path);
  f << "P2\n" << d.nx() << ' ' << d.ny() << "\n255\n";
  for (int j = d.ny() - 1; j >= 0; --j) {  // top row first, picture convention
    for (int i = 0; i < d.nx(); ++i) {
      int v = 0;
      if (d.masked(i, j) && umax > 0.0)
        v = static_cast<int>(std::lround(255.0 * std::abs(u[d.idx(i, j)]) / umax));
      f << v << (i + 1 < d.nx() ? ' ' : '\n');
    }
  }
}

void write_svg(const RasterDomain& d, const std::string& path) {
  auto f = open_out(path);
  const double w = d.box_width(), h = d.box_height();
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << fmt(w) << ' '
    << fmt(h) << "\">\n";
  // y flips so j = 0 sits at the bottom of the picture.
  auto ypix = [&](double y) { return h - y; };
  f << "<g fill=\"#222\" stroke=\"none\">\n";
  for (int j = 0; j < d.ny(); ++j) {
    int i = 0;
    while (i < d.nx()) {
      if (!d.masked(i, j)) { ++i; continue; }
      int i2 = i;
      while (i2 < d.nx() && d.masked(i2, j)) ++i2;  // merge runs to keep files small
      f << "<rect x=\"" << fmt(i * d.h()) << "\" y=\"" << fmt(ypix((j + 1) * d.h()))
        << "\" width=\"" << fmt((i2 - i) * d.h()) << "\" height=\"" << fmt(d.h())
        << "\"/>\n";
      i = i2;
    }
  }
  f << "</g>\n";
  if (!d.cracks().empty()) {
    f << "<g stroke=\"#d22\" stroke-width=\"" << fmt(0.3 * d.h()) << "\">\n";
    for (const CrackEdge& e : d.cracks()) {
      double x1, y1, x2, y2;
      if (e.axis == 0) {  // vertical face between (i,j) and (i+1,j)
        x1 = x2 = (e.i + 1) * d.h();
        y1 = e.j * d.h();
        y2 = (e.j + 1) * d.h();
      } else {  // horizontal face between (i,j) and (i,j+1)
        y1 = y2 = (e.j + 1) * d.h();
        x1 = e.i * d.h();
        x2 = (e.i + 1) * d.h();
      }
      f << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(ypix(y1)) << "\" x2=\"" << fmt(x2)
        << "\" y2=\"" << fmt(ypix(y2)) << "\"/>\n";
    }
    f << "</g>\n";
  }
  if (!d.pins().empty()) {
    f << "<g fill=\"#26c\">\n";
    for (const PinVertex& p : d.pins())
      f << "<circle cx=\"" << fmt(p.i * d.h()) << "\" cy=\"" << fmt(ypix(p.j * d.h()))
        << "\" r=\"" << fmt(0.25 * d.h()) << "\"/>\n";
    f << "</g>\n";
  }
  f << "</svg>\n";
}

}  // namespace shapeflow
