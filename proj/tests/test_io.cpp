// Serialization: mask and sectioned-domain roundtrips, trace exports, image
// and vector snapshots, error paths. Files go to a per-run temp directory.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "shapeflow/flows.hpp"
#include "shapeflow/io.hpp"
#include "shapeflow/pde.hpp"
#include "shapeflow/sections.hpp"
#include "shapeflow/shapes.hpp"

using namespace shapeflow;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

fs::path temp_dir() {
  static fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "shapeflow_io_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

long line_count(const std::string& text) {
  long n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("mask files roundtrip with their obstruction sidecar") {
  std::mt19937_64 rng(42);
  RasterDomain d(13, 9, 0.125);
  for (int j = 0; j < 9; ++j)
    for (int i = 0; i < 13; ++i) d.set_cell(i, j, (rng() & 3) != 0);
  d.set_cell(5, 5, true);
  d.set_cell(6, 5, true);
  d.set_cell(5, 6, true);
  if (d.masked(5, 5) && d.masked(6, 5)) d.add_crack({5, 5, 0});
  if (d.masked(5, 5) && d.masked(5, 6)) d.add_crack({5, 5, 1});
  d.add_pin({3, 3});
  d.add_pin({7, 2});

  const fs::path p = temp_dir() / "mask_with_sidecar.txt";
  write_mask(d, p.string());
  CHECK(fs::exists(p));
  CHECK(fs::exists(p.string() + ".json"));

  const RasterDomain back = read_mask(p.string());
  CHECK(back.nx() == d.nx());
  CHECK(back.ny() == d.ny());
  CHECK(std::abs(back.h() - d.h()) <= 1e-15);
  CHECK(back.mask() == d.mask());
  CHECK(back.cracks() == d.cracks());
  CHECK(back.pins() == d.pins());
}

TEST_CASE("plain masks write no sidecar and clear stale ones") {
  RasterDomain d(6, 4, 0.25);
  d.set_cell(2, 2, true);
  d.set_cell(3, 2, true);
  const fs::path p = temp_dir() / "plain_mask.txt";

  // First write one with obstructions so a sidecar exists...
  RasterDomain obstructed = d;
  obstructed.add_crack({2, 2, 0});
  write_mask(obstructed, p.string());
  CHECK(fs::exists(p.string() + ".json"));

  // ...then overwrite with a plain mask: the stale sidecar must go away.
  write_mask(d, p.string());
  CHECK(!fs::exists(p.string() + ".json"));
  const RasterDomain back = read_mask(p.string());
  CHECK(back.mask() == d.mask());
  CHECK(back.cracks().empty());
  CHECK(back.pins().empty());
}

TEST_CASE("mask file layout is the documented plain text") {
  RasterDomain d(3, 2, 0.5);
  d.set_cell(0, 0, true);
  d.set_cell(2, 1, true);
  const fs::path p = temp_dir() / "tiny_mask.txt";
  write_mask(d, p.string());
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  CHECK(line.substr(0, 4) == "3 2 ");
  std::getline(in, line);
  CHECK(line == "100");  // bottom row first
  std::getline(in, line);
  CHECK(line == "001");
}

TEST_CASE("sectioned domains roundtrip through JSON") {
  const RasterDomain disk = disk_domain(0.5, 1.0 / 16);
  const SectionedDomain s = section(disk, kPi / 4);
  const fs::path p = temp_dir() / "sectioned.json";
  write_sectioned(s, p.string());
  const SectionedDomain back = read_sectioned(p.string());
  CHECK(std::abs(back.theta - s.theta) <= 1e-15);
  CHECK(std::abs(back.x_lo - s.x_lo) <= 1e-15);
  CHECK(std::abs(back.dx - s.dx) <= 1e-15);
  REQUIRE(back.columns.size() == s.columns.size());
  for (std::size_t k = 0; k < s.columns.size(); ++k) {
    const auto& a = s.columns[k].parts();
    const auto& b = back.columns[k].parts();
    REQUIRE(a.size() == b.size());
    for (std::size_t q = 0; q < a.size(); ++q) {
      CHECK(std::abs(a[q].a - b[q].a) <= 1e-15);
      CHECK(std::abs(a[q].b - b[q].b) <= 1e-15);
    }
  }
  CHECK(std::abs(back.measure() - s.measure()) <= 1e-12);
}

TEST_CASE("trace CSV carries the exact header and one row per sample") {
  const RasterDomain rect = rectangle_domain(1.0, 0.5, 1.0 / 16);
  const FlowTrace tr = css_path(rect, 0.0, 4);
  const fs::path p = temp_dir() / "trace.csv";
  write_trace_csv(tr, p.string());
  const std::string text = slurp(p);
  CHECK(text.rfind("tau,measure,lambda,torsion,perimeter,gamma_to_target\n", 0) == 0);
  CHECK(line_count(text) == 5);  // header + 4 samples
  // No gamma target: rows end with an empty field.
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    CHECK(!line.empty());
    CHECK(line.back() == ',');
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
}

TEST_CASE("trace CSV fills gamma when a target is tracked") {
  const RasterDomain rect = rectangle_domain(1.0, 0.5, 1.0 / 16);
  const FlowTrace tr = css_path(rect, 0.0, 3, SolverConfig{}, 10.0, 1e-3, &rect);
  const fs::path p = temp_dir() / "trace_gamma.csv";
  write_trace_csv(tr, p.string());
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    CHECK(line.back() != ',');
    CHECK(std::count(line.begin(), line.end(), ',') == 5);
  }
}

TEST_CASE("trace JSON reports samples, jumps, stats, and the warning flag") {
  const double h = 1.0 / 64;
  const RasterDomain notch = notched_square_domain(1.0, 0.5, 1.0 / 32, h);
  const FlowTrace tr = css_path(notch, kPi / 2, 9);
  REQUIRE(tr.jumps.size() == 1);
  const fs::path p = temp_dir() / "trace.json";
  write_trace_json(tr, p.string());

  const nlohmann::json j = nlohmann::json::parse(slurp(p));
  REQUIRE(j.contains("samples"));
  REQUIRE(j.contains("jumps"));
  CHECK(j["samples"].size() == 9);
  CHECK(j["jumps"].size() == 1);
  CHECK(j["jumps"][0]["delta_torsion"].get<double>() > 0.0);
  CHECK(j["max_torsion_decrease"].get<double>() == 0.0);
  CHECK(j["warning"].get<bool>() == false);
  const auto& s0 = j["samples"][0];
  CHECK(s0["tau"].get<double>() == 0.0);
  CHECK(s0["torsion"].get<double>() == tr.samples[0].torsion);
  // No target tracked: gamma is either absent or null, never a number.
  CHECK((!s0.contains("gamma_to_target") || s0["gamma_to_target"].is_null()));
}

TEST_CASE("field exports: CSV rows per masked cell, PGM picture shape") {
  const RasterDomain disk = disk_domain(0.4, 1.0 / 16);
  SolverConfig cfg;
  const FieldSolution u = torsion(disk, cfg);

  const fs::path pc = temp_dir() / "field.csv";
  write_field_csv(disk, u.values, pc.string());
  const std::string text = slurp(pc);
  CHECK(text.rfind("x,y,u\n", 0) == 0);
  CHECK(line_count(text) == disk.cell_count() + 1);

  const fs::path pp = temp_dir() / "field.pgm";
  write_field_pgm(disk, u.values, pp.string());
  std::istringstream in(slurp(pp));
  std::string magic;
  int w = 0, hh = 0, maxv = 0;
  in >> magic >> w >> hh >> maxv;
  CHECK(magic == "P2");
  CHECK(w == disk.nx());
  CHECK(hh == disk.ny());
  CHECK(maxv == 255);
  long pixels = 0;
  int v;
  while (in >> v) {
    CHECK(v >= 0);
    CHECK(v <= 255);
    ++pixels;
  }
  CHECK(pixels == static_cast<long>(disk.nx()) * disk.ny());
}

TEST_CASE("SVG snapshot marks cells, cracks, and pins") {
  RasterDomain d(8, 8, 0.125);
  for (int j = 2; j < 6; ++j)
    for (int i = 2; i < 6; ++i) d.set_cell(i, j, true);
  d.add_crack({3, 3, 0});
  d.add_pin({4, 4});
  const fs::path p = temp_dir() / "snap.svg";
  write_svg(d, p.string());
  const std::string text = slurp(p);
  CHECK(text.rfind("<svg", 0) == 0);
  CHECK(text.find("<rect") != std::string::npos);
  CHECK(text.find("<line") != std::string::npos);    // the crack
  CHECK(text.find("<circle") != std::string::npos);  // the pin
  CHECK(text.find("</svg>") != std::string::npos);
}

TEST_CASE("wrong paths and malformed files are rejected") {
  CHECK_THROWS_AS(read_mask((temp_dir() / "missing.txt").string()), std::runtime_error);
  CHECK_THROWS_AS(read_sectioned((temp_dir() / "missing.json").string()), std::runtime_error);

  const fs::path bad = temp_dir() / "bad_mask.txt";
  {
    std::ofstream out(bad);
    out << "not a header\n1010\n";
  }
  CHECK_THROWS_AS(read_mask(bad.string()), std::runtime_error);

  const fs::path badj = temp_dir() / "bad_sectioned.json";
  {
    std::ofstream out(badj);
    out << "{\"theta\": 0.0}";
  }
  CHECK_THROWS_AS(read_sectioned(badj.string()), std::runtime_error);

  RasterDomain d(2, 2, 0.5);
  d.set_cell(0, 0, true);
  CHECK_THROWS_AS(write_mask(d, (temp_dir() / "no_such_dir" / "x.txt").string()),
                  std::runtime_error);
}

TEST_CASE("mask roundtrip over generated shapes keeps measures") {
  for (const RasterDomain& d :
       {disk_domain(0.5, 1.0 / 32), l_shape_domain(1.0, 1.0 / 16), blob_domain(4, 1.0 / 24)}) {
    const fs::path p = temp_dir() / "gen_roundtrip.txt";
    write_mask(d, p.string());
    const RasterDomain back = read_mask(p.string());
    CHECK(back.mask() == d.mask());
    CHECK(back.cell_count() == d.cell_count());
    CHECK(std::abs(back.measure() - d.measure()) <= 1e-12);
  }
}
