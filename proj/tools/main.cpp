// Command-line driver: domains in (files or generator URIs), traces and
// snapshots out. Exit codes: 0 ok, 2 input error, 3 property violation
// (downgradable with --warn-only), 4 solver failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "shapeflow/flows.hpp"
#include "shapeflow/io.hpp"
#include "shapeflow/minmov.hpp"
#include "shapeflow/pde.hpp"
#include "shapeflow/sections.hpp"
#include "shapeflow/shapes.hpp"

namespace {

using namespace shapeflow;
using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr int kExitInput = 2;
constexpr int kExitProperty = 3;
constexpr int kExitSolver = 4;

// Disk reference values for the scale-free quotients: lambda * |disk| and
// T(disk) / |disk|^2, independent of the radius.
constexpr double kDiskLambdaQuotient = 5.783185962946785 * kPi;  // ~18.168
constexpr double kDiskTorsionQuotient = 1.0 / (8.0 * kPi);       // ~0.039789

struct PropertyGate {
  bool warn_only = false;
  bool violated = false;
  void flag(const std::string& msg) {
    violated = true;
    std::fprintf(stderr, "property violation: %s\n", msg.c_str());
  }
  int exit_code() const { return violated && !warn_only ? kExitProperty : 0; }
};

// Numbers may be plain ("0.0078125") or a fraction ("1/128").
double parse_number(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return std::stod(text);
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument("zero denominator");
    return num / den;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
}

// Angles may be radians ("0.7853"), or multiples of pi: "pi", "pi/2",
// "3pi/8", "0.5pi".
double parse_angle(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(), ::isspace), text.end());
  const auto p = text.find("pi");
  if (p == std::string::npos) return parse_number(text);
  const std::string pre = text.substr(0, p);
  const std::string post = text.substr(p + 2);
  double value = pre.empty() ? kPi : parse_number(pre) * kPi;
  if (!post.empty()) {
    if (post[0] != '/') throw std::invalid_argument("cannot parse angle '" + text + "'");
    value /= parse_number(post.substr(1));
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

// Generator URIs: gen:NAME?key=value&key=value. Values may use fractions.
// Common keys: step (grid spacing, default 1/64), pad (default 0.25).
RasterDomain generate_domain(const std::string& uri) {
  const std::string body = uri.substr(4);
  const auto qmark = body.find('?');
  const std::string name = body.substr(0, qmark == std::string::npos ? body.size() : qmark);
  std::unordered_map<std::string, std::string> kv;
  if (qmark != std::string::npos) {
    for (const std::string& pair : split(body.substr(qmark + 1), '&')) {
      if (pair.empty()) continue;
      const auto eq = pair.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("generator parameter '" + pair + "' is not key=value");
      kv[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
  }
  auto num = [&](const std::string& key, double dflt) {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    const double v = parse_number(it->second);
    kv.erase(it);
    return v;
  };
  const double step = num("step", 1.0 / 64);
  const double pad = num("pad", 0.25);
  RasterDomain d(1, 1, 1.0);
  if (name == "rectangle") {
    d = rectangle_domain(num("w", 2.0), num("h", 1.0), step, pad);
  } else if (name == "disk") {
    d = disk_domain(num("r", 0.5), step, pad);
  } else if (name == "ellipse") {
    d = ellipse_domain(num("a", 1.0), num("b", 0.5), step, pad);
  } else if (name == "lshape") {
    d = l_shape_domain(num("size", 1.0), step, pad);
  } else if (name == "stadium") {
    d = stadium_domain(num("len", 1.0), num("r", 0.25), step, pad);
  } else if (name == "notch") {
    d = notched_square_domain(num("side", 1.0), num("depth", 0.5), num("width", 1.0 / 32),
                              step, pad, num("taper", 0.0));
  } else if (name == "blob") {
    d = blob_domain(static_cast<std::uint64_t>(num("seed", 1.0)), step, pad,
                    num("rlo", 0.45), num("rhi", 1.0), static_cast<int>(num("knots", 7.0)));
  } else {
    throw std::invalid_argument("unknown generator '" + name + "'");
  }
  if (!kv.empty())
    throw std::invalid_argument("unknown generator parameter '" + kv.begin()->first + "'");
  return d;
}

RasterDomain load_domain(const std::string& spec) {
  if (spec.rfind("gen:", 0) == 0) return generate_domain(spec);
  return read_mask(spec);
}

// One optional JSON config file; command-line flags override its keys.
struct ConfigFile {
  json doc = json::object();
  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw std::invalid_argument("config file " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  }
  // Fill `value` from config key when the CLI option was not passed.
  template <typename T>
  void fallback(const CLI::Option* opt, const std::string& key, T& value) const {
    if (opt && opt->count() > 0) return;
    if (!doc.contains(key)) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        value = doc[key].is_string() ? parse_number(doc[key].get<std::string>())
                                     : doc[key].get<double>();
      } else {
        value = doc[key].get<T>();
      }
    } catch (const json::exception& e) {
      throw std::invalid_argument("config key '" + key + "': " + e.what());
    }
  }
  void fallback_angle(const CLI::Option* opt, const std::string& key, double& value) const {
    if (opt && opt->count() > 0) return;
    if (!doc.contains(key)) return;
    value = doc[key].is_string() ? parse_angle(doc[key].get<std::string>())
                                 : doc[key].get<double>();
  }
};

void print_sample_line(const FlowSample& s) {
  std::printf("tau=%.6f measure=%.9g lambda=%.9g torsion=%.9g perimeter=%.9g\n", s.tau,
              s.measure, s.lambda, s.torsion, s.perimeter);
}

RasterDomain domain_from_stored_mask(const RasterDomain& grid,
                                     const std::vector<std::uint8_t>& mask) {
  RasterDomain d(grid.nx(), grid.ny(), grid.h());
  for (int j = 0; j < grid.ny(); ++j)
    for (int i = 0; i < grid.nx(); ++i)
      if (mask[static_cast<std::size_t>(j) * grid.nx() + i]) d.set_cell(i, j, true);
  return d;
}

int gate_trace(const FlowTrace& tr, double slack, PropertyGate& gate) {
  for (const FlowSample& s : tr.samples)
    if (!s.note.empty()) {
      std::fprintf(stderr, "solver failure at tau=%.6f: %s\n", s.tau, s.note.c_str());
      return kExitSolver;
    }
  const double t0 = std::abs(tr.samples.front().torsion);
  const double l0 = std::abs(tr.samples.front().lambda);
  if (tr.max_torsion_decrease > slack * std::max(t0, 1e-300)) {
    std::ostringstream ss;
    ss << "torsion decreased by " << tr.max_torsion_decrease << " (slack "
       << slack * t0 << ")";
    gate.flag(ss.str());
  }
  if (tr.max_lambda_increase > slack * std::max(l0, 1e-300)) {
    std::ostringstream ss;
    ss << "lambda increased by " << tr.max_lambda_increase << " (slack " << slack * l0
       << ")";
    gate.flag(ss.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shape-flow toolkit: continuous symmetrization of planar domains"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; flags take precedence");

  SolverConfig scfg;
  PropertyGate gate;
  double slack = 0.02;
  CLI::Option* o_cg_tol = app.add_option("--cg-tol", scfg.cg_tol, "linear solve tolerance");
  CLI::Option* o_cg_it =
      app.add_option("--cg-max-iter", scfg.cg_max_iter, "linear solve iteration cap");
  CLI::Option* o_eig_tol =
      app.add_option("--eig-tol", scfg.eig_tol, "eigenvalue increment tolerance");
  CLI::Option* o_eig_it =
      app.add_option("--eig-max-iter", scfg.eig_max_iter, "eigen iteration cap");
  CLI::Option* o_slack =
      app.add_option("--slack", slack, "relative slack for monotonicity checks");
  CLI::Option* o_warn = app.add_flag("--warn-only", gate.warn_only,
                                     "report property violations without failing");

  // ---- functionals ----
  auto* c_fun = app.add_subcommand("functionals", "measure, lambda, torsion, perimeter");
  std::string fun_domain, fun_out, fun_field, fun_pgm, fun_svg;
  c_fun->add_option("domain", fun_domain, "mask file or gen: URI")->required();
  c_fun->add_option("--out", fun_out, "write a JSON report");
  c_fun->add_option("--field-csv", fun_field, "write the torsion field as CSV");
  c_fun->add_option("--field-pgm", fun_pgm, "write the torsion field as PGM");
  c_fun->add_option("--svg", fun_svg, "write a domain snapshot");

  // ---- css ----
  auto* c_css = app.add_subcommand("css", "sampled symmetrization path in one direction");
  std::string css_domain, css_theta_text = "0", css_target, css_out, css_json, css_svg_prefix;
  int css_samples = 17;
  double css_jump_factor = 10.0, css_jump_floor = 1e-3;
  c_css->add_option("domain", css_domain, "mask file or gen: URI")->required();
  CLI::Option* o_css_theta =
      c_css->add_option("--theta", css_theta_text, "direction (radians, or e.g. pi/2)");
  CLI::Option* o_css_samples = c_css->add_option("--samples", css_samples, "sample count");
  c_css->add_option("--jump-factor", css_jump_factor, "jump threshold over median increment");
  c_css->add_option("--jump-floor", css_jump_floor, "jump floor relative to initial torsion");
  c_css->add_option("--target", css_target, "domain whose torsion field gamma is tracked to");
  c_css->add_option("--out", css_out, "trace CSV path");
  c_css->add_option("--json", css_json, "trace JSON path");
  c_css->add_option("--svg-prefix", css_svg_prefix, "write per-sample SVGs <prefix><k>.svg");

  // ---- symmetrize ----
  auto* c_sym = app.add_subcommand("symmetrize", "one symmetrization step");
  std::string sym_domain, sym_theta_text = "0", sym_out, sym_svg;
  c_sym->add_option("domain", sym_domain, "mask file or gen: URI")->required();
  CLI::Option* o_sym_theta =
      c_sym->add_option("--theta", sym_theta_text, "direction (radians, or e.g. pi/2)");
  c_sym->add_option("--out", sym_out, "write the symmetrized mask");
  c_sym->add_option("--svg", sym_svg, "write a snapshot of the result");

  // ---- roundtrip ----
  auto* c_rt = app.add_subcommand("roundtrip", "iterate symmetrization cycles to the ball");
  std::string rt_domain, rt_angles_text, rt_out, rt_json, rt_final, rt_ball;
  double rt_stop = 0.05;
  int rt_cycles = 12;
  c_rt->add_option("domain", rt_domain, "mask file or gen: URI")->required();
  c_rt->add_option("--angles", rt_angles_text, "comma list of directions (default 8 angles)");
  CLI::Option* o_rt_stop =
      c_rt->add_option("--stop-tol", rt_stop, "relative symmetric-difference target");
  CLI::Option* o_rt_cycles = c_rt->add_option("--max-cycles", rt_cycles, "cycle cap");
  c_rt->add_option("--out", rt_out, "trace CSV path");
  c_rt->add_option("--json", rt_json, "trace JSON path");
  c_rt->add_option("--final", rt_final, "write the final mask");
  c_rt->add_option("--ball", rt_ball, "write the comparison ball mask");

  // ---- repair ----
  auto* c_rep = app.add_subcommand("repair", "curve-guided path from obstructed to healed");
  std::string rep_minus, rep_plus, rep_out, rep_json, rep_anchor_text;
  int rep_order = 0, rep_samples = 17;
  c_rep->add_option("minus", rep_minus, "obstructed domain (mask file)")->required();
  c_rep->add_option("plus", rep_plus, "healed domain (mask file or gen: URI)")->required();
  CLI::Option* o_rep_order =
      c_rep->add_option("--order", rep_order, "curve order (0 = match grid resolution)");
  CLI::Option* o_rep_samples = c_rep->add_option("--samples", rep_samples, "sample count");
  c_rep->add_option("--anchor", rep_anchor_text, "curve start vertex i,j inside minus");
  c_rep->add_option("--out", rep_out, "trace CSV path");
  c_rep->add_option("--json", rep_json, "trace JSON path");

  // ---- minmov ----
  auto* c_mm = app.add_subcommand("minmov", "minimizing-movement descent of a functional");
  std::string mm_domain, mm_functional = "lambda", mm_search = "greedy";
  std::string mm_out, mm_json, mm_masks_prefix;
  MinMovConfig mmc;
  mmc.epsilon = 10.0;
  c_mm->add_option("domain", mm_domain, "mask file or gen: URI")->required();
  CLI::Option* o_mm_fun = c_mm->add_option(
      "--functional", mm_functional, "lambda | neg-torsion | perimeter | combo:wl,wt,wp");
  CLI::Option* o_mm_eps = c_mm->add_option("--epsilon", mmc.epsilon, "movement time step");
  CLI::Option* o_mm_steps = c_mm->add_option("--steps", mmc.n_steps, "number of steps");
  CLI::Option* o_mm_budget =
      c_mm->add_option("--budget", mmc.swap_budget, "functional evaluations per step");
  CLI::Option* o_mm_search = c_mm->add_option("--search", mm_search, "greedy | annealing");
  CLI::Option* o_mm_seed = c_mm->add_option("--seed", mmc.seed, "random seed");
  c_mm->add_option("--out", mm_out, "trace CSV path");
  c_mm->add_option("--json", mm_json, "trace JSON path");
  c_mm->add_option("--masks-prefix", mm_masks_prefix, "write per-step masks <prefix><k>.txt");

  // ---- gamma-dist ----
  auto* c_gd = app.add_subcommand("gamma-dist", "torsion-field distance between two domains");
  std::string gd_a, gd_b;
  c_gd->add_option("a", gd_a, "first domain (mask file or gen: URI)")->required();
  c_gd->add_option("b", gd_b, "second domain on the same grid")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    ConfigFile config;
    if (!config_path.empty()) config.load(config_path);
    config.fallback(o_cg_tol, "cg-tol", scfg.cg_tol);
    config.fallback(o_cg_it, "cg-max-iter", scfg.cg_max_iter);
    config.fallback(o_eig_tol, "eig-tol", scfg.eig_tol);
    config.fallback(o_eig_it, "eig-max-iter", scfg.eig_max_iter);
    config.fallback(o_slack, "slack", slack);
    config.fallback(o_warn, "warn-only", gate.warn_only);

    if (app.got_subcommand(c_fun)) {
      const RasterDomain d = load_domain(fun_domain);
      const FieldSolution tor = torsion(d, scfg);
      const double lam = eigen1(d, scfg).functional_value;
      const double per = perimeter(d);
      const double mea = d.measure();
      std::printf("measure      = %.9g\n", mea);
      std::printf("lambda       = %.9g\n", lam);
      std::printf("torsion      = %.9g\n", tor.functional_value);
      std::printf("perimeter    = %.9g\n", per);
      std::printf("lambda*measure   = %.9g (disk %.6g)\n", lam * mea, kDiskLambdaQuotient);
      std::printf("torsion/measure^2 = %.9g (disk %.6g)\n",
                  tor.functional_value / (mea * mea), kDiskTorsionQuotient);
      if (!fun_out.empty()) {
        json doc{{"measure", mea},
                 {"lambda", lam},
                 {"torsion", tor.functional_value},
                 {"perimeter", per},
                 {"lambda_measure_quotient", lam * mea},
                 {"torsion_measure_quotient", tor.functional_value / (mea * mea)}};
        std::ofstream(fun_out) << doc.dump(2) << '\n';
      }
      if (!fun_field.empty()) write_field_csv(d, tor.values, fun_field);
      if (!fun_pgm.empty()) write_field_pgm(d, tor.values, fun_pgm);
      if (!fun_svg.empty()) write_svg(d, fun_svg);
      return 0;
    }

    if (app.got_subcommand(c_css)) {
      config.fallback_angle(o_css_theta, "theta", css_jump_factor);  // placeholder, see below
      // theta comes as text: resolve config fallback manually.
      double theta;
      if (o_css_theta->count() == 0 && config.doc.contains("theta")) {
        theta = config.doc["theta"].is_string()
                    ? parse_angle(config.doc["theta"].get<std::string>())
                    : config.doc["theta"].get<double>();
      } else {
        theta = parse_angle(css_theta_text);
      }
      config.fallback(o_css_samples, "samples", css_samples);
      const RasterDomain d = load_domain(css_domain);
      std::optional<RasterDomain> target;
      if (!css_target.empty()) target = load_domain(css_target);
      const FlowTrace tr = css_path(d, theta, css_samples, scfg, css_jump_factor,
                                    css_jump_floor, target ? &*target : nullptr);
      for (const FlowSample& s : tr.samples) print_sample_line(s);
      std::printf("jumps=%zu max_torsion_decrease=%.3e max_lambda_increase=%.3e\n",
                  tr.jumps.size(), tr.max_torsion_decrease, tr.max_lambda_increase);
      if (!css_out.empty()) write_trace_csv(tr, css_out);
      if (!css_json.empty()) write_trace_json(tr, css_json);
      if (!css_svg_prefix.empty()) {
        const SectionedDomain sec = section(d, theta);
        for (int k = 0; k < css_samples; ++k) {
          const double tau = static_cast<double>(k) / (css_samples - 1);
          const RasterDomain snap = rasterize(css(sec, tau), d).domain;
          write_svg(snap, css_svg_prefix + std::to_string(k) + ".svg");
        }
      }
      const int solver_rc = gate_trace(tr, slack, gate);
      if (solver_rc) return solver_rc;
      return gate.exit_code();
    }

    if (app.got_subcommand(c_sym)) {
      double theta;
      if (o_sym_theta->count() == 0 && config.doc.contains("theta")) {
        theta = config.doc["theta"].is_string()
                    ? parse_angle(config.doc["theta"].get<std::string>())
                    : config.doc["theta"].get<double>();
      } else {
        theta = parse_angle(sym_theta_text);
      }
      const RasterDomain d = load_domain(sym_domain);
      const RasterDomain out = steiner_symmetrize(d, theta);
      const double t0 = torsion(d, scfg).functional_value;
      const double t1 = torsion(out, scfg).functional_value;
      const double l0 = eigen1(d, scfg).functional_value;
      const double l1 = eigen1(out, scfg).functional_value;
      std::printf("measure: %.9g -> %.9g\n", d.measure(), out.measure());
      std::printf("torsion: %.9g -> %.9g\n", t0, t1);
      std::printf("lambda:  %.9g -> %.9g\n", l0, l1);
      if (!sym_out.empty()) write_mask(out, sym_out);
      if (!sym_svg.empty()) write_svg(out, sym_svg);
      if (t1 < t0 * (1.0 - slack)) gate.flag("symmetrization lowered the torsion");
      if (l1 > l0 * (1.0 + slack)) gate.flag("symmetrization raised the eigenvalue");
      if (std::abs(out.measure() - d.measure()) > 0.01 * d.measure())
        gate.flag("symmetrization moved the measure by more than 1%");
      return gate.exit_code();
    }

    if (app.got_subcommand(c_rt)) {
      config.fallback(o_rt_stop, "stop-tol", rt_stop);
      config.fallback(o_rt_cycles, "max-cycles", rt_cycles);
      const RasterDomain d = load_domain(rt_domain);
      DirectionSchedule schedule = DirectionSchedule::eighth_turns();
      if (!rt_angles_text.empty()) {
        schedule.angles.clear();
        for (const std::string& a : split(rt_angles_text, ','))
          schedule.angles.push_back(parse_angle(a));
      }
      const RoundToBallResult r = round_to_ball(d, schedule, rt_stop, rt_cycles, scfg);
      for (std::size_t k = 0; k < r.trace.samples.size(); ++k) {
        print_sample_line(r.trace.samples[k]);
        if (k < r.symdiff_ratio.size())
          std::printf("  symdiff_to_ball=%.6f\n", r.symdiff_ratio[k]);
      }
      std::printf("converged=%d cycles=%d final_symdiff=%.6f\n", r.converged, r.cycles,
                  r.symdiff_ratio.empty() ? 0.0 : r.symdiff_ratio.back());
      if (!rt_out.empty()) write_trace_csv(r.trace, rt_out);
      if (!rt_json.empty()) write_trace_json(r.trace, rt_json);
      if (!rt_final.empty()) write_mask(r.final_domain, rt_final);
      if (!rt_ball.empty()) write_mask(r.ball, rt_ball);
      const int solver_rc = gate_trace(r.trace, slack, gate);
      if (solver_rc) return solver_rc;
      if (!r.converged) gate.flag("did not reach the symmetric-difference target");
      return gate.exit_code();
    }

    if (app.got_subcommand(c_rep)) {
      config.fallback(o_rep_order, "order", rep_order);
      config.fallback(o_rep_samples, "samples", rep_samples);
      const RasterDomain minus = load_domain(rep_minus);
      const RasterDomain plus = load_domain(rep_plus);
      int order = rep_order;
      if (order == 0) {
        order = 1;
        while ((1 << order) < std::max(minus.nx(), minus.ny()) + 1) ++order;
      }
      std::optional<PinVertex> anchor;
      if (!rep_anchor_text.empty()) {
        const auto parts = split(rep_anchor_text, ',');
        if (parts.size() != 2) throw std::invalid_argument("anchor must be i,j");
        anchor = PinVertex{std::stoi(parts[0]), std::stoi(parts[1])};
      }
      const RepairResult r = repair_path(minus, plus, order, rep_samples, scfg, anchor);
      for (const FlowSample& s : r.trace.samples) print_sample_line(s);
      std::printf("order=%d max_increment=%.9g torsion: %.9g -> %.9g\n", order,
                  r.max_increment, r.trace.samples.front().torsion,
                  r.trace.samples.back().torsion);
      if (!rep_out.empty()) write_trace_csv(r.trace, rep_out);
      if (!rep_json.empty()) write_trace_json(r.trace, rep_json);
      const int solver_rc = gate_trace(r.trace, slack, gate);
      if (solver_rc) return solver_rc;
      return gate.exit_code();
    }

    if (app.got_subcommand(c_mm)) {
      config.fallback(o_mm_fun, "functional", mm_functional);
      config.fallback(o_mm_eps, "epsilon", mmc.epsilon);
      config.fallback(o_mm_steps, "steps", mmc.n_steps);
      config.fallback(o_mm_budget, "budget", mmc.swap_budget);
      config.fallback(o_mm_search, "search", mm_search);
      config.fallback(o_mm_seed, "seed", mmc.seed);
      const RasterDomain d = load_domain(mm_domain);
      Functional f;
      if (mm_functional == "lambda") {
        f = Functional::lambda1();
      } else if (mm_functional == "neg-torsion") {
        f = Functional::neg_torsion();
      } else if (mm_functional == "perimeter") {
        f = Functional::perim();
      } else if (mm_functional.rfind("combo:", 0) == 0) {
        const auto w = split(mm_functional.substr(6), ',');
        if (w.size() != 3) throw std::invalid_argument("combo needs three weights");
        f = Functional::combo(parse_number(w[0]), parse_number(w[1]), parse_number(w[2]));
      } else {
        throw std::invalid_argument("unknown functional '" + mm_functional + "'");
      }
      if (mm_search == "greedy") {
        mmc.search = MinMovConfig::Search::greedy;
      } else if (mm_search == "annealing") {
        mmc.search = MinMovConfig::Search::annealing;
      } else {
        throw std::invalid_argument("unknown search '" + mm_search + "'");
      }
      const MinMovResult r = minmov_trajectory(d, f, mmc, scfg);
      for (std::size_t k = 0; k < r.f_values.size(); ++k)
        std::printf("step=%zu F=%.12g\n", k, r.f_values[k]);
      std::printf("max_f_increase=%.3e\n", r.max_f_increase);
      if (!mm_out.empty()) write_trace_csv(r.trace, mm_out);
      if (!mm_json.empty()) write_trace_json(r.trace, mm_json);
      if (!mm_masks_prefix.empty())
        for (std::size_t k = 0; k < r.masks.size(); ++k)
          write_mask(domain_from_stored_mask(d, r.masks[k]),
                     mm_masks_prefix + std::to_string(k) + ".txt");
      const int solver_rc = gate_trace(r.trace, slack, gate);
      if (solver_rc) return solver_rc;
      if (r.max_f_increase > 0.0) gate.flag("functional increased along the trajectory");
      return gate.exit_code();
    }

    if (app.got_subcommand(c_gd)) {
      const RasterDomain a = load_domain(gd_a);
      const RasterDomain b = load_domain(gd_b);
      std::printf("gamma_dist = %.12g\n", gamma_dist(a, b, scfg));
      return 0;
    }
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver failure: %s (residual %.3e)\n", e.what(), e.residual());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}
