#include "shapeflow/minmov.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "shapeflow/shapes.hpp"

namespace shapeflow {

namespace {

struct CellRef {
  int i, j;
};

bool boundary_cell(const RasterDomain& d, int i, int j) {
  return d.masked(i, j) && (!d.masked(i + 1, j) || !d.masked(i - 1, j) ||
                            !d.masked(i, j + 1) || !d.masked(i, j - 1));
}

int masked_neighbors(const RasterDomain& d, int i, int j) {
  return (d.masked(i + 1, j) ? 1 : 0) + (d.masked(i - 1, j) ? 1 : 0) +
         (d.masked(i, j + 1) ? 1 : 0) + (d.masked(i, j - 1) ? 1 : 0);
}

// Addable cell must keep contact with the mask once `skip` is removed.
bool addable_without(const RasterDomain& d, int ai, int aj, int ri, int rj) {
  static const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (auto& o : off) {
    const int ni = ai + o[0], nj = aj + o[1];
    if ((ni != ri || nj != rj) && d.masked(ni, nj)) return true;
  }
  return false;
}

struct Ranked {
  double key;
  CellRef cell;
};

void sort_ranked(std::vector<Ranked>& v) {
  std::sort(v.begin(), v.end(), [](const Ranked& a, const Ranked& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.cell.j != b.cell.j) return a.cell.j < b.cell.j;
    return a.cell.i < b.cell.i;
  });
}

// Candidate lists with the heuristic ranking keys for the given functional.
void build_candidates(const RasterDomain& d, const Functional& f, const SolverConfig& cfg,
                      std::vector<Ranked>& removable, std::vector<Ranked>& addable) {
  removable.clear();
  addable.clear();
  std::vector<double> field;
  const bool use_torsion = f.kind == ShapeFunctional::neg_torsion ||
                           (f.kind == ShapeFunctional::combination && f.w_neg_torsion > 0);
  const bool use_eigen = !use_torsion && (f.kind == ShapeFunctional::lambda1 ||
                                          (f.kind == ShapeFunctional::combination && f.w_lambda > 0));
  if (use_torsion) field = torsion(d, cfg).values;
  else if (use_eigen) field = eigen1(d, cfg).values;

  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      if (boundary_cell(d, i, j)) {
        double key;
        if (!field.empty()) key = field[d.idx(i, j)];  // drop where the field is weakest
        else key = 2.0 * masked_neighbors(d, i, j) - 4.0;  // perimeter delta of removal
        removable.push_back({key, {i, j}});
      } else if (!d.masked(i, j) && masked_neighbors(d, i, j) > 0) {
        double key;
        if (!field.empty()) {
          double best = 0.0;
          static const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
          for (auto& o : off)
            if (d.masked(i + o[0], j + o[1]))
              best = std::max(best, field[d.idx(i + o[0], j + o[1])]);
          key = -best;  // grow where the field is strongest
        } else {
          key = 4.0 - 2.0 * masked_neighbors(d, i, j);  // perimeter delta of addition
        }
        addable.push_back({key, {i, j}});
      }
    }
  sort_ranked(removable);
  sort_ranked(addable);
}

double penalty(const RasterDomain& d, const RasterDomain& anchor, double epsilon) {
  const double sd = symm_difference_measure(d, anchor);
  return sd * sd / (2.0 * epsilon);
}

RasterDomain swapped(const RasterDomain& d, const CellRef& rem, const CellRef& add) {
  RasterDomain out = d;
  out.set_cell(rem.i, rem.j, false);
  out.set_cell(add.i, add.j, true);
  return out;
}

RasterDomain step_greedy(const RasterDomain& cur, const Functional& f,
                         const MinMovConfig& mmc, const SolverConfig& cfg) {
  RasterDomain work = cur;
  double obj_work = f.evaluate(work, cfg);  // zero penalty at the anchor
  long evals = 1;
  std::vector<Ranked> removable, addable;
  bool improved = true;
  while (improved && evals < mmc.swap_budget) {
    improved = false;
    build_candidates(work, f, cfg, removable, addable);
    // Walk pairs by combined rank so the most promising swaps go first.
    struct Pair {
      std::size_t r, a;
    };
    std::vector<Pair> pairs;
    for (std::size_t r = 0; r < removable.size(); ++r)
      for (std::size_t a = 0; a < addable.size(); ++a) pairs.push_back({r, a});
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) {
      const std::size_t sx = x.r + x.a, sy = y.r + y.a;
      if (sx != sy) return sx < sy;
      if (x.r != y.r) return x.r < y.r;
      return x.a < y.a;
    });
    double best_obj = obj_work;
    RasterDomain best_dom;
    bool has_best = false;
    for (const Pair& pr : pairs) {
      if (evals >= mmc.swap_budget) break;
      const CellRef rem = removable[pr.r].cell;
      const CellRef add = addable[pr.a].cell;
      if (work.cell_count() <= 1) break;
      if (!addable_without(work, add.i, add.j, rem.i, rem.j)) continue;
      RasterDomain cand = swapped(work, rem, add);
      const double obj = f.evaluate(cand, cfg) + penalty(cand, cur, mmc.epsilon);
      ++evals;
      if (obj < best_obj) {
        best_obj = obj;
        best_dom = std::move(cand);
        has_best = true;
      }
    }
    if (has_best) {
      work = std::move(best_dom);
      obj_work = best_obj;
      improved = true;
    }
  }
  return work;
}

RasterDomain step_anneal(const RasterDomain& cur, const Functional& f,
                         const MinMovConfig& mmc, const SolverConfig& cfg) {
  std::mt19937_64 rng(mmc.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  RasterDomain work = cur;
  const double f0 = f.evaluate(cur, cfg);
  double obj_work = f0;
  RasterDomain best = cur;
  double obj_best = obj_work;
  const double scale = std::max(std::abs(f0), 1e-12);
  std::vector<Ranked> removable, addable;
  for (int it = 0; it < mmc.swap_budget; ++it) {
    build_candidates(work, f, cfg, removable, addable);
    if (removable.empty() || addable.empty() || work.cell_count() <= 1) break;
    const CellRef rem = removable[rng() % removable.size()].cell;
    const CellRef add = addable[rng() % addable.size()].cell;
    if (!addable_without(work, add.i, add.j, rem.i, rem.j)) continue;
    RasterDomain cand = swapped(work, rem, add);
    const double obj = f.evaluate(cand, cfg) + penalty(cand, cur, mmc.epsilon);
    const double temp = mmc.anneal_t0 * scale * std::pow(mmc.anneal_alpha, it);
    const double delta = obj - obj_work;
    if (delta < 0.0 || (temp > 0.0 && uni(rng) < std::exp(-delta / temp))) {
      work = std::move(cand);
      obj_work = obj;
      if (obj_work < obj_best) {
        obj_best = obj_work;
        best = work;
      }
    }
  }
  const double obj_anchor = f0;
  return obj_best < obj_anchor ? best : cur;
}

}  // namespace

Functional Functional::lambda1() {
  return {ShapeFunctional::lambda1, 1.0, 0.0, 0.0};
}
Functional Functional::neg_torsion() {
  return {ShapeFunctional::neg_torsion, 0.0, 1.0, 0.0};
}
Functional Functional::perim() {
  return {ShapeFunctional::perimeter, 0.0, 0.0, 1.0};
}
Functional Functional::combo(double wl, double wt, double wp) {
  if (wl < 0.0 || wt < 0.0 || wp < 0.0)
    throw std::invalid_argument("combination weights must be nonnegative");
  if (std::abs(wl + wt + wp - 1.0) > 1e-12)
    throw std::invalid_argument("combination weights must sum to one");
  return {ShapeFunctional::combination, wl, wt, wp};
}

double Functional::evaluate(const RasterDomain& d, const SolverConfig& cfg) const {
  switch (kind) {
    case ShapeFunctional::lambda1:
      return eigen1(d, cfg).functional_value;
    case ShapeFunctional::neg_torsion:
      return -torsion(d, cfg).functional_value;
    case ShapeFunctional::perimeter:
      return perimeter(d);
    case ShapeFunctional::combination: {
      double v = 0.0;
      if (w_lambda != 0.0) v += w_lambda * eigen1(d, cfg).functional_value;
      if (w_neg_torsion != 0.0) v -= w_neg_torsion * torsion(d, cfg).functional_value;
      if (w_perimeter != 0.0) v += w_perimeter * perimeter(d);
      return v;
    }
  }
  throw std::logic_error("unknown functional kind");
}

double mm_objective(const RasterDomain& d, const RasterDomain& anchor, const Functional& f,
                    double epsilon, const SolverConfig& cfg) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (d.cell_count() != anchor.cell_count())
    throw std::invalid_argument("volume mismatch against the anchor");
  return f.evaluate(d, cfg) + penalty(d, anchor, epsilon);
}

RasterDomain minmov_step(const RasterDomain& cur, const Functional& f,
                         const MinMovConfig& mmc, const SolverConfig& cfg) {
  if (!(mmc.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (mmc.swap_budget < 1) throw std::invalid_argument("swap budget must be positive");
  if (!cur.cracks().empty() || !cur.pins().empty())
    throw std::invalid_argument("movement scheme expects a plain mask");
  return mmc.search == MinMovConfig::Search::greedy ? step_greedy(cur, f, mmc, cfg)
                                                    : step_anneal(cur, f, mmc, cfg);
}

MinMovResult minmov_trajectory(const RasterDomain& omega0, const Functional& f,
                               const MinMovConfig& mmc, const SolverConfig& cfg) {
  if (mmc.n_steps < 0) throw std::invalid_argument("step count must be nonnegative");
  MinMovResult out;
  const RasterDomain ball = matched_disk(omega0);
  std::vector<double> ball_field = torsion(ball, cfg).values;

  RasterDomain cur = omega0;
  MinMovConfig step_cfg = mmc;
  auto record = [&](int k) {
    const double tau = mmc.n_steps > 0 ? static_cast<double>(k) / mmc.n_steps : 0.0;
    out.trace.samples.push_back(
        evaluate_sample(cur, tau, cfg, &ball_field, out.trace.warning));
    out.f_values.push_back(f.evaluate(cur, cfg));
    out.masks.push_back(cur.mask());
  };
  record(0);
  for (int k = 1; k <= mmc.n_steps; ++k) {
    step_cfg.seed = mmc.seed + static_cast<std::uint64_t>(k);  // fresh stream per step
    cur = minmov_step(cur, f, step_cfg, cfg);
    record(k);
  }
  out.final_domain = cur;
  for (std::size_t k = 1; k < out.f_values.size(); ++k)
    out.max_f_increase = std::max(out.max_f_increase, out.f_values[k] - out.f_values[k - 1]);
  return out;
}

}  // namespace shapeflow
