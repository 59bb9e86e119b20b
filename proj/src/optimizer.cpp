#include "qdiscord/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qdiscord/qstate.hpp"

namespace qdiscord {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw ArgumentError("optimizer: restarts must be >= 1");
  if (!(f_tol > 0)) throw ArgumentError("optimizer: f_tol must be positive");
  if (max_iters < 1) throw ArgumentError("optimizer: max_iters must be >= 1");
  if (grid_points_per_angle < 0 || grid_points_per_angle == 1)
    throw ArgumentError("optimizer: grid_points_per_angle must be 0 (off) or >= 2");
  if (max_grid_evals < 0) throw ArgumentError("optimizer: max_grid_evals must be >= 0");
}

double grid_theta(int i, int m) { return std::numbers::pi / 2 * i / (m - 1); }
double grid_phi(int i, int m) { return 2 * std::numbers::pi * i / m; }

namespace {

constexpr double kPenalty = 1e300;

double safe_eval(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > std::numeric_limits<long>::max() / std::max(base, 1L)) return std::numeric_limits<long>::max();
    r *= base;
  }
  return r;
}

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  long index = std::numeric_limits<long>::max();
};

bool better(const Candidate& a, const Candidate& b) {
  return a.value < b.value || (a.value == b.value && a.index < b.index);
}

struct GslContext {
  const Objective* f;
  std::vector<double> scratch;
  long calls = 0;
};

double gsl_trampoline(const gsl_vector* x, void* raw) {
  auto* ctx = static_cast<GslContext*>(raw);
  ++ctx->calls;
  for (std::size_t i = 0; i < ctx->scratch.size(); ++i) ctx->scratch[i] = gsl_vector_get(x, i);
  const double v = (*ctx->f)(ctx->scratch);
  return std::isfinite(v) ? v : kPenalty;
}

struct LocalRun {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> params;
  int iterations = 0;
  long evaluations = 0;
};

// Nelder-Mead with a fresh simplex at the incumbent whenever the previous one
// collapses, until a rebuild stops paying more than f_tol.
LocalRun simplex_descent(const Objective& f, std::vector<double> start, double step, const OptimizerConfig& cfg) {
  const std::size_t n = start.size();
  LocalRun run;
  run.params = start;
  run.value = safe_eval(f, start);
  run.evaluations = 1;
  if (n == 0) return run;

  GslContext ctx{&f, std::vector<double>(n)};
  gsl_multimin_function fn{&gsl_trampoline, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* steps = gsl_vector_alloc(n);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);

  for (int rebuild = 0; rebuild < 4 && run.iterations < cfg.max_iters; ++rebuild) {
    for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, run.params[i]);
    gsl_vector_set_all(steps, step);
    if (gsl_multimin_fminimizer_set(s, &fn, x, steps) != GSL_SUCCESS) break;
    const double before = run.value;
    while (run.iterations < cfg.max_iters) {
      ++run.iterations;
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_fminimizer_size(s) < 1e-7) break;
    }
    const double found = gsl_multimin_fminimizer_minimum(s);
    if (found < run.value) {
      run.value = found;
      for (std::size_t i = 0; i < n; ++i) run.params[i] = gsl_vector_get(s->x, i);
    }
    if (before - run.value <= cfg.f_tol) break;
    step = std::max(step * 0.25, 1e-3);
  }
  run.evaluations += ctx.calls;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(steps);
  gsl_vector_free(x);
  // Report the objective at the returned point, not the simplex's cached copy.
  run.value = safe_eval(f, run.params);
  return run;
}

}  // namespace

GridOutcome qubit_tensor_grid(const Objective& f, int dim, const OptimizerConfig& cfg) {
  GridOutcome out;
  if (dim % 2 != 0) throw ArgumentError("qubit grid needs (theta, phi) pairs");
  int m = cfg.grid_points_per_angle;
  if (m < 2 || dim == 0) return out;
  out.certified = true;
  while (m > 2 && ipow(m, dim) > cfg.max_grid_evals) {
    --m;
    out.certified = false;
  }
  if (ipow(m, dim) > cfg.max_grid_evals) return GridOutcome{};
  out.points_per_angle = m;
  const long total = ipow(m, dim);

  Candidate best;
#pragma omp parallel
  {
    Candidate local;
    std::vector<double> x(dim);
#pragma omp for schedule(static)
    for (long idx = 0; idx < total; ++idx) {
      long rest = idx;
      for (int k = dim - 1; k >= 0; --k) {
        const int digit = static_cast<int>(rest % m);
        rest /= m;
        x[k] = (k % 2 == 0) ? grid_theta(digit, m) : grid_phi(digit, m);
      }
      const Candidate c{safe_eval(f, x), idx};
      if (better(c, local)) local = c;
    }
#pragma omp critical(qdiscord_grid_reduce)
    if (better(local, best)) best = local;
  }
  out.evaluations = total;
  out.value = best.value;
  out.params.resize(dim);
  long rest = best.index;
  for (int k = dim - 1; k >= 0; --k) {
    const int digit = static_cast<int>(rest % m);
    rest /= m;
    out.params[k] = (k % 2 == 0) ? grid_theta(digit, m) : grid_phi(digit, m);
  }
  return out;
}

OptResult minimize(const Problem& problem, const OptimizerConfig& cfg) {
  cfg.validate();
  if (!problem.objective) throw ArgumentError("minimize: no objective");
  if (problem.dim < 0) throw ArgumentError("minimize: negative dimension");
  gsl_set_error_handler_off();

  const int n = problem.dim;
  OptResult result;
  if (n == 0) {
    result.value = safe_eval(problem.objective, {});
    result.certified = true;
    result.evaluations = 1;
    return result;
  }

  GridOutcome grid;
  bool have_grid = false;
  if (problem.grid) {
    grid = problem.grid(cfg);
    have_grid = !grid.params.empty();
  } else if (problem.qubit_angles) {
    grid = qubit_tensor_grid(problem.objective, n, cfg);
    have_grid = !grid.params.empty();
  }
  double grid_step = 0.3;
  if (have_grid && grid.points_per_angle > 2) grid_step = std::numbers::pi / 2 / (grid.points_per_angle - 1);

  std::vector<LocalRun> runs(cfg.restarts);
#pragma omp parallel for schedule(dynamic, 1)
  for (int r = 0; r < cfg.restarts; ++r) {
    std::vector<double> start(n);
    double step = 0.3;
    if (r == 0 && have_grid) {
      start = grid.params;
      step = grid_step;
    } else {
      std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(r), std::uint64_t{0x51ed}};
      std::mt19937_64 gen(seq);
      std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
      for (double& v : start) v = angle(gen);
    }
    runs[r] = simplex_descent(problem.objective, std::move(start), step, cfg);
  }

  // Ordered reduction: lowest value, ties to the lowest restart index.
  result.value = std::numeric_limits<double>::infinity();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int r = 0; r < cfg.restarts; ++r) {
    result.evaluations += runs[r].evaluations;
    lo = std::min(lo, runs[r].value);
    hi = std::max(hi, runs[r].value);
    if (runs[r].value < result.value) {
      result.value = runs[r].value;
      result.params = runs[r].params;
      result.iterations = runs[r].iterations;
      result.restart_index = r;
    }
  }
  result.spread = std::isfinite(hi - lo) ? hi - lo : 0.0;
  if (have_grid) {
    result.evaluations += grid.evaluations;
    result.certified = grid.certified;
    result.grid_points_used = grid.points_per_angle;
    if (grid.value < result.value) {
      result.value = grid.value;
      result.params = grid.params;
      result.iterations = 0;
      result.restart_index = -1;
    }
  }
  return result;
}

}  // namespace qdiscord
