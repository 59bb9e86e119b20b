#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qdiscord {

struct OptimizerConfig {
  int restarts = 24;
  int grid_points_per_angle = 13;
  int max_iters = 2000;
  double f_tol = 1e-7;
  std::uint64_t seed = 0;
  // Upper bound on objective evaluations in the exhaustive grid stage. A grid
  // that would exceed it is thinned and the result loses its certificate.
  long max_grid_evals = 200000;

  void validate() const;
};

struct OptResult {
  double value = 0.0;
  std::vector<double> params;
  int iterations = 0;
  int restart_index = -1;  // -1: the grid point itself won
  double spread = 0.0;     // max - min over restart optima
  bool certified = false;  // full grid at the configured resolution was evaluated
  long evaluations = 0;
  int grid_points_used = 0;
};

using Objective = std::function<double(std::span<const double>)>;

struct GridOutcome {
  double value = 0.0;
  std::vector<double> params;
  bool certified = false;
  long evaluations = 0;
  int points_per_angle = 0;
};

struct Problem {
  int dim = 0;
  Objective objective;
  // All parameters are (theta, phi) pairs of qubit bases; enables the tensor grid.
  bool qubit_angles = false;
  // Replaces the tensor grid (e.g. the nested grid for measurement trees).
  std::function<GridOutcome(const OptimizerConfig&)> grid;
};

/// Qubit grid coordinates: theta_i = (pi/2) i/(m-1), phi_i = 2 pi i/m.
double grid_theta(int i, int m);
double grid_phi(int i, int m);

/// Exhaustive tensor grid over qubit (theta, phi) pairs.
GridOutcome qubit_tensor_grid(const Objective& f, int dim, const OptimizerConfig& cfg);

/// Grid stage (when available) followed by `restarts` simplex descents:
/// restart 0 from the grid optimum, the rest from seeded random points.
/// Deterministic for a fixed config regardless of thread count.
OptResult minimize(const Problem& problem, const OptimizerConfig& cfg);

}  // namespace qdiscord
