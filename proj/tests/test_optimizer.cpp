#include <cmath>
#include <numbers>

#include <omp.h>

#include "helpers.hpp"

using namespace qdiscord;

TEST_SUITE("optimizer") {

TEST_CASE("config validation") {
  OptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.restarts = -1;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.f_tol = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.grid_points_per_angle = 1;
  CHECK_THROWS(cfg.validate());
}

TEST_CASE("grid coordinates") {
  CHECK(grid_theta(0, 13) == 0.0);
  CHECK(grid_theta(12, 13) == doctest::Approx(std::numbers::pi / 2));
  CHECK(grid_phi(3, 12) == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("quadratic bowl") {
  Problem p;
  p.dim = 3;
  p.objective = [](std::span<const double> x) {
    return (x[0] - 1) * (x[0] - 1) + 2 * (x[1] + 0.5) * (x[1] + 0.5) + (x[2] - 3) * (x[2] - 3) + 0.25;
  };
  const auto r = minimize(p, testing::quick_config());
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(r.params[0] == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.params[1] == doctest::Approx(-0.5).epsilon(1e-3));
  CHECK_FALSE(r.certified);  // no grid stage
  CHECK(r.evaluations > 0);
}

TEST_CASE("qubit grid finds the minimum of a periodic function") {
  Problem p;
  p.dim = 2;
  p.qubit_angles = true;
  p.objective = [](std::span<const double> x) { return std::cos(2 * x[0]) + 0.1 * std::cos(x[1]); };
  const auto g = qubit_tensor_grid(p.objective, 2, testing::quick_config());
  CHECK(g.certified);
  CHECK(g.evaluations == 13 * 13);
  const auto r = minimize(p, testing::quick_config());
  CHECK(r.certified);
  CHECK(r.value == doctest::Approx(-1.1).epsilon(1e-7));
}

TEST_CASE("thinned grid loses its certificate") {
  OptimizerConfig cfg = testing::quick_config();
  cfg.max_grid_evals = 1000;
  const Objective f = [](std::span<const double> x) { return std::sin(x[0]) * std::sin(x[2]); };
  const auto g = qubit_tensor_grid(f, 4, cfg);
  CHECK_FALSE(g.certified);
  CHECK(g.evaluations <= 1000);
  CHECK(g.points_per_angle < 13);
}

TEST_CASE("results do not depend on the thread count") {
  Problem p;
  p.dim = 4;
  p.qubit_angles = true;
  p.objective = [](std::span<const double> x) {
    return std::sin(x[0] + 0.3) * std::cos(x[1]) + std::sin(3 * x[2]) * std::cos(x[3] - 1) + 0.1 * x[0];
  };
  const int before = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto a = minimize(p, testing::quick_config(7));
  omp_set_num_threads(4);
  const auto b = minimize(p, testing::quick_config(7));
  omp_set_num_threads(before);
  CHECK(a.value == b.value);
  CHECK(a.params == b.params);
  CHECK(a.restart_index == b.restart_index);
}

TEST_CASE("non-finite objective values are survivable") {
  Problem p;
  p.dim = 1;
  p.objective = [](std::span<const double> x) { return x[0] < 0 ? std::nan("") : (x[0] - 1) * (x[0] - 1); };
  const auto r = minimize(p, testing::quick_config());
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-6));
}

}
