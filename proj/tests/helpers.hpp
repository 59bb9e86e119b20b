#pragma once

#include "doctest.h"
#include "qdiscord/optimizer.hpp"
#include "qdiscord/qstate.hpp"

namespace testing {

// Enough for qubit states with an exact grid stage; keeps unit tests quick.
inline qdiscord::OptimizerConfig quick_config(std::uint64_t seed = 1) {
  qdiscord::OptimizerConfig cfg;
  cfg.restarts = 4;
  cfg.seed = seed;
  return cfg;
}

inline double max_abs_diff(const qdiscord::Matrix& a, const qdiscord::Matrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  return (a - b).cwiseAbs().maxCoeff();
}

inline qdiscord::Vector basis_ket(int dim, int i) {
  qdiscord::Vector v = qdiscord::Vector::Zero(dim);
  v(i) = 1.0;
  return v;
}

}  // namespace testing
