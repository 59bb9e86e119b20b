#pragma once

// Dense tensor-index kernels behind the public state and measurement API.
// The top-level functions are OpenMP-parallel over output rows; the versions
// in `serial` are straightforward reference implementations kept for tests
// and benchmarks.

#include <span>
#include <vector>

#include "qdiscord/qstate.hpp"

namespace qdiscord::kernels {

/// Mixed-radix view of a composite index over subsystem dimensions.
class IndexLayout {
 public:
  explicit IndexLayout(std::span<const int> dims);

  int total() const { return total_; }
  int size() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_[k]; }
  int stride(int k) const { return strides_[k]; }
  int digit(int index, int k) const { return (index / strides_[k]) % dims_[k]; }

  /// Local index of the digits at `positions` (first position most significant).
  int gather(int index, std::span<const int> positions) const;
  /// Index with the digits at `positions` replaced by the digits of `local`.
  int scatter(int index, std::span<const int> positions, int local) const;

 private:
  std::vector<int> dims_;
  std::vector<int> strides_;
  int total_ = 1;
};

/// Trace over every subsystem not listed in `keep` (sorted ascending).
Matrix partial_trace(const Matrix& rho, std::span<const int> dims, std::span<const int> keep);

/// Output subsystem i is input subsystem order[i].
Matrix permute(const Matrix& rho, std::span<const int> dims, std::span<const int> order);

/// sum_j (P_j (x) I) rho (P_j (x) I) with P_j = W|j><j|W^dagger acting on the
/// composite of `targets` (in the given order). W is a unitary of side
/// prod(dims[targets]).
Matrix dephase(const Matrix& rho, std::span<const int> dims, std::span<const int> targets,
               const Matrix& w);

namespace serial {

Matrix partial_trace(const Matrix& rho, std::span<const int> dims, std::span<const int> keep);
Matrix permute(const Matrix& rho, std::span<const int> dims, std::span<const int> order);
/// Builds every full-space projector explicitly and sums P rho P.
Matrix dephase(const Matrix& rho, std::span<const int> dims, std::span<const int> targets,
               const Matrix& w);

}  // namespace serial

}  // namespace qdiscord::kernels
