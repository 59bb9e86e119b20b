#include <numeric>

#include "helpers.hpp"
#include "qdiscord/kernels.hpp"

using namespace qdiscord;
using testing::max_abs_diff;

TEST_SUITE("kernels") {

TEST_CASE("index layout") {
  const std::vector<int> dims{2, 3, 2};
  kernels::IndexLayout layout(dims);
  CHECK(layout.total() == 12);
  CHECK(layout.stride(0) == 6);
  CHECK(layout.digit(11, 1) == 2);
  const std::vector<int> pos{2, 0};
  CHECK(layout.gather(7, pos) == 3);  // digits (1,0,1): C=1, A=1 -> 1*2+1
  CHECK(layout.scatter(0, pos, 3) == 7);
}

TEST_CASE("parallel kernels agree with the serial reference") {
  const std::vector<std::vector<int>> shapes{{2, 2, 2}, {2, 3, 2}, {3, 2}, {2, 2, 2, 2}};
  std::uint64_t seed = 100;
  for (const auto& dims : shapes) {
    const int n = static_cast<int>(dims.size());
    const auto rho = sample_random_state(dims, 3, ++seed).data();
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> keep;
      for (int k = 0; k < n; ++k)
        if (mask & (1 << k)) keep.push_back(k);
      CHECK(max_abs_diff(kernels::partial_trace(rho, dims, keep), kernels::serial::partial_trace(rho, dims, keep)) <
            1e-13);
      int d = 1;
      for (int k : keep) d *= dims[k];
      std::vector<int> targets(keep.rbegin(), keep.rend());
      const Matrix w = random_unitary(d, ++seed);
      CHECK(max_abs_diff(kernels::dephase(rho, dims, targets, w), kernels::serial::dephase(rho, dims, targets, w)) <
            1e-13);
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    do {
      CHECK(max_abs_diff(kernels::permute(rho, dims, order), kernels::serial::permute(rho, dims, order)) < 1e-15);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("dephasing in the computational basis keeps the diagonal") {
  const std::vector<int> dims{2, 2};
  const auto rho = sample_random_state(dims, 4, 3).data();
  const std::vector<int> both{0, 1};
  const Matrix out = kernels::dephase(rho, dims, both, Matrix::Identity(4, 4));
  CHECK(max_abs_diff(out, Matrix(rho.diagonal().asDiagonal())) < 1e-15);
}

}
