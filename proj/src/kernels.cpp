#include "qdiscord/kernels.hpp"

#include <algorithm>
#include <numeric>

namespace qdiscord::kernels {

IndexLayout::IndexLayout(std::span<const int> dims)
    : dims_(dims.begin(), dims.end()), strides_(dims.size(), 1) {
  for (int k = size() - 1, s = 1; k >= 0; --k) {
    strides_[k] = s;
    s *= dims_[k];
  }
  total_ = std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

int IndexLayout::gather(int index, std::span<const int> positions) const {
  int local = 0;
  for (int p : positions) local = local * dims_[p] + digit(index, p);
  return local;
}

int IndexLayout::scatter(int index, std::span<const int> positions, int local) const {
  for (auto it = positions.rbegin(); it != positions.rend(); ++it) {
    const int p = *it;
    const int d = local % dims_[p];
    local /= dims_[p];
    index += (d - digit(index, p)) * strides_[p];
  }
  return index;
}

namespace {

std::vector<int> complement(int n, std::span<const int> keep) {
  std::vector<int> rest;
  for (int k = 0; k < n; ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) rest.push_back(k);
  return rest;
}

int product_of(const IndexLayout& layout, std::span<const int> positions) {
  int d = 1;
  for (int p : positions) d *= layout.dim(p);
  return d;
}

}  // namespace

Matrix partial_trace(const Matrix& rho, std::span<const int> dims, std::span<const int> keep) {
  const IndexLayout layout(dims);
  const std::vector<int> rest = complement(layout.size(), keep);
  const int dk = product_of(layout, keep);
  const int de = product_of(layout, rest);

  // Full index of (kept local index, environment local index).
  std::vector<int> base_keep(dk), base_env(de);
  for (int a = 0; a < dk; ++a) base_keep[a] = layout.scatter(0, keep, a);
  for (int e = 0; e < de; ++e) base_env[e] = layout.scatter(0, rest, e);

  Matrix out(dk, dk);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < dk; ++a) {
    for (int b = 0; b < dk; ++b) {
      Complex acc = 0.0;
      for (int e = 0; e < de; ++e) acc += rho(base_keep[a] + base_env[e], base_keep[b] + base_env[e]);
      out(a, b) = acc;
    }
  }
  return out;
}

Matrix permute(const Matrix& rho, std::span<const int> dims, std::span<const int> order) {
  const IndexLayout in(dims);
  std::vector<int> out_dims(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) out_dims[i] = dims[order[i]];
  const IndexLayout out_layout(out_dims);

  // map[out index] = in index
  std::vector<int> map(in.total());
  for (int o = 0; o < in.total(); ++o) {
    int idx = 0;
    for (int i = 0; i < out_layout.size(); ++i) idx += out_layout.digit(o, i) * in.stride(order[i]);
    map[o] = idx;
  }
  Matrix out(in.total(), in.total());
#pragma omp parallel for schedule(static)
  for (int r = 0; r < in.total(); ++r)
    for (int c = 0; c < in.total(); ++c) out(r, c) = rho(map[r], map[c]);
  return out;
}

Matrix dephase(const Matrix& rho, std::span<const int> dims, std::span<const int> targets,
               const Matrix& w) {
  const IndexLayout layout(dims);
  const int n = layout.total();
  const int dt = product_of(layout, targets);

  std::vector<int> local(n);
  for (int i = 0; i < n; ++i) local[i] = layout.gather(i, targets);

  // tilde = (W^dagger (x) I) rho (W (x) I): apply W^dagger on rows, then W on columns.
  Matrix left(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    const int li = local[i];
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int a = 0; a < dt; ++a) acc += std::conj(w(a, li)) * rho(layout.scatter(i, targets, a), j);
      left(i, j) = acc;
    }
  }
  // Only entries whose target digits agree survive the dephasing.
  Matrix tilde = Matrix::Zero(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (local[i] != local[j]) continue;
      Complex acc = 0.0;
      for (int b = 0; b < dt; ++b) acc += left(i, layout.scatter(j, targets, b)) * w(b, local[j]);
      tilde(i, j) = acc;
    }
  }
  // Rotate back: (W (x) I) tilde (W^dagger (x) I).
  Matrix back(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int a = 0; a < dt; ++a) acc += w(local[i], a) * tilde(layout.scatter(i, targets, a), j);
      back(i, j) = acc;
    }
  }
  Matrix out(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Complex acc = 0.0;
      for (int b = 0; b < dt; ++b) acc += back(i, layout.scatter(j, targets, b)) * std::conj(w(local[j], b));
      out(i, j) = acc;
    }
  }
  return out;
}

namespace serial {

Matrix partial_trace(const Matrix& rho, std::span<const int> dims, std::span<const int> keep) {
  const IndexLayout layout(dims);
  const std::vector<int> rest = complement(layout.size(), keep);
  const int dk = product_of(layout, keep);
  Matrix out = Matrix::Zero(dk, dk);
  for (int i = 0; i < layout.total(); ++i) {
    for (int j = 0; j < layout.total(); ++j) {
      if (layout.gather(i, rest) != layout.gather(j, rest)) continue;
      out(layout.gather(i, keep), layout.gather(j, keep)) += rho(i, j);
    }
  }
  return out;
}

Matrix permute(const Matrix& rho, std::span<const int> dims, std::span<const int> order) {
  // Build the permutation operator and conjugate.
  const IndexLayout in(dims);
  std::vector<int> out_dims;
  for (int k : order) out_dims.push_back(dims[k]);
  const IndexLayout out_layout(out_dims);
  Matrix p = Matrix::Zero(in.total(), in.total());
  for (int i = 0; i < in.total(); ++i) {
    int o = 0;
    for (int k = 0; k < out_layout.size(); ++k) o = o * out_layout.dim(k) + in.digit(i, order[k]);
    p(o, i) = 1.0;
  }
  return p * rho * p.adjoint();
}

Matrix dephase(const Matrix& rho, std::span<const int> dims, std::span<const int> targets,
               const Matrix& w) {
  const IndexLayout layout(dims);
  const int n = layout.total();
  const int dt = product_of(layout, targets);
  Matrix out = Matrix::Zero(n, n);
  for (int j = 0; j < dt; ++j) {
    const Vector u = w.col(j);
    // Full projector (|u><u| on targets) (x) identity elsewhere.
    Matrix proj = Matrix::Zero(n, n);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        bool same_rest = true;
        for (int k = 0; k < layout.size() && same_rest; ++k) {
          if (std::find(targets.begin(), targets.end(), k) != targets.end()) continue;
          same_rest = layout.digit(r, k) == layout.digit(c, k);
        }
        if (!same_rest) continue;
        proj(r, c) = u(layout.gather(r, targets)) * std::conj(u(layout.gather(c, targets)));
      }
    }
    out += proj * rho * proj;
  }
  return out;
}

}  // namespace serial

}  // namespace qdiscord::kernels
