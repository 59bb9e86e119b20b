#include "qdiscord/measure.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "qdiscord/kernels.hpp"

namespace qdiscord {

Matrix basis_unitary(int d, std::span<const double> params) {
  if (d < 1) throw ArgumentError("basis_unitary: dimension must be positive");
  if (static_cast<int>(params.size()) != basis_param_count(d))
    throw ArgumentError("basis_unitary: expected " + std::to_string(basis_param_count(d)) + " angles, got " +
                        std::to_string(params.size()));
  Matrix u = Matrix::Identity(d, d);
  std::size_t k = 0;
  for (int p = 0; p + 1 < d; ++p) {
    for (int q = p + 1; q < d; ++q, k += 2) {
      const double c = std::cos(params[k]), s = std::sin(params[k]);
      const Complex e = std::polar(1.0, params[k + 1]);
      // u <- u * G_pq touches columns p and q only.
      for (int r = 0; r < d; ++r) {
        const Complex up = u(r, p), uq = u(r, q);
        u(r, p) = c * up + e * s * uq;
        u(r, q) = -std::conj(e) * s * up + c * uq;
      }
    }
  }
  return u;
}

ProjectiveBasis ProjectiveBasis::computational(Block target, int dim) {
  return {std::move(target), dim, std::vector<double>(basis_param_count(dim), 0.0)};
}

Matrix ProjectiveBasis::projector(int j) const {
  const Matrix u = unitary();
  return u.col(j) * u.col(j).adjoint();
}

namespace {

int product(std::span<const int> v, int count) {
  int p = 1;
  for (int i = 0; i < count; ++i) p *= v[i];
  return p;
}

}  // namespace

MeasurementTree::MeasurementTree(std::vector<Block> blocks, std::vector<int> block_dims,
                                 std::vector<std::vector<ProjectiveBasis>> levels)
    : blocks_(std::move(blocks)), block_dims_(std::move(block_dims)), levels_(std::move(levels)) {
  if (blocks_.size() != block_dims_.size()) throw ArgumentError("measurement tree: blocks and dims differ in length");
  if (levels_.size() > blocks_.size()) throw ArgumentError("measurement tree deeper than its block list");
  for (std::size_t t = 0; t < levels_.size(); ++t) {
    const int expected = product(block_dims_, static_cast<int>(t));
    if (static_cast<int>(levels_[t].size()) != expected)
      throw ArgumentError("measurement tree level " + std::to_string(t) + " has " + std::to_string(levels_[t].size()) +
                          " nodes, expected " + std::to_string(expected));
    for (const auto& node : levels_[t]) {
      if (node.target != blocks_[t] || node.dim != block_dims_[t])
        throw ArgumentError("measurement tree node does not match its level's block");
    }
  }
}

int MeasurementTree::param_count(std::span<const int> block_dims, int depth) {
  int total = 0;
  for (int t = 0; t < depth; ++t) total += product(block_dims, t) * basis_param_count(block_dims[t]);
  return total;
}

MeasurementTree MeasurementTree::from_params(std::vector<Block> blocks, std::vector<int> block_dims, int depth,
                                             std::span<const double> params) {
  if (depth < 0 || depth > static_cast<int>(blocks.size())) throw ArgumentError("measurement tree: bad depth");
  if (static_cast<int>(params.size()) != param_count(block_dims, depth))
    throw ArgumentError("measurement tree: wrong parameter count");
  std::vector<std::vector<ProjectiveBasis>> levels(depth);
  std::size_t offset = 0;
  for (int t = 0; t < depth; ++t) {
    const int nodes = product(block_dims, t);
    const int np = basis_param_count(block_dims[t]);
    for (int n = 0; n < nodes; ++n, offset += np)
      levels[t].push_back({blocks[t], block_dims[t], std::vector<double>(params.begin() + offset, params.begin() + offset + np)});
  }
  return MeasurementTree(std::move(blocks), std::move(block_dims), std::move(levels));
}

MeasurementTree MeasurementTree::computational(std::vector<Block> blocks, std::vector<int> block_dims, int depth) {
  const std::vector<double> zeros(param_count(block_dims, depth), 0.0);
  return from_params(std::move(blocks), std::move(block_dims), depth, zeros);
}

MeasurementTree MeasurementTree::unconditioned(std::vector<Block> blocks, std::vector<int> block_dims,
                                               const std::vector<std::vector<double>>& per_level) {
  std::vector<std::vector<ProjectiveBasis>> levels(per_level.size());
  for (std::size_t t = 0; t < per_level.size(); ++t) {
    if (t >= blocks.size()) throw ArgumentError("measurement tree deeper than its block list");
    const int nodes = product(block_dims, static_cast<int>(t));
    for (int n = 0; n < nodes; ++n) levels[t].push_back({blocks[t], block_dims[t], per_level[t]});
  }
  return MeasurementTree(std::move(blocks), std::move(block_dims), std::move(levels));
}

std::vector<double> MeasurementTree::params() const {
  std::vector<double> out;
  for (const auto& level : levels_)
    for (const auto& node : level) out.insert(out.end(), node.params.begin(), node.params.end());
  return out;
}

Matrix MeasurementTree::branch_unitary(int depth) const {
  if (depth < 0 || depth > this->depth()) throw ArgumentError("branch_unitary: depth out of range");
  // Columns are built level by level: w_{s,j} = w_s (x) u^{(t | s)}_j.
  Matrix w = Matrix::Ones(1, 1);
  for (int t = 0; t < depth; ++t) {
    const int d = block_dims_[t];
    const int prev = static_cast<int>(w.cols());
    Matrix next = Matrix::Zero(w.rows() * d, prev * d);
    for (int s = 0; s < prev; ++s) {
      const Matrix u = levels_[t][s].unitary();
      for (int j = 0; j < d; ++j)
        for (Eigen::Index r = 0; r < w.rows(); ++r) next.block(r * d, s * d + j, d, 1) = w(r, s) * u.col(j);
    }
    w = std::move(next);
  }
  return w;
}

ProductMeasurement ProductMeasurement::from_params(const Partition& blocks, std::span<const int> block_dims,
                                                   std::span<const double> params) {
  if (block_dims.size() != blocks.size()) throw ArgumentError("product measurement: dims do not match blocks");
  ProductMeasurement m;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const int np = basis_param_count(block_dims[k]);
    if (offset + np > params.size()) throw ArgumentError("product measurement: too few parameters");
    m.bases.push_back({blocks.block(k), block_dims[k], std::vector<double>(params.begin() + offset, params.begin() + offset + np)});
    offset += np;
  }
  if (offset != params.size()) throw ArgumentError("product measurement: too many parameters");
  return m;
}

std::vector<double> ProductMeasurement::params() const {
  std::vector<double> out;
  for (const auto& b : bases) out.insert(out.end(), b.params.begin(), b.params.end());
  return out;
}

std::vector<int> block_positions(const DensityMatrix& rho, const Block& block) {
  if (block.empty()) throw ArgumentError("empty block");
  std::vector<int> out;
  for (int label : block) out.push_back(rho.position_of(default_label_name(label)));
  return out;
}

int block_dim(const DensityMatrix& rho, const Block& block) {
  int d = 1;
  for (int p : block_positions(rho, block)) d *= rho.labels()[p].dim;
  return d;
}

namespace {

void require_disjoint(const std::vector<int>& positions) {
  std::vector<int> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ArgumentError("measured blocks overlap");
}

}  // namespace

DensityMatrix apply_basis(const DensityMatrix& rho, const ProjectiveBasis& basis) {
  const std::vector<int> targets = block_positions(rho, basis.target);
  require_disjoint(targets);
  if (block_dim(rho, basis.target) != basis.dim)
    throw ArgumentError("apply_basis: basis dimension does not match block " + block_to_string(basis.target));
  const std::vector<int> dims = rho.dims();
  return DensityMatrix::trusted(rho.labels(), kernels::dephase(rho.data(), dims, targets, basis.unitary()));
}

DensityMatrix apply_tree(const DensityMatrix& rho, const MeasurementTree& tree, int depth) {
  if (depth < 0 || depth > tree.depth())
    throw ArgumentError("apply_tree: depth " + std::to_string(depth) + " outside [0, " + std::to_string(tree.depth()) + "]");
  if (depth == 0) return rho;
  std::vector<int> targets;
  for (int t = 0; t < depth; ++t) {
    const auto pos = block_positions(rho, tree.blocks()[t]);
    if (block_dim(rho, tree.blocks()[t]) != tree.block_dims()[t])
      throw ArgumentError("apply_tree: block dimension mismatch for " + block_to_string(tree.blocks()[t]));
    targets.insert(targets.end(), pos.begin(), pos.end());
  }
  require_disjoint(targets);
  const std::vector<int> dims = rho.dims();
  return DensityMatrix::trusted(rho.labels(), kernels::dephase(rho.data(), dims, targets, tree.branch_unitary(depth)));
}

DensityMatrix apply_local(const DensityMatrix& rho, const std::vector<ProjectiveBasis>& bases) {
  if (bases.empty()) return rho;
  std::vector<int> targets;
  Matrix w = Matrix::Ones(1, 1);
  for (const auto& b : bases) {
    const auto pos = block_positions(rho, b.target);
    if (block_dim(rho, b.target) != b.dim)
      throw ArgumentError("basis dimension does not match block " + block_to_string(b.target));
    targets.insert(targets.end(), pos.begin(), pos.end());
    w = Eigen::kroneckerProduct(w, b.unitary()).eval();
  }
  require_disjoint(targets);
  const std::vector<int> dims = rho.dims();
  return DensityMatrix::trusted(rho.labels(), kernels::dephase(rho.data(), dims, targets, w));
}

DensityMatrix apply_product(const DensityMatrix& rho, const ProductMeasurement& m) {
  int covered = 0;
  for (const auto& b : m.bases) covered += static_cast<int>(b.target.size());
  if (covered != rho.num_subsystems())
    throw ArgumentError("apply_product: bases do not cover every subsystem");
  return apply_local(rho, m.bases);
}

double conditional_entropy_post(const DensityMatrix& rho, const MeasurementTree& tree, int k) {
  const int limit = std::min(tree.depth() + 1, static_cast<int>(tree.blocks().size()));
  if (k < 1 || k > limit)
    throw ArgumentError("conditional_entropy_post: k = " + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  const DensityMatrix post = apply_tree(rho, tree, k - 1);
  std::vector<int> prefix;
  for (int t = 0; t < k - 1; ++t) {
    const auto pos = block_positions(post, tree.blocks()[t]);
    prefix.insert(prefix.end(), pos.begin(), pos.end());
  }
  std::vector<int> with_next = prefix;
  const auto next = block_positions(post, tree.blocks()[k - 1]);
  with_next.insert(with_next.end(), next.begin(), next.end());
  const double joint = von_neumann_entropy(partial_trace_positions(post, with_next));
  const double marginal = prefix.empty() ? 0.0 : von_neumann_entropy(partial_trace_positions(post, prefix));
  return joint - marginal;
}

}  // namespace qdiscord
