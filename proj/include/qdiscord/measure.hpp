#pragma once

#include <span>
#include <vector>

#include "qdiscord/partition.hpp"
#include "qdiscord/qstate.hpp"

namespace qdiscord {

/// Number of real angles parameterizing a rank-1 projective basis in dimension d.
constexpr int basis_param_count(int d) { return d * (d - 1); }

/// Unitary U whose columns are the measurement basis. Built as an ordered
/// product of d(d-1)/2 complex Givens rotations
///   G_pq(theta, phi) = [[cos t, -e^{-i phi} sin t], [e^{i phi} sin t, cos t]]
/// on rows (p, q), two angles each. Column phases are not parameterized
/// because rank-1 projectors do not see them. For d = 2 this is the Bloch
/// parameterization u0 = (cos theta, e^{i phi} sin theta).
Matrix basis_unitary(int d, std::span<const double> params);

/// Rank-1 projective measurement on a block of labels treated as one particle.
struct ProjectiveBasis {
  Block target;
  int dim = 2;
  std::vector<double> params;

  static ProjectiveBasis computational(Block target, int dim);

  Matrix unitary() const { return basis_unitary(dim, params); }
  /// U|j><j|U^dagger.
  Matrix projector(int j) const;
};

/// Outcome-conditioned measurement sequence: level t measures blocks[t] with a
/// basis chosen by the outcome string (j_1 ... j_t) of the earlier levels.
/// Blocks past `depth()` are carried along unmeasured (e.g. the last block of
/// a multipartite discord).
class MeasurementTree {
 public:
  MeasurementTree(std::vector<Block> blocks, std::vector<int> block_dims,
                  std::vector<std::vector<ProjectiveBasis>> levels);

  /// Parameter layout: level by level, nodes in outcome-string order
  /// (first outcome most significant), d_t(d_t - 1) angles per node.
  static MeasurementTree from_params(std::vector<Block> blocks, std::vector<int> block_dims, int depth,
                                     std::span<const double> params);
  static int param_count(std::span<const int> block_dims, int depth);
  static MeasurementTree computational(std::vector<Block> blocks, std::vector<int> block_dims, int depth);
  /// Every node at level t uses per_level[t].
  static MeasurementTree unconditioned(std::vector<Block> blocks, std::vector<int> block_dims,
                                       const std::vector<std::vector<double>>& per_level);

  int depth() const { return static_cast<int>(levels_.size()); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<int>& block_dims() const { return block_dims_; }
  const std::vector<std::vector<ProjectiveBasis>>& levels() const { return levels_; }
  const ProjectiveBasis& node(int level, int outcome_string) const { return levels_.at(level).at(outcome_string); }
  std::vector<double> params() const;

  /// Unitary on blocks[0..depth) whose column s is the product vector of
  /// the branch with outcome string s.
  Matrix branch_unitary(int depth) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> block_dims_;
  std::vector<std::vector<ProjectiveBasis>> levels_;
};

/// One unconditioned basis per block; the GQD local channel Phi.
struct ProductMeasurement {
  std::vector<ProjectiveBasis> bases;

  static ProductMeasurement from_params(const Partition& blocks, std::span<const int> block_dims,
                                        std::span<const double> params);
  std::vector<double> params() const;
};

/// Positions in rho of the labels of `block`, in block order.
std::vector<int> block_positions(const DensityMatrix& rho, const Block& block);
int block_dim(const DensityMatrix& rho, const Block& block);

DensityMatrix apply_basis(const DensityMatrix& rho, const ProjectiveBasis& basis);

/// State after the first `depth` rounds of the tree; depth 0 returns rho.
DensityMatrix apply_tree(const DensityMatrix& rho, const MeasurementTree& tree, int depth);

/// Full local dephasing Phi(rho); the bases must cover every label of rho.
DensityMatrix apply_product(const DensityMatrix& rho, const ProductMeasurement& m);

/// Dephasing on the listed blocks only (others untouched).
DensityMatrix apply_local(const DensityMatrix& rho, const std::vector<ProjectiveBasis>& bases);

/// S(post on X1..Xk) - S(post on X1..X(k-1)) with post = apply_tree(rho, tree, k - 1),
/// i.e. S_{Xk | Pi^{X1..X(k-1)}} in bits. Requires 1 <= k <= min(depth + 1, #blocks).
double conditional_entropy_post(const DensityMatrix& rho, const MeasurementTree& tree, int k);

}  // namespace qdiscord
