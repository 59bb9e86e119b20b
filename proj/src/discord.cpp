#include "qdiscord/discord.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "qdiscord/kernels.hpp"

namespace qdiscord {

std::string to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::QD: return "qd";
    case MeasureKind::MQD: return "mqd";
    case MeasureKind::GQD: return "gqd";
  }
  return "?";
}

MeasureKind parse_measure_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "qd") return MeasureKind::QD;
  if (lower == "mqd") return MeasureKind::MQD;
  if (lower == "gqd") return MeasureKind::GQD;
  throw ArgumentError("unknown measure '" + std::string(text) + "' (expected qd, mqd or gqd)");
}

namespace {

// State reduced to the given blocks and reordered so that they sit
// contiguously in the given order.
struct OrderedState {
  DensityMatrix state;
  std::vector<Block> blocks;
  std::vector<int> block_dims;
};

OrderedState order_state(const DensityMatrix& rho, const std::vector<Block>& order) {
  std::vector<int> positions;
  std::vector<int> block_dims;
  for (const Block& b : order) {
    if (b.empty()) throw ArgumentError("empty block");
    int d = 1;
    for (int label : b) {
      const int pos = rho.position_of(default_label_name(label));
      positions.push_back(pos);
      d *= rho.labels()[pos].dim;
    }
    block_dims.push_back(d);
  }
  std::vector<int> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ArgumentError("blocks overlap");
  DensityMatrix reduced = partial_trace_positions(rho, sorted);
  std::vector<int> perm;
  for (int p : positions) perm.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin()));
  return {permute(reduced, perm), order, block_dims};
}

DensityMatrix reduce_to(const DensityMatrix& rho, const std::vector<int>& labels) {
  std::vector<int> positions;
  for (int label : labels) positions.push_back(rho.position_of(default_label_name(label)));
  return partial_trace_positions(rho, positions);
}

long product_of(const std::vector<int>& v, std::size_t from, std::size_t to) {
  long p = 1;
  for (std::size_t i = from; i < to; ++i) p *= v[i];
  return p;
}

// p S(tau / p) for a PSD tau with trace p.
double weighted_entropy(const Matrix& tau) {
  const double p = tau.trace().real();
  if (p < 1e-12) return 0.0;
  return p * entropy_bits(tau / p);
}

// (<u| (x) I) tau (|u> (x) I) for tau on C^d (x) C^rest.
Matrix contract_first(const Matrix& tau, int d, long rest, const Eigen::Ref<const Vector>& u) {
  Matrix out = Matrix::Zero(rest, rest);
  for (int x = 0; x < d; ++x) {
    if (u(x) == Complex(0.0)) continue;
    for (int y = 0; y < d; ++y) {
      if (u(y) == Complex(0.0)) continue;
      out.noalias() += (std::conj(u(x)) * u(y)) * tau.block(x * rest, y * rest, rest, rest);
    }
  }
  return out;
}

// Marginal on the first factor of C^d (x) C^rest.
Matrix first_marginal(const Matrix& tau, int d, long rest) {
  Matrix out(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Complex s = 0.0;
      for (long k = 0; k < rest; ++k) s += tau(a * rest + k, b * rest + k);
      out(a, b) = s;
    }
  return out;
}

// Ordered-discord objective by branch recursion: the node reached by outcome
// string s at level t sees the unnormalized conditional state of the later
// blocks and adds p_j S(next block | j) for each of its outcomes j.
class TreeObjective {
 public:
  TreeObjective(const OrderedState& os) : rho_(os.state.data()), dims_(os.block_dims) {
    depth_ = static_cast<int>(dims_.size()) - 1;
    std::size_t off = 0;
    for (int t = 0; t < depth_; ++t) {
      offsets_.push_back(off);
      off += static_cast<std::size_t>(product_of(dims_, 0, t)) * basis_param_count(dims_[t]);
    }
    num_params_ = static_cast<int>(off);
    const double s_total = entropy_bits(rho_);
    const std::vector<int> keep{0};
    const double s_first = entropy_bits(kernels::partial_trace(rho_, dims_, keep));
    constant_ = -(s_total - s_first);
  }

  int num_params() const { return num_params_; }
  bool all_measured_qubits() const {
    for (int t = 0; t < depth_; ++t)
      if (dims_[t] != 2) return false;
    return true;
  }

  double operator()(std::span<const double> params) const { return constant_ + branch(rho_, 0, 0, params); }

  GridOutcome nested_grid(const OptimizerConfig& cfg) const {
    GridOutcome out;
    if (!all_measured_qubits() || cfg.grid_points_per_angle < 2) return out;
    int m = cfg.grid_points_per_angle;
    out.certified = true;
    while (m > 2 && grid_cost(m) > static_cast<double>(cfg.max_grid_evals)) {
      --m;
      out.certified = false;
    }
    if (grid_cost(m) > static_cast<double>(cfg.max_grid_evals)) return GridOutcome{};
    out.points_per_angle = m;
    out.evaluations = static_cast<long>(grid_cost(m));

    const int candidates = m * m;
    std::vector<double> values(candidates);
    std::vector<std::vector<double>> found(candidates);
#pragma omp parallel for schedule(dynamic, 4)
    for (int c = 0; c < candidates; ++c) {
      std::vector<double> params(num_params_, 0.0);
      values[c] = node_candidate(rho_, 0, 0, m, c, params);
      found[c] = std::move(params);
    }
    int best = 0;
    for (int c = 1; c < candidates; ++c)
      if (values[c] < values[best]) best = c;
    out.value = constant_ + values[best];
    out.params = std::move(found[best]);
    return out;
  }

 private:
  const Matrix& rho_;
  std::vector<int> dims_;
  int depth_ = 0;
  std::vector<std::size_t> offsets_;
  int num_params_ = 0;
  double constant_ = 0.0;

  double branch(const Matrix& tau, int t, long node, std::span<const double> params) const {
    const int d = dims_[t];
    const long rest = product_of(dims_, t + 1, dims_.size());
    const std::size_t np = basis_param_count(d);
    const Matrix u = basis_unitary(d, params.subspan(offsets_[t] + node * np, np));
    double total = 0.0;
    for (int j = 0; j < d; ++j) {
      const Matrix tau_j = contract_first(tau, d, rest, u.col(j));
      total += weighted_entropy(first_marginal(tau_j, dims_[t + 1], rest / dims_[t + 1]));
      if (t + 1 < depth_) total += branch(tau_j, t + 1, node * d + j, params);
    }
    return total;
  }

  double grid_cost(int m) const {
    double cost = 0.0;
    for (int t = depth_ - 1; t >= 0; --t) cost = double(m) * m * (1.0 + (t + 1 < depth_ ? dims_[t] * cost : 0.0));
    return cost;
  }

  // Value of the subtree below (t, node) when the node uses grid candidate c;
  // child subtrees are minimized independently because they only see their own
  // conditional state.
  double node_candidate(const Matrix& tau, int t, long node, int m, int c, std::vector<double>& params) const {
    const std::size_t off = offsets_[t] + node * 2;
    params[off] = grid_theta(c / m, m);
    params[off + 1] = grid_phi(c % m, m);
    const Matrix u = basis_unitary(2, std::span<const double>(params).subspan(off, 2));
    const long rest = product_of(dims_, t + 1, dims_.size());
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
      const Matrix tau_j = contract_first(tau, 2, rest, u.col(j));
      total += weighted_entropy(first_marginal(tau_j, dims_[t + 1], rest / dims_[t + 1]));
      if (t + 1 < depth_) total += node_best(tau_j, t + 1, node * 2 + j, m, params);
    }
    return total;
  }

  double node_best(const Matrix& tau, int t, long node, int m, std::vector<double>& params) const {
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    for (int c = 0; c < m * m; ++c) {
      const double v = node_candidate(tau, t, node, m, c, params);
      if (v < best) {
        best = v;
        best_params = params;
      }
    }
    if (!best_params.empty()) params = std::move(best_params);
    return best;
  }
};

// I(rho) - I(Phi(rho)); Phi(rho) is diagonal in the rotated product basis, so
// its mutual information is classical.
class ProductObjective {
 public:
  ProductObjective(const OrderedState& os) : rho_(os.state.data()), dims_(os.block_dims) {
    double sum = 0.0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const std::vector<int> keep{static_cast<int>(k)};
      sum += entropy_bits(kernels::partial_trace(rho_, dims_, keep));
    }
    mutual_ = sum - entropy_bits(rho_);
    for (int d : dims_) num_params_ += basis_param_count(d);
  }

  int num_params() const { return num_params_; }
  bool all_qubits() const {
    return std::all_of(dims_.begin(), dims_.end(), [](int d) { return d == 2; });
  }
  double mutual() const { return mutual_; }

  double operator()(std::span<const double> params) const {
    Matrix w = Matrix::Ones(1, 1);
    std::size_t off = 0;
    for (int d : dims_) {
      const std::size_t np = basis_param_count(d);
      const Matrix u = basis_unitary(d, params.subspan(off, np));
      off += np;
      Matrix next(w.rows() * d, w.cols() * d);
      for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) next.block(r * d, c * d, d, d) = w(r, c) * u;
      w = std::move(next);
    }
    const Eigen::VectorXd p = (w.adjoint() * rho_ * w).diagonal().real().cwiseMax(0.0);
    const long total = p.size();
    double joint = 0.0;
    for (long i = 0; i < total; ++i)
      if (p(i) > 0) joint -= p(i) * std::log2(p(i));
    double marginals = 0.0;
    long stride = total;
    for (int d : dims_) {
      stride /= d;
      std::vector<double> q(d, 0.0);
      for (long i = 0; i < total; ++i) q[(i / stride) % d] += p(i);
      marginals += shannon_bits(q);
    }
    return mutual_ - (marginals - joint);
  }

 private:
  const Matrix& rho_;
  std::vector<int> dims_;
  double mutual_ = 0.0;
  int num_params_ = 0;
};

void settle(DiscordResult& r, const OptimizerConfig& cfg) {
  r.raw_value = r.opt.value;
  if (r.raw_value >= 0) {
    r.value = r.raw_value;
  } else if (r.raw_value >= -10 * cfg.f_tol) {
    r.value = 0.0;
    r.clamped = true;
  } else {
    throw InvariantError(to_string(r.kind) + " returned a negative discord " + std::to_string(r.raw_value));
  }
}

Partition partition_of(std::vector<Block> blocks) {
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.front() < b.front(); });
  return Partition(std::move(blocks));
}

}  // namespace

DiscordResult mqd_ordered(const DensityMatrix& rho, const std::vector<Block>& order, const OptimizerConfig& cfg) {
  if (order.size() < 2) throw ArgumentError("ordered discord needs at least two blocks");
  cfg.validate();
  const OrderedState os = order_state(rho, order);
  const TreeObjective objective(os);
  Problem problem;
  problem.dim = objective.num_params();
  problem.objective = [&objective](std::span<const double> x) { return objective(x); };
  problem.grid = [&objective](const OptimizerConfig& c) { return objective.nested_grid(c); };

  DiscordResult r;
  r.kind = MeasureKind::MQD;
  r.partition = partition_of(order);
  r.ordering = order;
  r.opt = minimize(problem, cfg);
  settle(r, cfg);
  r.tree = MeasurementTree::from_params(order, os.block_dims, static_cast<int>(order.size()) - 1, r.opt.params);
  return r;
}

DiscordResult mqd(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg) {
  if (partition.size() < 2) throw ArgumentError("mqd: partition " + partition.to_string() + " has fewer than two blocks");
  DiscordResult r = mqd_ordered(rho, partition.blocks(), cfg);
  r.partition = partition;
  return r;
}

DiscordResult qd_bipartite(const DensityMatrix& rho, const Block& measured, const Block& unmeasured,
                           const OptimizerConfig& cfg) {
  for (int l : measured)
    if (std::find(unmeasured.begin(), unmeasured.end(), l) != unmeasured.end())
      throw ArgumentError("qd: measured and unmeasured blocks overlap");
  DiscordResult r = mqd_ordered(rho, {measured, unmeasured}, cfg);
  r.kind = MeasureKind::QD;
  return r;
}

DiscordResult gqd(const DensityMatrix& rho, const Partition& partition, const OptimizerConfig& cfg) {
  if (partition.size() < 2) throw ArgumentError("gqd: partition " + partition.to_string() + " has fewer than two blocks");
  cfg.validate();
  const OrderedState os = order_state(rho, partition.blocks());
  const ProductObjective objective(os);
  Problem problem;
  problem.dim = objective.num_params();
  problem.objective = [&objective](std::span<const double> x) { return objective(x); };
  problem.qubit_angles = objective.all_qubits();

  DiscordResult r;
  r.kind = MeasureKind::GQD;
  r.partition = partition;
  r.ordering = partition.blocks();
  r.opt = minimize(problem, cfg);
  settle(r, cfg);
  r.product = ProductMeasurement::from_params(partition, os.block_dims, r.opt.params);
  return r;
}

DiscordResult compute_discord(const DensityMatrix& rho, MeasureKind kind, const Partition& partition,
                              const OptimizerConfig& cfg) {
  switch (kind) {
    case MeasureKind::QD:
      if (partition.size() != 2) throw ArgumentError("qd needs a two-block partition, got " + partition.to_string());
      return qd_bipartite(rho, partition.block(0), partition.block(1), cfg);
    case MeasureKind::MQD: return mqd(rho, partition, cfg);
    case MeasureKind::GQD: return gqd(rho, partition, cfg);
  }
  throw ArgumentError("unknown measure kind");
}

double mqd_objective(const DensityMatrix& rho, const MeasurementTree& tree) {
  if (tree.blocks().size() < 2 || tree.depth() != static_cast<int>(tree.blocks().size()) - 1)
    throw ArgumentError("mqd_objective: tree must measure every block but the last");
  const OrderedState os = order_state(rho, tree.blocks());
  if (os.block_dims != tree.block_dims()) throw ArgumentError("mqd_objective: tree dimensions do not match the state");
  const TreeObjective objective(os);
  return objective(tree.params());
}

double gqd_objective(const DensityMatrix& rho, const Partition& partition, const ProductMeasurement& m) {
  if (m.bases.size() != partition.size()) throw ArgumentError("gqd_objective: measurement does not match partition");
  for (std::size_t k = 0; k < partition.size(); ++k)
    if (m.bases[k].target != partition.block(k)) throw ArgumentError("gqd_objective: basis targets differ from blocks");
  const OrderedState os = order_state(rho, partition.blocks());
  const ProductObjective objective(os);
  return objective(m.params());
}

double d_quantity(const DensityMatrix& rho, const std::vector<Block>& measured_prefix, const Block& next_block,
                  const MeasurementTree& tree) {
  if (measured_prefix.empty()) throw ArgumentError("d_quantity: empty measured prefix");
  auto level_of = [&tree](const Block& b) {
    for (int t = 0; t < static_cast<int>(tree.blocks().size()); ++t)
      if (tree.blocks()[t] == b) return t;
    return -1;
  };
  const int y_level = level_of(next_block);
  const int applied = (y_level >= 0 && y_level < tree.depth()) ? y_level : tree.depth();
  std::vector<int> z_labels;
  for (const Block& z : measured_prefix) {
    const int t = level_of(z);
    if (t < 0 || t >= applied)
      throw ArgumentError("d_quantity: block " + block_to_string(z) + " is not measured by the tree before " +
                          block_to_string(next_block));
    z_labels.insert(z_labels.end(), z.begin(), z.end());
  }
  for (int l : next_block)
    if (std::find(z_labels.begin(), z_labels.end(), l) != z_labels.end())
      throw ArgumentError("d_quantity: next block overlaps the measured prefix");
  std::vector<int> zy_labels = z_labels;
  zy_labels.insert(zy_labels.end(), next_block.begin(), next_block.end());
  std::sort(z_labels.begin(), z_labels.end());
  std::sort(zy_labels.begin(), zy_labels.end());

  const DensityMatrix post = apply_tree(rho, tree, applied);
  const double measured = von_neumann_entropy(reduce_to(post, zy_labels)) - von_neumann_entropy(reduce_to(post, z_labels));
  const double quantum = von_neumann_entropy(reduce_to(rho, zy_labels)) - von_neumann_entropy(reduce_to(rho, z_labels));
  return measured - quantum;
}

ProductMeasurement restrict_measurement(const ProductMeasurement& m, const std::vector<Block>& blocks) {
  ProductMeasurement out;
  for (const Block& b : blocks) {
    auto it = std::find_if(m.bases.begin(), m.bases.end(), [&b](const ProjectiveBasis& x) { return x.target == b; });
    if (it == m.bases.end()) throw ArgumentError("measurement has no basis on block " + block_to_string(b));
    out.bases.push_back(*it);
  }
  return out;
}

DefectPair gqd_defect(const DensityMatrix& rho, const Partition& partition, const std::vector<Block>& sub_blocks,
                      const ProductMeasurement& m) {
  if (sub_blocks.empty()) throw ArgumentError("gqd_defect: no sub-blocks");
  for (const Block& b : sub_blocks)
    if (std::find(partition.blocks().begin(), partition.blocks().end(), b) == partition.blocks().end())
      throw ArgumentError("gqd_defect: " + block_to_string(b) + " is not a block of " + partition.to_string());
  const Partition sub = partition_of(sub_blocks);
  const DensityMatrix full = reduce_to(rho, partition.labels());
  const DensityMatrix phi = apply_product(full, m);
  const std::vector<int> sub_labels = sub.labels();

  auto sub_mi = [&](const DensityMatrix& x) { return mutual_information(reduce_to(x, sub_labels), sub); };
  const double defect =
      (mutual_information(full, partition) - mutual_information(phi, partition)) - (sub_mi(full) - sub_mi(phi));

  // x_S (x) x_{b} (x) ... over the blocks outside S, put back in label order.
  auto reference = [&](const DensityMatrix& x) {
    DensityMatrix sigma = reduce_to(x, sub_labels);
    for (const Block& b : partition.blocks())
      if (std::find(sub.blocks().begin(), sub.blocks().end(), b) == sub.blocks().end()) sigma = tensor(sigma, reduce_to(x, b));
    std::vector<int> order;
    for (const auto& l : x.labels()) order.push_back(sigma.position_of(l.name));
    return permute(sigma, order);
  };
  const double rel = relative_entropy(full, reference(full)) - relative_entropy(phi, reference(phi));
  return {defect, rel};
}

}  // namespace qdiscord
