#include "qdiscord/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "qdiscord/kernels.hpp"
#include "qdiscord/partition.hpp"

namespace qdiscord {

std::string default_label_name(int i) {
  if (i < 0 || i >= 26) throw ArgumentError("label index out of range: " + std::to_string(i));
  return std::string(1, static_cast<char>('A' + i));
}

std::vector<SubsystemLabel> make_labels(std::span<const int> dims) {
  std::vector<SubsystemLabel> labels;
  for (std::size_t i = 0; i < dims.size(); ++i)
    labels.push_back({default_label_name(static_cast<int>(i)), static_cast<int>(i), dims[i]});
  return labels;
}

namespace {

void check_labels(const std::vector<SubsystemLabel>& labels, Eigen::Index side) {
  if (labels.empty()) throw ArgumentError("density matrix needs at least one subsystem");
  std::set<std::string> names;
  long total = 1;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& l = labels[i];
    if (l.index != static_cast<int>(i))
      throw ArgumentError("label indices must be contiguous from 0 (got " + std::to_string(l.index) +
                          " at position " + std::to_string(i) + ")");
    if (l.dim < 2) throw ArgumentError("subsystem " + l.name + " has dimension < 2");
    if (l.name.empty()) throw ArgumentError("empty subsystem name");
    if (!names.insert(l.name).second) throw ArgumentError("duplicate subsystem name " + l.name);
    total *= l.dim;
  }
  if (total != side)
    throw ArgumentError("matrix side " + std::to_string(side) + " does not match product of dims " +
                        std::to_string(total));
}

void check_hermitian_trace(const Matrix& m) {
  if (m.rows() != m.cols()) throw InvariantError("density matrix is not square");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (!(herm <= kHermitianTol))
    throw InvariantError("density matrix is not Hermitian (max |rho - rho^dag| = " + std::to_string(herm) + ")");
  const Complex tr = m.trace();
  if (!(std::abs(tr - 1.0) <= kTraceTol))
    throw InvariantError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
}

}  // namespace

DensityMatrix::DensityMatrix(std::vector<SubsystemLabel> labels, Matrix data)
    : labels_(std::move(labels)), data_(std::move(data)) {
  check_labels(labels_, data_.rows());
  check_hermitian_trace(data_);
  const Matrix h = 0.5 * (data_ + data_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -kEigenTol)
    throw InvariantError("density matrix has negative eigenvalue " + std::to_string(lo));
}

DensityMatrix::DensityMatrix(std::vector<SubsystemLabel> labels, Matrix data, TrustedTag)
    : labels_(std::move(labels)), data_(std::move(data)) {}

DensityMatrix DensityMatrix::trusted(std::vector<SubsystemLabel> labels, Matrix data) {
  check_labels(labels, data.rows());
  // Exact Hermitian symmetrization removes rounding asymmetry from kernels.
  Matrix h = 0.5 * (data + data.adjoint());
  return DensityMatrix(std::move(labels), std::move(h), TrustedTag{});
}

std::vector<int> DensityMatrix::dims() const {
  std::vector<int> d;
  for (const auto& l : labels_) d.push_back(l.dim);
  return d;
}

int DensityMatrix::find(std::string_view name) const {
  for (const auto& l : labels_)
    if (l.name == name) return l.index;
  return -1;
}

int DensityMatrix::position_of(std::string_view name) const {
  const int p = find(name);
  if (p < 0) throw ArgumentError("unknown subsystem label '" + std::string(name) + "'");
  return p;
}

double shannon_bits(std::span<const double> p) {
  double s = 0.0;
  for (double x : p)
    if (x > 0.0) s -= x * std::log2(x);
  return s;
}

double entropy_bits(const Matrix& m) {
  if (m.rows() == 1) {
    const double x = m(0, 0).real();
    return x > 0.0 ? -x * std::log2(x) : 0.0;
  }
  if (m.rows() == 2) {
    const double a = m(0, 0).real(), d = m(1, 1).real();
    const double half = 0.5 * (a + d);
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
    const double ev[2] = {half + r, half - r};
    return shannon_bits(ev);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return shannon_bits(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy_bits(rho.data()); }

DensityMatrix partial_trace_positions(const DensityMatrix& rho, std::vector<int> keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
    throw ArgumentError("partial_trace: repeated subsystem");
  for (int k : keep)
    if (k < 0 || k >= rho.num_subsystems()) throw ArgumentError("partial_trace: position out of range");
  const std::vector<int> dims = rho.dims();
  Matrix reduced = kernels::partial_trace(rho.data(), dims, keep);
  std::vector<SubsystemLabel> labels;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const auto& src = rho.labels()[keep[i]];
    labels.push_back({src.name, static_cast<int>(i), src.dim});
  }
  return DensityMatrix::trusted(std::move(labels), std::move(reduced));
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
  if (keep.empty()) throw ArgumentError("partial_trace: keep set is empty");
  std::vector<int> positions;
  for (const auto& name : keep) positions.push_back(rho.position_of(name));
  return partial_trace_positions(rho, std::move(positions));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<SubsystemLabel> labels = a.labels();
  for (const auto& l : b.labels()) {
    if (a.find(l.name) >= 0) throw ArgumentError("tensor: label collision on " + l.name);
    labels.push_back({l.name, static_cast<int>(labels.size()), l.dim});
  }
  Matrix out(a.dim() * b.dim(), a.dim() * b.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) out.block(i * b.dim(), j * b.dim(), b.dim(), b.dim()) = a.data()(i, j) * b.data();
  return DensityMatrix::trusted(std::move(labels), std::move(out));
}

DensityMatrix permute(const DensityMatrix& rho, std::span<const int> order) {
  const int n = rho.num_subsystems();
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  if (static_cast<int>(order.size()) != n || std::adjacent_find(check.begin(), check.end()) != check.end() ||
      check.front() != 0 || check.back() != n - 1)
    throw ArgumentError("permute: order is not a permutation of the subsystems");
  const std::vector<int> dims = rho.dims();
  std::vector<SubsystemLabel> labels;
  for (int i = 0; i < n; ++i) {
    const auto& src = rho.labels()[order[i]];
    labels.push_back({src.name, i, src.dim});
  }
  return DensityMatrix::trusted(std::move(labels), kernels::permute(rho.data(), dims, order));
}

DensityMatrix relabel(const DensityMatrix& rho, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != rho.num_subsystems()) throw ArgumentError("relabel: wrong number of names");
  std::vector<SubsystemLabel> labels = rho.labels();
  for (std::size_t i = 0; i < names.size(); ++i) labels[i].name = names[i];
  return DensityMatrix::trusted(std::move(labels), rho.data());
}

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw ArgumentError("relative_entropy: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma.data());
  const Eigen::VectorXd& lam = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  double cross = 0.0;  // tr(rho log2 sigma)
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double weight = (v.col(i).adjoint() * rho.data() * v.col(i))(0, 0).real();
    if (lam(i) <= 1e-13) {
      if (weight > 1e-10) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log2(lam(i));
  }
  const double value = -von_neumann_entropy(rho) - cross;
  return std::max(value, 0.0);
}

double mutual_information(const DensityMatrix& rho, const Partition& blocks) {
  std::vector<int> covered;
  double sum = 0.0;
  for (const auto& block : blocks.blocks()) {
    std::vector<int> positions;
    for (int u : block) positions.push_back(rho.position_of(default_label_name(u)));
    covered.insert(covered.end(), positions.begin(), positions.end());
    sum += von_neumann_entropy(partial_trace_positions(rho, positions));
  }
  if (static_cast<int>(covered.size()) != rho.num_subsystems())
    throw ArgumentError("mutual_information: blocks " + blocks.to_string() + " do not cover every subsystem");
  return sum - von_neumann_entropy(rho);
}

DensityMatrix pure_state(std::span<const int> dims, const Vector& psi) {
  const Vector v = psi / psi.norm();
  return DensityMatrix::trusted(make_labels(dims), v * v.adjoint());
}

namespace {

Vector ket(std::initializer_list<Vector> factors) {
  Vector out = Vector::Ones(1);
  for (const Vector& f : factors) {
    Vector next(out.size() * f.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) next.segment(i * f.size(), f.size()) = out(i) * f;
    out = next;
  }
  return out;
}

Vector basis_ket(int d, int k) {
  Vector v = Vector::Zero(d);
  v(k) = 1.0;
  return v;
}

Vector plus_ket() { return Vector::Constant(2, 1.0 / std::sqrt(2.0)); }

int int_param(std::span<const double> params, std::size_t i, int fallback) {
  if (params.size() <= i) return fallback;
  const double x = params[i];
  if (!(x >= 0) || x != std::floor(x)) throw ArgumentError("named state parameter must be a nonnegative integer");
  return static_cast<int>(x);
}

Matrix ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

}  // namespace

DensityMatrix make_named_state(std::string_view name, std::span<const double> params) {
  const Vector k0 = basis_ket(2, 0), k1 = basis_ket(2, 1), kp = plus_ket();
  if (name == "bell") {
    const int dims[] = {2, 2};
    return pure_state(dims, ket({k0, k0}) + ket({k1, k1}));
  }
  if (name == "ghz" || name == "w") {
    const int n = int_param(params, 0, 3);
    if (n < 2 || n > 10) throw ArgumentError("ghz/w: qubit count must be in [2, 10]");
    const std::vector<int> dims(n, 2);
    Vector psi = Vector::Zero(1 << n);
    if (name == "ghz") {
      psi(0) = 1.0;
      psi((1 << n) - 1) = 1.0;
    } else {
      for (int k = 0; k < n; ++k) psi(1 << k) = 1.0;
    }
    return pure_state(dims, psi);
  }
  if (name == "paper_cx_1p11" || name == "paper_cx_p11") {
    const Vector a = ket({k0, k0, k0});
    const Vector b = name == "paper_cx_1p11" ? ket({k1, kp, k1}) : ket({kp, k1, k1});
    const int dims[] = {2, 2, 2};
    return DensityMatrix::trusted(make_labels(dims), 0.5 * (a * a.adjoint() + b * b.adjoint()));
  }
  if (name == "classical_random" || name == "product_random") {
    const int n = int_param(params, 0, 3);
    if (n < 1 || n > 10) throw ArgumentError("random named state: qubit count must be in [1, 10]");
    const std::uint64_t seed = static_cast<std::uint64_t>(int_param(params, 1, 0));
    const std::vector<int> dims(n, 2);
    if (name == "classical_random") {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> uni(0.05, 1.0);
      Eigen::VectorXd p(1 << n);
      for (Eigen::Index i = 0; i < p.size(); ++i) p(i) = uni(rng);
      p /= p.sum();
      return DensityMatrix::trusted(make_labels(dims), p.cast<Complex>().asDiagonal());
    }
    const int one[] = {2};
    DensityMatrix out = sample_random_state(one, 2, seed * 1000003ULL + 1);
    for (int k = 1; k < n; ++k) {
      DensityMatrix next = relabel(sample_random_state(one, 2, seed * 1000003ULL + 1 + k), {default_label_name(k)});
      out = tensor(out, next);
    }
    return out;
  }
  throw ArgumentError("unknown named state '" + std::string(name) + "'");
}

DensityMatrix sample_random_state(std::span<const int> dims, int rank, std::uint64_t seed) {
  int total = 1;
  for (int d : dims) {
    if (d < 2) throw ArgumentError("sample_random_state: dimension < 2");
    total *= d;
  }
  if (rank < 1 || rank > total) throw ArgumentError("sample_random_state: rank must be in [1, prod dims]");
  std::mt19937_64 rng(seed);
  const Matrix g = ginibre(total, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted(make_labels(dims), std::move(rho));
}

Matrix random_unitary(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Matrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    if (mag > 0) q.col(k) *= diag / mag;
  }
  return q;
}

}  // namespace qdiscord
