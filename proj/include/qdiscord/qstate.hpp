#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qdiscord {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Raised for malformed arguments: unknown labels, overlapping blocks, bad moves.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a matrix fails the density-operator invariants.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenTol = 1e-10;

struct SubsystemLabel {
  std::string name;
  int index = 0;
  int dim = 2;

  bool operator==(const SubsystemLabel&) const = default;
};

/// Canonical single-letter name for subsystem position i ("A", "B", ...).
std::string default_label_name(int i);

/// Labels A, B, C, ... with the given local dimensions.
std::vector<SubsystemLabel> make_labels(std::span<const int> dims);

/// Hermitian, positive semidefinite, unit-trace operator on a labeled tensor
/// product. Immutable once constructed; the constructor enforces the
/// invariants (max |rho - rho^dagger| <= 1e-10, |tr - 1| <= 1e-10,
/// eigenvalues >= -1e-10).
class DensityMatrix {
 public:
  DensityMatrix(std::vector<SubsystemLabel> labels, Matrix data);

  /// Skips the eigenvalue check. For outputs of operations that preserve the
  /// invariants by construction (partial traces, dephasing channels).
  static DensityMatrix trusted(std::vector<SubsystemLabel> labels, Matrix data);

  const std::vector<SubsystemLabel>& labels() const { return labels_; }
  const Matrix& data() const { return data_; }
  int dim() const { return static_cast<int>(data_.rows()); }
  int num_subsystems() const { return static_cast<int>(labels_.size()); }
  std::vector<int> dims() const;

  /// Position of the named subsystem, or -1.
  int find(std::string_view name) const;
  /// Position of the named subsystem; throws ArgumentError when absent.
  int position_of(std::string_view name) const;

 private:
  struct TrustedTag {};
  DensityMatrix(std::vector<SubsystemLabel> labels, Matrix data, TrustedTag);

  std::vector<SubsystemLabel> labels_;
  Matrix data_;
};

/// Entropy in bits of a Hermitian PSD matrix with trace <= 1. Eigenvalues
/// below zero are treated as zero. No validation; used in inner loops.
double entropy_bits(const Matrix& m);

/// Entropy in bits of a probability vector (0 log 0 = 0).
double shannon_bits(std::span<const double> p);

double von_neumann_entropy(const DensityMatrix& rho);

/// Reduced state on `keep` (label names), in the state's own label order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);
DensityMatrix partial_trace_positions(const DensityMatrix& rho, std::vector<int> keep);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reorders subsystems: result position i holds rho's subsystem order[i].
/// Names travel with their subsystems.
DensityMatrix permute(const DensityMatrix& rho, std::span<const int> order);

/// Same matrix, new names (one per subsystem, unique).
DensityMatrix relabel(const DensityMatrix& rho, const std::vector<std::string>& names);

/// S(rho || sigma) in bits; +infinity when supp(rho) is not inside supp(sigma).
double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma);

class Partition;

/// Sum of block-marginal entropies minus the total entropy. The blocks must
/// cover every label of rho.
double mutual_information(const DensityMatrix& rho, const Partition& blocks);

/// Named constructors: ghz, w, bell, paper_cx_1p11, paper_cx_p11,
/// classical_random, product_random. `params` is name specific:
/// ghz/w take [n] (default 3); the random ones take [n, seed].
DensityMatrix make_named_state(std::string_view name, std::span<const double> params = {});

/// Ginibre mixed state G G^dagger / tr with G of shape (prod dims) x rank.
DensityMatrix sample_random_state(std::span<const int> dims, int rank, std::uint64_t seed);

/// Pure state |psi><psi| over the given dims (psi is normalized here).
DensityMatrix pure_state(std::span<const int> dims, const Vector& psi);

/// Haar-random d x d unitary (QR of a complex Ginibre matrix, phase fixed).
Matrix random_unitary(int d, std::uint64_t seed);

}  // namespace qdiscord
