#pragma once

// Dense linear algebra on multipartite Hilbert spaces.
//
// Index convention (used everywhere in this library): a basis state
// |x_0 x_1 ... x_{N-1}> of subsystems with dimensions dims[0..N-1] has flat
// index sum_p x_p * prod_{q>p} dims[q], i.e. subsystem 0 is the most
// significant digit. Matrices are row-major in this index. Subsystem indices
// in the API are 0-based.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace gmc {

using cplx = std::complex<double>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Dims = std::vector<std::size_t>;
using IndexSet = std::vector<std::size_t>;

inline constexpr std::size_t kDefaultDimCap = 4096;
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kClusterTol = 1e-9;

std::size_t total_dimension(std::span<const std::size_t> dims);

// Throws ResourceError when prod(dims) > cap, DomainError on a zero dimension.
void check_dimension(std::span<const std::size_t> dims, std::size_t cap = kDefaultDimCap);

// Linear map from (x)dims_in to (x)dims_out.
class Operator {
 public:
  Operator() = default;
  Operator(Dims dims_out, Dims dims_in, Matrix entries);
  // Square operator on (x)dims.
  Operator(Dims dims, Matrix entries);

  static Operator identity(Dims dims);

  const Dims& dims_out() const { return dims_out_; }
  const Dims& dims_in() const { return dims_in_; }
  const Matrix& matrix() const { return m_; }
  std::size_t rows() const { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(m_.cols()); }
  bool square() const { return dims_in_ == dims_out_; }

  Operator adjoint() const;

  friend Operator operator*(const Operator& a, const Operator& b);

 private:
  Dims dims_out_;
  Dims dims_in_;
  Matrix m_;
};

// Hermitian, PSD, unit-trace operator with per-subsystem dimensions.
// Construction validates the invariants (InvariantError on failure) and
// stores the Hermitian part (m + m^dagger)/2.
class DensityMatrix {
 public:
  DensityMatrix(Dims dims, Matrix entries, std::size_t dim_cap = kDefaultDimCap);
  explicit DensityMatrix(const Operator& op, std::size_t dim_cap = kDefaultDimCap);

  // Skips validation; only for results of operations that preserve the
  // invariants (partial trace, tensor product, subsystem permutation).
  static DensityMatrix unchecked(Dims dims, Matrix entries);

  static DensityMatrix maximally_mixed(Dims dims);
  // |psi><psi| / <psi|psi>.
  static DensityMatrix pure(Dims dims, const Eigen::VectorXcd& psi);

  const Dims& dims() const { return dims_; }
  std::size_t parties() const { return dims_.size(); }
  std::size_t dimension() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  cplx operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  double purity() const;

  Operator as_operator() const { return Operator(dims_, m_); }

 private:
  DensityMatrix() = default;

  Dims dims_;
  Matrix m_;
};

// Eigenvalue multiset, values descending, equal values grouped.
struct SpectrumLevel {
  double value = 0.0;
  std::size_t multiplicity = 0;
};

class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<SpectrumLevel> levels);
  // Groups raw eigenvalues: sorted descending, neighbours closer than tol share a level.
  static Spectrum from_values(std::vector<double> values, double tol = kClusterTol);

  const std::vector<SpectrumLevel>& levels() const { return levels_; }
  std::size_t dimension() const;
  double sum() const;
  double min() const;
  double max() const;
  // Every eigenvalue with multiplicity, descending.
  std::vector<double> values() const;

 private:
  std::vector<SpectrumLevel> levels_;
};

struct SpectrumMatch {
  bool same_multiplicities = false;
  double max_deviation = 0.0;  // over the expanded, sorted eigenvalue lists
};
SpectrumMatch compare_spectra(const Spectrum& a, const Spectrum& b);

Operator kron(const Operator& a, const Operator& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state on `keep` (sorted, duplicates rejected); kept subsystems stay in
// ascending order.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

// Transpose on the tensor factors listed in `subset`.
Operator partial_transpose(const DensityMatrix& rho, std::span<const std::size_t> subset);

// Throws DomainError unless `m` is square and Hermitian within kHermitianTol.
Spectrum hermitian_spectrum(const Operator& m, double cluster_tol = kClusterTol);
Spectrum hermitian_spectrum(const DensityMatrix& rho, double cluster_tol = kClusterTol);

// Eigenvalues ascending with orthonormal eigenvectors as columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};
EigenDecomposition hermitian_eigen(const Matrix& m);

Operator antisymmetric_projector(std::size_t d);
Operator symmetric_projector(std::size_t d, std::size_t k);

// Unitary that moves input subsystem order[p] to output position p.
Operator permutation_operator(const Dims& dims, std::span<const std::size_t> order);
DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> order);

// Applies P_sym(block_1) (x) ... (x) P_sym(block_m) on both sides of `m`
// (identity on subsystems not in any block). Blocks must be disjoint and each
// block must have equal local dimensions.
Matrix symmetrize_blocks(const Matrix& m, const Dims& dims,
                         const std::vector<IndexSet>& blocks);

double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace gmc
