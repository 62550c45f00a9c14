#include "gmc/tensor.hpp"

#include "gmc/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gmc {

namespace {

std::vector<std::size_t> strides_of(const Dims& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t p = dims.size(); p-- > 1;) strides[p - 1] = strides[p] * dims[p];
  return strides;
}

// Sorted copy of `set`; rejects duplicates and indices >= n.
IndexSet validated_subset(std::span<const std::size_t> set, std::size_t n, const char* what) {
  IndexSet s(set.begin(), set.end());
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw DomainError(std::string(what) + ": repeated subsystem index");
  if (!s.empty() && s.back() >= n)
    throw DomainError(std::string(what) + ": subsystem index out of range");
  return s;
}

double hermitian_defect(const Matrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

// Flat index maps for a permutation of subsystems: new_index[old] under
// y_p = x_{order[p]}.
std::vector<std::size_t> permutation_map(const Dims& dims, std::span<const std::size_t> order) {
  const std::size_t n = dims.size();
  Dims new_dims(n);
  for (std::size_t p = 0; p < n; ++p) new_dims[p] = dims[order[p]];
  const auto old_strides = strides_of(dims);
  const auto new_strides = strides_of(new_dims);
  // Position of old subsystem q in the new layout.
  std::vector<std::size_t> new_pos(n);
  for (std::size_t p = 0; p < n; ++p) new_pos[order[p]] = p;

  const std::size_t total = total_dimension(dims);
  std::vector<std::size_t> map(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t j = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const std::size_t digit = (i / old_strides[q]) % dims[q];
      j += digit * new_strides[new_pos[q]];
    }
    map[i] = j;
  }
  return map;
}

void check_order(const Dims& dims, std::span<const std::size_t> order) {
  if (order.size() != dims.size()) throw DomainError("permutation: wrong length");
  std::vector<bool> seen(dims.size(), false);
  for (auto q : order) {
    if (q >= dims.size() || seen[q]) throw DomainError("permutation: not a permutation");
    seen[q] = true;
  }
}

}  // namespace

std::size_t total_dimension(std::span<const std::size_t> dims) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  return total;
}

void check_dimension(std::span<const std::size_t> dims, std::size_t cap) {
  if (dims.empty()) throw DomainError("dimension list is empty");
  std::size_t total = 1;
  for (auto d : dims) {
    if (d == 0) throw DomainError("local dimension must be positive");
    if (total > cap / d) throw ResourceError("total dimension exceeds cap " + std::to_string(cap));
    total *= d;
  }
}

// --- Operator ---------------------------------------------------------------

Operator::Operator(Dims dims_out, Dims dims_in, Matrix entries)
    : dims_out_(std::move(dims_out)), dims_in_(std::move(dims_in)), m_(std::move(entries)) {
  if (static_cast<std::size_t>(m_.rows()) != total_dimension(dims_out_) ||
      static_cast<std::size_t>(m_.cols()) != total_dimension(dims_in_))
    throw DomainError("operator: entry count does not match dims");
}

Operator::Operator(Dims dims, Matrix entries) : Operator(dims, dims, std::move(entries)) {}

Operator Operator::identity(Dims dims) {
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  return Operator(std::move(dims), Matrix::Identity(n, n));
}

Operator Operator::adjoint() const { return Operator(dims_in_, dims_out_, m_.adjoint()); }

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dims_in_ != b.dims_out_) throw DomainError("operator product: dims mismatch");
  return Operator(a.dims_out_, b.dims_in_, a.m_ * b.m_);
}

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(Dims dims, Matrix entries, std::size_t dim_cap)
    : dims_(std::move(dims)) {
  check_dimension(dims_, dim_cap);
  const auto n = total_dimension(dims_);
  if (static_cast<std::size_t>(entries.rows()) != n || static_cast<std::size_t>(entries.cols()) != n)
    throw InvariantError("density matrix: shape does not match dims");
  if (!entries.allFinite()) throw InvariantError("density matrix: non-finite entry");
  const double herm = hermitian_defect(entries);
  if (herm > kHermitianTol)
    throw InvariantError("density matrix: not Hermitian (defect " + std::to_string(herm) + ")");
  m_ = (entries + entries.adjoint()) * 0.5;
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw InvariantError("density matrix: trace " + std::to_string(tr) + " != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw InvariantError("density matrix: negative eigenvalue " +
                         std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix::DensityMatrix(const Operator& op, std::size_t dim_cap)
    : DensityMatrix(op.dims_out(), op.matrix(), dim_cap) {
  if (!op.square()) throw InvariantError("density matrix: operator is not square");
}

DensityMatrix DensityMatrix::unchecked(Dims dims, Matrix entries) {
  DensityMatrix rho;
  rho.dims_ = std::move(dims);
  rho.m_ = std::move(entries);
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(Dims dims) {
  check_dimension(dims);
  const auto n = static_cast<Eigen::Index>(total_dimension(dims));
  return unchecked(std::move(dims), Matrix::Identity(n, n) / static_cast<double>(n));
}

DensityMatrix DensityMatrix::pure(Dims dims, const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (norm == 0.0) throw DomainError("pure state: zero vector");
  const Eigen::VectorXcd v = psi / norm;
  return DensityMatrix(std::move(dims), v * v.adjoint());
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

// --- Spectrum ---------------------------------------------------------------

Spectrum::Spectrum(std::vector<SpectrumLevel> levels) : levels_(std::move(levels)) {
  std::erase_if(levels_, [](const SpectrumLevel& l) { return l.multiplicity == 0; });
  std::sort(levels_.begin(), levels_.end(),
            [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.value > b.value; });
}

Spectrum Spectrum::from_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<SpectrumLevel> levels;
  double cluster_sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (levels.empty() || values[i - 1] - values[i] > tol) {
      if (!levels.empty()) levels.back().value = cluster_sum / levels.back().multiplicity;
      levels.push_back({values[i], 0});
      cluster_sum = 0.0;
    }
    ++levels.back().multiplicity;
    cluster_sum += values[i];
  }
  if (!levels.empty()) levels.back().value = cluster_sum / levels.back().multiplicity;
  return Spectrum(std::move(levels));
}

std::size_t Spectrum::dimension() const {
  std::size_t n = 0;
  for (const auto& l : levels_) n += l.multiplicity;
  return n;
}

double Spectrum::sum() const {
  double s = 0.0;
  for (const auto& l : levels_) s += l.value * static_cast<double>(l.multiplicity);
  return s;
}

double Spectrum::min() const { return levels_.empty() ? 0.0 : levels_.back().value; }
double Spectrum::max() const { return levels_.empty() ? 0.0 : levels_.front().value; }

std::vector<double> Spectrum::values() const {
  std::vector<double> out;
  out.reserve(dimension());
  for (const auto& l : levels_) out.insert(out.end(), l.multiplicity, l.value);
  return out;
}

SpectrumMatch compare_spectra(const Spectrum& a, const Spectrum& b) {
  SpectrumMatch m;
  const auto& la = a.levels();
  const auto& lb = b.levels();
  m.same_multiplicities = la.size() == lb.size();
  for (std::size_t i = 0; m.same_multiplicities && i < la.size(); ++i)
    m.same_multiplicities = la[i].multiplicity == lb[i].multiplicity;
  const auto va = a.values();
  const auto vb = b.values();
  if (va.size() != vb.size()) {
    m.max_deviation = std::numeric_limits<double>::infinity();
    return m;
  }
  for (std::size_t i = 0; i < va.size(); ++i) m.max_deviation = std::max(m.max_deviation, std::abs(va[i] - vb[i]));
  return m;
}

// --- tensor operations ------------------------------------------------------

Operator kron(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  Dims out_dims = a.dims_out();
  out_dims.insert(out_dims.end(), b.dims_out().begin(), b.dims_out().end());
  Dims in_dims = a.dims_in();
  in_dims.insert(in_dims.end(), b.dims_in().begin(), b.dims_in().end());
  return Operator(std::move(out_dims), std::move(in_dims), std::move(out));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  Operator k = kron(a.as_operator(), b.as_operator());
  return DensityMatrix::unchecked(k.dims_out(), k.matrix());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
  const Dims& dims = rho.dims();
  const IndexSet kept = validated_subset(keep, dims.size(), "partial_trace");
  if (kept.empty()) throw DomainError("partial_trace: keep set is empty");
  if (kept.size() == dims.size()) return rho;

  std::vector<bool> is_kept(dims.size(), false);
  for (auto q : kept) is_kept[q] = true;
  Dims kept_dims, traced_dims;
  for (std::size_t q = 0; q < dims.size(); ++q)
    (is_kept[q] ? kept_dims : traced_dims).push_back(dims[q]);

  const auto strides = strides_of(dims);
  const auto kept_strides = strides_of(kept_dims);
  const auto traced_strides = strides_of(traced_dims);
  const std::size_t n_kept = total_dimension(kept_dims);
  const std::size_t n_traced = total_dimension(traced_dims);

  // groups[t][k] = full index whose traced digits encode t and kept digits k.
  std::vector<std::vector<std::size_t>> groups(n_traced, std::vector<std::size_t>(n_kept));
  for (std::size_t i = 0; i < rho.dimension(); ++i) {
    std::size_t k = 0, t = 0, ki = 0, ti = 0;
    for (std::size_t q = 0; q < dims.size(); ++q) {
      const std::size_t digit = (i / strides[q]) % dims[q];
      if (is_kept[q]) k += digit * kept_strides[ki++];
      else t += digit * traced_strides[ti++];
    }
    groups[t][k] = i;
  }

  const Matrix& m = rho.matrix();
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(n_kept), static_cast<Eigen::Index>(n_kept));
  for (const auto& g : groups)
    for (std::size_t r = 0; r < n_kept; ++r)
      for (std::size_t c = 0; c < n_kept; ++c) out(r, c) += m(g[r], g[c]);
  return DensityMatrix::unchecked(std::move(kept_dims), std::move(out));
}

Operator partial_transpose(const DensityMatrix& rho, std::span<const std::size_t> subset) {
  const Dims& dims = rho.dims();
  const IndexSet s = validated_subset(subset, dims.size(), "partial_transpose");
  const auto strides = strides_of(dims);
  const std::size_t n = rho.dimension();

  // Split each flat index into the part carried by `s` and the rest.
  std::vector<std::size_t> sub(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (auto q : s) sub[i] += ((i / strides[q]) % dims[q]) * strides[q];

  const Matrix& m = rho.matrix();
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rest_i = i - sub[i];
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t rest_j = j - sub[j];
      out(rest_i + sub[j], rest_j + sub[i]) = m(i, j);
    }
  }
  return Operator(dims, std::move(out));
}

EigenDecomposition hermitian_eigen(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return {es.eigenvalues(), es.eigenvectors()};
}

Spectrum hermitian_spectrum(const Operator& op, double cluster_tol) {
  const Matrix& m = op.matrix();
  if (m.rows() != m.cols()) throw DomainError("hermitian_spectrum: matrix is not square");
  const double defect = hermitian_defect(m);
  if (defect > kHermitianTol)
    throw DomainError("hermitian_spectrum: matrix is not Hermitian (defect " +
                      std::to_string(defect) + ")");
  const Matrix h = (m + m.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return Spectrum::from_values(std::vector<double>(ev.data(), ev.data() + ev.size()), cluster_tol);
}

Spectrum hermitian_spectrum(const DensityMatrix& rho, double cluster_tol) {
  return hermitian_spectrum(rho.as_operator(), cluster_tol);
}

Operator permutation_operator(const Dims& dims, std::span<const std::size_t> order) {
  check_order(dims, order);
  const auto map = permutation_map(dims, order);
  Dims new_dims(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) new_dims[p] = dims[order[p]];
  const auto n = static_cast<Eigen::Index>(map.size());
  Matrix u = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < map.size(); ++i) u(map[i], i) = 1.0;
  return Operator(std::move(new_dims), dims, std::move(u));
}

DensityMatrix permute_subsystems(const DensityMatrix& rho, std::span<const std::size_t> order) {
  const Dims& dims = rho.dims();
  check_order(dims, order);
  const auto map = permutation_map(dims, order);
  Dims new_dims(dims.size());
  for (std::size_t p = 0; p < dims.size(); ++p) new_dims[p] = dims[order[p]];
  const Matrix& m = rho.matrix();
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < map.size(); ++i)
    for (std::size_t j = 0; j < map.size(); ++j) out(map[i], map[j]) = m(i, j);
  return DensityMatrix::unchecked(std::move(new_dims), std::move(out));
}

Matrix symmetrize_blocks(const Matrix& m, const Dims& dims, const std::vector<IndexSet>& blocks) {
  const std::size_t n = total_dimension(dims);
  if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n)
    throw DomainError("symmetrize_blocks: matrix does not match dims");
  std::vector<bool> used(dims.size(), false);
  for (const auto& b : blocks) {
    for (auto q : b) {
      if (q >= dims.size() || used[q]) throw DomainError("symmetrize_blocks: invalid blocks");
      used[q] = true;
      if (dims[q] != dims[b.front()])
        throw DomainError("symmetrize_blocks: block has unequal local dimensions");
    }
  }

  // Index maps for every element of the product of the block symmetric groups.
  std::vector<std::vector<std::size_t>> maps;
  std::vector<IndexSet> perms;
  for (const auto& b : blocks) perms.emplace_back(b.begin(), b.end());
  for (auto& p : perms) std::sort(p.begin(), p.end());
  const auto advance = [&]() {
    for (auto& p : perms)
      if (std::next_permutation(p.begin(), p.end())) return true;
    return false;
  };
  do {
    IndexSet order(dims.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
      IndexSet sorted(blocks[bi].begin(), blocks[bi].end());
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t t = 0; t < sorted.size(); ++t) order[sorted[t]] = perms[bi][t];
    }
    maps.push_back(permutation_map(dims, order));
  } while (advance());

  const double weight = 1.0 / static_cast<double>(maps.size());
  Matrix cols = Matrix::Zero(m.rows(), m.cols());
  for (const auto& f : maps)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) cols(r, c) += m(r, f[c]);
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const auto& f : maps)
    for (std::size_t r = 0; r < n; ++r) out.row(r) += cols.row(f[r]);
  return out * (weight * weight);
}

Operator antisymmetric_projector(std::size_t d) {
  if (d < 2) throw DomainError("antisymmetric_projector: d must be >= 2");
  const Dims dims{d, d};
  const std::size_t swap_order[] = {1, 0};
  const Operator swap = permutation_operator(dims, swap_order);
  return Operator(dims, (Operator::identity(dims).matrix() - swap.matrix()) * 0.5);
}

Operator symmetric_projector(std::size_t d, std::size_t k) {
  if (d < 2 || k < 1) throw DomainError("symmetric_projector: need d >= 2 and k >= 1");
  const Dims dims(k, d);
  check_dimension(dims);
  IndexSet all(k);
  std::iota(all.begin(), all.end(), 0);
  return Operator(dims, symmetrize_blocks(Operator::identity(dims).matrix(), dims, {all}));
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("max_abs_diff: shape mismatch");
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gmc
