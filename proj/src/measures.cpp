#include "gmc/measures.hpp"

#include "gmc/errors.hpp"
#include "gmc/families.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <unordered_map>

namespace gmc {

namespace {

std::uint64_t block_mask(const Block& b) {
  std::uint64_t m = 0;
  for (auto q : b) m |= std::uint64_t{1} << q;
  return m;
}

void check_partition_matches(const DensityMatrix& rho, const Partition& p, const char* what) {
  if (p.parties() != rho.parties())
    throw DomainError(std::string(what) + ": partition does not match the number of subsystems");
}

void check_bipartition(const DensityMatrix& rho, const Partition& p, const char* what) {
  check_partition_matches(rho, p, what);
  if (p.block_count() != 2) throw DomainError(std::string(what) + ": partition is not a bipartition");
}

}  // namespace

double xlog2x(double x) { return x < kZeroProbability ? 0.0 : x * std::log2(x); }

double entropy(const Spectrum& s) {
  double h = 0.0;
  for (const auto& l : s.levels()) h -= static_cast<double>(l.multiplicity) * xlog2x(l.value);
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) { return entropy(hermitian_spectrum(rho)); }

double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dims() != sigma.dims()) throw DomainError("relative_entropy: dimension mismatch");
  const EigenDecomposition es = hermitian_eigen(sigma.matrix());
  const Eigen::MatrixXcd rho_in_sigma = es.vectors.adjoint() * rho.matrix() * es.vectors;

  double cross = 0.0;  // tr rho log sigma
  double outside = 0.0;
  for (Eigen::Index j = 0; j < es.values.size(); ++j) {
    const double w = rho_in_sigma(j, j).real();
    if (es.values(j) <= kSupportTol) outside += w;
    else cross += w * std::log2(es.values(j));
  }
  if (outside > kSupportTol) return std::numeric_limits<double>::infinity();
  return -von_neumann_entropy(rho) - cross;
}

DensityMatrix marginal_product(const DensityMatrix& rho, const Partition& p) {
  check_partition_matches(rho, p, "marginal_product");
  const auto& blocks = p.blocks();
  DensityMatrix product = partial_trace(rho, blocks.front());
  IndexSet concat(blocks.front());
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    product = kron(product, partial_trace(rho, blocks[i]));
    concat.insert(concat.end(), blocks[i].begin(), blocks[i].end());
  }
  IndexSet order(concat.size());
  for (std::size_t pos = 0; pos < concat.size(); ++pos) order[concat[pos]] = pos;
  return permute_subsystems(product, order);
}

CorrelationResult partition_correlation(const DensityMatrix& rho, const Partition& p) {
  check_partition_matches(rho, p, "partition_correlation");
  CorrelationResult r;
  r.argmin = p;
  r.total_entropy = von_neumann_entropy(rho);
  r.value = -r.total_entropy;
  for (const auto& b : p.blocks()) {
    r.per_block_entropies.push_back(von_neumann_entropy(partial_trace(rho, b)));
    r.value += r.per_block_entropies.back();
  }
  return r;
}

CorrelationResult genuine_total_correlation(const DensityMatrix& rho, std::size_t k) {
  const std::size_t n = rho.parties();
  if (n > 64) throw ResourceError("genuine_total_correlation: too many subsystems");
  if (k < 1 || k + 1 > n) throw DomainError("genuine_total_correlation: need 1 <= k <= N-1");

  std::unordered_map<std::uint64_t, double> block_entropy;
  const auto entropy_of = [&](const Block& b) {
    const auto key = block_mask(b);
    auto it = block_entropy.find(key);
    if (it == block_entropy.end())
      it = block_entropy.emplace(key, von_neumann_entropy(partial_trace(rho, b))).first;
    return it->second;
  };

  const double total = von_neumann_entropy(rho);
  // Every partition within the tie tolerance of the running minimum is kept, so
  // the final choice does not depend on traversal order.
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Partition>> candidates;
  PartitionCursor cursor(n, k);
  while (auto p = cursor.next()) {
    double value = -total;
    for (const auto& b : p->blocks()) value += entropy_of(b);
    if (value > best + kArgminTieTol) continue;
    if (value < best) {
      best = value;
      std::erase_if(candidates, [&](const auto& c) { return c.first > best + kArgminTieTol; });
    }
    candidates.emplace_back(value, std::move(*p));
  }

  const auto* chosen = &candidates.front();
  for (const auto& c : candidates)
    if (c.second < chosen->second) chosen = &c;

  CorrelationResult r;
  r.argmin = chosen->second;
  r.total_entropy = total;
  r.value = -total;
  for (const auto& b : r.argmin.blocks()) {
    r.per_block_entropies.push_back(entropy_of(b));
    r.value += r.per_block_entropies.back();
  }
  return r;
}

double dtot_closed_form(std::size_t d, std::size_t N, double eta) {
  if (d < 2 || N < 3) throw DomainError("dtot_closed_form: need d >= 2 and N >= 3");
  const auto co = SlisCoefficients::compute(d, N, eta);
  const double dd = static_cast<double>(d);
  const double pairs = dd * dd - dd;
  const double m_n = static_cast<double>(bipartition_count(N));
  const double m_b = static_cast<double>(bipartition_count(N - 1));
  return std::log2(dd) - dd * xlog2x(co.a_prime) - m_b * pairs * xlog2x(co.b_prime) +
         (dd - 1.0) * xlog2x(co.a - co.c) + xlog2x(co.a + (dd - 1.0) * co.c) +
         pairs * m_n * xlog2x(co.b);
}

PptReport is_npt(const DensityMatrix& rho, const Partition& bipartition) {
  check_bipartition(rho, bipartition, "is_npt");
  const Operator pt = partial_transpose(rho, bipartition.blocks()[0]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(pt.matrix(), Eigen::EigenvaluesOnly);
  PptReport r;
  r.min_pt_eigenvalue = es.eigenvalues().minCoeff();
  r.npt = r.min_pt_eigenvalue < -kNptTol;
  return r;
}

WitnessVerdict gme_symmetric_witness(const DensityMatrix& rho, const Partition& bipartition) {
  check_bipartition(rho, bipartition, "gme_symmetric_witness");
  const Matrix projected = symmetrize_blocks(rho.matrix(), rho.dims(), bipartition.blocks());
  WitnessVerdict v;
  v.symmetry_defect = (projected - rho.matrix()).norm();
  v.min_pt_eigenvalue = is_npt(rho, bipartition).min_pt_eigenvalue;
  v.holds = v.symmetry_defect <= kSymmetryTol && v.min_pt_eigenvalue < -kNptTol;
  return v;
}

}  // namespace gmc
