#pragma once

// Constructors for the multipartite qudit state families: GHZ, Werner,
// isotropic, their basis-copy lifts, and the symmetrized lifted isotropic
// state, together with closed-form spectra for the latter.

#include "gmc/tensor.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace gmc {

enum class FamilyKind { GHZ, Werner, Isotropic, LiftedWerner, SymmetrizedLiftedIsotropic };

std::string_view family_name(FamilyKind kind);  // "ghz", "werner", ... (textual prefix)

// Symbolic descriptor of a family member. Textual form:
//   ghz:d=2,N=3   werner:d=2,eta=0.4   isotropic:d=3,eta=0.5
//   lifted-werner:d=2,k=2,l=1,eta=0.5   slis:d=2,N=3,eta=0.25
struct FamilySpec {
  FamilyKind kind = FamilyKind::GHZ;
  std::size_t d = 2;
  std::size_t N = 2;
  std::size_t k = 0;  // LiftedWerner only, k + l == N
  std::size_t l = 0;
  double eta = 1.0;

  // Throws DomainError when the fields violate the family's constraints.
  void validate() const;
  std::string to_string() const;

  // Parses and validates. Unknown family or malformed fields -> ParseError;
  // parameters out of range -> DomainError. With allow_missing_eta the eta
  // field may be omitted (sweep templates).
  static FamilySpec parse(std::string_view text, bool allow_missing_eta = false);

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

DensityMatrix ghz(std::size_t d, std::size_t N);
DensityMatrix werner(std::size_t d, double eta);
DensityMatrix isotropic(std::size_t d, double eta);

// V = sum_i (|i>^{(x)copies}) <i|.
Operator lift_isometry(std::size_t d, std::size_t copies);

// (V_k (x) V_l) W (V_k (x) V_l)^dagger: the first k parties form A', the last l form B'.
DensityMatrix lifted_werner(std::size_t d, std::size_t k, std::size_t l, double eta);
DensityMatrix lifted_isotropic(std::size_t d, std::size_t k, std::size_t l, double eta);

// Uniform mixture over all 2^{N-1}-1 bipartitions A'|B' of the isotropic state
// lifted onto A'|B'.
DensityMatrix symmetrized_lifted_isotropic(std::size_t d, std::size_t N, double eta,
                                           std::size_t dim_cap = kDefaultDimCap);

DensityMatrix build_state(const FamilySpec& spec, std::size_t dim_cap = kDefaultDimCap);

// Matrix-element coefficients of the symmetrized lifted isotropic state and
// of its (N-1)-party marginal.
struct SlisCoefficients {
  double a = 0.0;        // diagonal on the d GHZ-aligned basis states
  double b = 0.0;        // diagonal on the two-letter block patterns
  double c = 0.0;        // coherence between GHZ-aligned states
  double a_prime = 0.0;  // (N-1)-party marginal, GHZ-aligned states
  double b_prime = 0.0;  // (N-1)-party marginal, two-letter patterns

  static SlisCoefficients compute(std::size_t d, std::size_t N, double eta);

  // d*a + (d^2-d)(2^{N-1}-1)*b - 1
  double normalization_residual(std::size_t d, std::size_t N) const;
  // d*a' + (2^{N-2}-1)(d^2-d)*b' - 1
  double marginal_normalization_residual(std::size_t d, std::size_t N) const;
};

// 2^{n-1} - 1, the number of bipartitions of n parties.
std::size_t bipartition_count(std::size_t n);

// Four-level closed-form spectrum (zero-multiplicity levels dropped, coincident
// levels merged at kClusterTol). Only for SymmetrizedLiftedIsotropic.
Spectrum analytic_spectrum(const FamilySpec& spec);
Spectrum analytic_spectrum(std::size_t d, std::size_t N, const SlisCoefficients& coeffs);

// Closed-form spectrum of the marginal on parties 2..N. Requires N >= 3.
Spectrum reduced_spectrum_B(const FamilySpec& spec);

}  // namespace gmc
