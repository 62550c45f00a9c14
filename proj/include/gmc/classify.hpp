#pragma once

// Threshold ranges for the Werner and isotropic families and three-valued
// classification of family members into the correlation hierarchy.

#include "gmc/families.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmc {

double harmonic(std::size_t d);

enum class ThresholdFamily { Werner, Isotropic };

struct ThresholdSet {
  ThresholdFamily family = ThresholdFamily::Werner;
  std::size_t d = 2;
  double separable_upper = 0.0;                  // eta <= this: separable
  std::optional<double> unsteerable_povm_upper;  // Werner: eta in (sep, this) unsteerable
  std::optional<double> steering_lower;          // isotropic: steerable iff eta > this
  std::optional<double> nonlocal_lower;          // isotropic: nonlocal range (this, 1]
};

// separable_upper = 1/(d+1), unsteerable_povm_upper = (3d-1)(d-1)^{d-1} d^{-d} / (d+1).
ThresholdSet werner_thresholds(std::size_t d);
// separable_upper = 1/(d+1), steering_lower = (H_d-1)/(d-1),
// nonlocal_lower = (3d-1)(d-1)^{d-1} / (d^d (d+1)).
ThresholdSet isotropic_thresholds(std::size_t d);

enum class Verdict { In, Out, Unknown };
enum class Layer { Entangled, Steerable, Nonlocal, GME, GMS, GMNL, GMTPositive };

inline constexpr std::array<Layer, 7> kAllLayers{Layer::Entangled, Layer::Steerable, Layer::Nonlocal,
                                                 Layer::GME,       Layer::GMS,       Layer::GMNL,
                                                 Layer::GMTPositive};

std::string_view layer_name(Layer layer);
std::string_view verdict_name(Verdict verdict);

struct LayerVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string justification;
};

struct ClassificationReport {
  FamilySpec spec;
  std::array<LayerVerdict, kAllLayers.size()> layers;

  const LayerVerdict& operator[](Layer layer) const { return layers[static_cast<std::size_t>(layer)]; }
  LayerVerdict& operator[](Layer layer) { return layers[static_cast<std::size_t>(layer)]; }
};

// Inclusion pairs (outer contains inner): entangled > steerable > nonlocal and
// GMT > GME > GMS > GMNL.
inline constexpr std::array<std::pair<Layer, Layer>, 5> kInclusionChain{{
    {Layer::Entangled, Layer::Steerable},
    {Layer::Steerable, Layer::Nonlocal},
    {Layer::GMTPositive, Layer::GME},
    {Layer::GME, Layer::GMS},
    {Layer::GMS, Layer::GMNL},
}};

// Descriptions of every inclusion pair the report violates (inner IN while
// outer is not IN, or outer OUT while inner is not OUT). Empty when consistent.
std::vector<std::string> chain_violations(const ClassificationReport& report);

// Propagates IN outward and OUT inward along the inclusion chain, then checks
// consistency (InvariantError on a contradiction).
void close_under_chain(ClassificationReport& report);

struct ClassifyOptions {
  std::size_t dim_cap = kDefaultDimCap;
};

// Supported: Werner, Isotropic, LiftedWerner, SymmetrizedLiftedIsotropic.
// GHZ -> DomainError.
ClassificationReport classify(const FamilySpec& spec, const ClassifyOptions& options = {});

// "entangled=IN;steerable=OUT;..." in layer order.
std::string verdict_summary(const ClassificationReport& report);

}  // namespace gmc
