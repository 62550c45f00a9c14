#include "gmc/classify.hpp"
#include "gmc/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gmc;

namespace {

// (3d-1)(d-1)^{d-1} / (d^d (d+1)) evaluated with long double.
double barrett_oracle(std::size_t d) {
  long double num = 3.0L * d - 1.0L;
  for (std::size_t i = 0; i + 1 < d; ++i) num *= (d - 1.0L);
  long double den = d + 1.0L;
  for (std::size_t i = 0; i < d; ++i) den *= d;
  return static_cast<double>(num / den);
}

FamilySpec spec(FamilyKind kind, std::size_t d, std::size_t N, double eta, std::size_t k = 0, std::size_t l = 0) {
  return FamilySpec{kind, d, N, k, l, eta};
}

Verdict v(const ClassificationReport& r, Layer layer) { return r[layer].verdict; }

}  // namespace

TEST_CASE("harmonic numbers") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(2) == 1.5);
  CHECK(harmonic(3) == doctest::Approx(11.0 / 6).epsilon(1e-15));
  CHECK_THROWS_AS(harmonic(0), DomainError);
}

TEST_CASE("threshold values at d = 2 and d = 3") {
  const auto w2 = werner_thresholds(2);
  CHECK(w2.separable_upper == 1.0 / 3);
  CHECK(*w2.unsteerable_povm_upper == 5.0 / 12);
  CHECK_FALSE(w2.steering_lower.has_value());

  const auto i2 = isotropic_thresholds(2);
  CHECK(i2.separable_upper == 1.0 / 3);
  CHECK(*i2.steering_lower == 0.5);
  CHECK(*i2.nonlocal_lower == 5.0 / 12);

  const auto w3 = werner_thresholds(3);
  CHECK(w3.separable_upper == 0.25);
  CHECK(*w3.unsteerable_povm_upper == doctest::Approx(8.0 / 27).epsilon(1e-15));
  CHECK(*isotropic_thresholds(3).steering_lower == doctest::Approx(5.0 / 12).epsilon(1e-15));

  CHECK_THROWS_AS(werner_thresholds(1), DomainError);
  CHECK_THROWS_AS(isotropic_thresholds(1), DomainError);
}

TEST_CASE("threshold sweep over d = 2..10") {
  double prev_sep = 1.0;
  for (std::size_t d = 2; d <= 10; ++d) {
    CAPTURE(d);
    const auto w = werner_thresholds(d);
    const auto i = isotropic_thresholds(d);
    CHECK(*w.unsteerable_povm_upper > w.separable_upper);
    CHECK(*w.unsteerable_povm_upper == doctest::Approx(barrett_oracle(d)).epsilon(1e-14));
    CHECK(*i.nonlocal_lower == doctest::Approx(barrett_oracle(d)).epsilon(1e-14));
    CHECK(i.separable_upper < *i.steering_lower);
    CHECK(w.separable_upper < prev_sep);
    for (double t : {w.separable_upper, *w.unsteerable_povm_upper, *i.steering_lower, *i.nonlocal_lower}) {
      CHECK(t >= 0.0);
      CHECK(t <= 1.0);
    }
    prev_sep = w.separable_upper;
  }
}

TEST_CASE("Werner d=2, eta=0.4") {
  const auto r = classify(spec(FamilyKind::Werner, 2, 2, 0.4));
  CHECK(v(r, Layer::Entangled) == Verdict::In);
  CHECK(v(r, Layer::Steerable) == Verdict::Out);
  CHECK(v(r, Layer::Nonlocal) == Verdict::Out);
  CHECK(v(r, Layer::GMTPositive) == Verdict::In);
  for (Layer layer : kAllLayers) CHECK_FALSE(r[layer].justification.empty());
  CHECK(chain_violations(r).empty());
}

TEST_CASE("Werner boundary and gap") {
  // eta exactly 1/(d+1) is unentangled.
  CHECK(v(classify(spec(FamilyKind::Werner, 2, 2, 1.0 / 3)), Layer::Entangled) == Verdict::Out);
  const auto gap = classify(spec(FamilyKind::Werner, 2, 2, 0.6));
  CHECK(v(gap, Layer::Entangled) == Verdict::In);
  CHECK(v(gap, Layer::Steerable) == Verdict::Unknown);
  const auto sep = classify(spec(FamilyKind::Werner, 3, 2, 0.1));
  for (Layer layer : {Layer::Entangled, Layer::Steerable, Layer::Nonlocal, Layer::GME, Layer::GMS, Layer::GMNL})
    CHECK(v(sep, layer) == Verdict::Out);
}

TEST_CASE("isotropic ranges") {
  const auto lo = classify(spec(FamilyKind::Isotropic, 2, 2, 0.45));
  CHECK(v(lo, Layer::Entangled) == Verdict::In);
  CHECK(v(lo, Layer::Steerable) == Verdict::Out);
  CHECK(v(lo, Layer::Nonlocal) == Verdict::Out);

  const auto boundary = classify(spec(FamilyKind::Isotropic, 2, 2, 0.5));
  CHECK(v(boundary, Layer::Steerable) == Verdict::Out);

  const auto hi = classify(spec(FamilyKind::Isotropic, 2, 2, 0.8));
  CHECK(v(hi, Layer::Entangled) == Verdict::In);
  CHECK(v(hi, Layer::Steerable) == Verdict::In);
  CHECK(v(hi, Layer::Nonlocal) == Verdict::In);
  CHECK(chain_violations(hi).empty());
}

TEST_CASE("lifted Werner d=2, k=2, l=1, eta=0.4: GME but not GMS") {
  const auto r = classify(spec(FamilyKind::LiftedWerner, 2, 3, 0.4, 2, 1));
  CHECK(v(r, Layer::GME) == Verdict::In);
  CHECK(v(r, Layer::GMS) == Verdict::Out);
  CHECK(v(r, Layer::GMNL) == Verdict::Out);
  CHECK(v(r, Layer::Entangled) == Verdict::In);
  CHECK(v(r, Layer::GMTPositive) == Verdict::In);
  CHECK(r[Layer::GME].justification.find("NPT") != std::string::npos);
  CHECK(chain_violations(r).empty());

  const auto sep = classify(spec(FamilyKind::LiftedWerner, 2, 3, 0.3, 2, 1));
  CHECK(v(sep, Layer::GME) == Verdict::Out);
}

TEST_CASE("symmetrized lifted isotropic d=2, N=3, eta=1/4: GMT but not GME") {
  const auto r = classify(spec(FamilyKind::SymmetrizedLiftedIsotropic, 2, 3, 0.25));
  CHECK(v(r, Layer::GME) == Verdict::Out);
  CHECK(v(r, Layer::GMS) == Verdict::Out);
  CHECK(v(r, Layer::GMNL) == Verdict::Out);
  CHECK(v(r, Layer::GMTPositive) == Verdict::In);
  CHECK(chain_violations(r).empty());
  CHECK(verdict_summary(r).find("GME=OUT") != std::string::npos);
  CHECK(verdict_summary(r).find("GMT-positive=IN") != std::string::npos);
}

TEST_CASE("GHZ is not classifiable") {
  CHECK_THROWS_AS(classify(spec(FamilyKind::GHZ, 2, 3, 1.0)), DomainError);
}

TEST_CASE("crossing 1/(d+1) flips only entanglement-derived verdicts") {
  const double eps = 1e-6;
  for (std::size_t d : {2, 3})
    for (std::size_t N : {3, 4}) {
      if (d == 3 && N == 4) continue;
      CAPTURE(d);
      CAPTURE(N);
      const double t = 1.0 / (d + 1.0);
      const auto below = classify(spec(FamilyKind::SymmetrizedLiftedIsotropic, d, N, t - eps));
      const auto above = classify(spec(FamilyKind::SymmetrizedLiftedIsotropic, d, N, t + eps));
      CHECK(v(below, Layer::Entangled) == Verdict::Out);
      CHECK(v(above, Layer::Entangled) == Verdict::In);
      CHECK(v(below, Layer::GME) == Verdict::Out);
      CHECK(v(above, Layer::GME) != Verdict::Out);
      for (Layer layer : {Layer::Steerable, Layer::Nonlocal, Layer::GMS, Layer::GMNL, Layer::GMTPositive})
        CHECK(v(below, layer) == v(above, layer));
    }
}

TEST_CASE("reports are chain consistent over random specs") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double eta = trial % 10 == 0 ? std::round(unit(rng) * 12) / 12 : unit(rng);
    const std::size_t d = 2 + rng() % 2;
    FamilySpec s;
    switch (trial % 4) {
      case 0: s = spec(FamilyKind::Werner, d + rng() % 3, 2, eta); break;
      case 1: s = spec(FamilyKind::Isotropic, d + rng() % 3, 2, eta); break;
      case 2: {
        const std::size_t k = 1 + rng() % 2;
        s = spec(FamilyKind::LiftedWerner, d, k + 1, eta, k, 1);
        break;
      }
      default: s = spec(FamilyKind::SymmetrizedLiftedIsotropic, 2, 2 + rng() % 3, eta); break;
    }
    CAPTURE(s.to_string());
    const auto r = classify(s);
    CHECK(chain_violations(r).empty());
  }
}

TEST_CASE("chain closure propagates and rejects contradictions") {
  ClassificationReport r;
  r[Layer::GMNL] = {Verdict::In, "given"};
  close_under_chain(r);
  CHECK(v(r, Layer::GMS) == Verdict::In);
  CHECK(v(r, Layer::GME) == Verdict::In);
  CHECK(v(r, Layer::GMTPositive) == Verdict::In);
  CHECK(v(r, Layer::Entangled) == Verdict::Unknown);

  ClassificationReport o;
  o[Layer::Entangled] = {Verdict::Out, "given"};
  close_under_chain(o);
  CHECK(v(o, Layer::Steerable) == Verdict::Out);
  CHECK(v(o, Layer::Nonlocal) == Verdict::Out);

  ClassificationReport bad;
  bad[Layer::GMS] = {Verdict::Out, "given"};
  bad[Layer::GMNL] = {Verdict::In, "given"};
  CHECK_FALSE(chain_violations(bad).empty());
  CHECK_THROWS_AS(close_under_chain(bad), InvariantError);
}
