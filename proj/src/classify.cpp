#include "gmc/classify.hpp"

#include "gmc/errors.hpp"
#include "gmc/measures.hpp"

#include <cmath>
#include <cstdio>

namespace gmc {

namespace {

constexpr double kPositiveCorrelation = 1e-9;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

LayerVerdict in(std::string why) { return {Verdict::In, std::move(why)}; }
LayerVerdict out(std::string why) { return {Verdict::Out, std::move(why)}; }
LayerVerdict unknown(std::string why) { return {Verdict::Unknown, std::move(why)}; }

// (3d-1)(d-1)^{d-1} / (d^d (d+1)), shared by the Werner POVM-unsteerable bound
// and the isotropic nonlocal bound.
double barrett_bound(std::size_t d) {
  const double dd = static_cast<double>(d);
  return (3.0 * dd - 1.0) * std::pow((dd - 1.0) / dd, dd - 1.0) / (dd * (dd + 1.0));
}

// Bipartite entangled/steerable/nonlocal verdicts of a Werner state.
void werner_layers(ClassificationReport& r, const ThresholdSet& t, double eta, std::string_view scope) {
  const std::string tag(scope);
  r[Layer::Entangled] = eta > t.separable_upper
                            ? in(tag + "eta=" + num(eta) + " > 1/(d+1)=" + num(t.separable_upper))
                            : out(tag + "separable: eta=" + num(eta) + " <= 1/(d+1)=" + num(t.separable_upper));
  const double u = *t.unsteerable_povm_upper;
  r[Layer::Steerable] =
      eta < u ? out(tag + "LHS model under POVMs: eta=" + num(eta) + " < " + num(u))
              : unknown(tag + "eta=" + num(eta) + " >= " + num(u) + ": steerability not settled");
  r[Layer::Nonlocal] = unknown(tag + "no nonlocal range known for this family");
}

void isotropic_layers(ClassificationReport& r, const ThresholdSet& t, double eta, std::string_view scope) {
  const std::string tag(scope);
  r[Layer::Entangled] = eta > t.separable_upper
                            ? in(tag + "eta=" + num(eta) + " > 1/(d+1)=" + num(t.separable_upper))
                            : out(tag + "separable: eta=" + num(eta) + " <= 1/(d+1)=" + num(t.separable_upper));
  const double s = *t.steering_lower;
  const double nl = *t.nonlocal_lower;
  const bool steerable = eta > s;
  r[Layer::Steerable] = steerable ? in(tag + "eta=" + num(eta) + " in steering range (" + num(s) + ", 1]")
                                  : out(tag + "eta=" + num(eta) + " <= (H_d-1)/(d-1)=" + num(s));
  if (eta <= nl)
    r[Layer::Nonlocal] = out(tag + "eta=" + num(eta) + " <= " + num(nl) + ": outside nonlocal range");
  else if (steerable)
    r[Layer::Nonlocal] = in(tag + "eta=" + num(eta) + " in nonlocal range (" + num(nl) + ", 1]");
  else
    r[Layer::Nonlocal] = out(tag + "not steerable; nonlocal range (" + num(nl) +
                             ", 1] overlaps the unsteerable range, chain takes precedence");
}

void copy_bipartite_to_genuine(ClassificationReport& r) {
  const auto copy = [&](Layer from, Layer to) {
    r[to] = {r[from].verdict, "two parties: same as " + std::string(layer_name(from)) + " (" +
                                  r[from].justification + ")"};
  };
  copy(Layer::Entangled, Layer::GME);
  copy(Layer::Steerable, Layer::GMS);
  copy(Layer::Nonlocal, Layer::GMNL);
}

LayerVerdict numeric_gmt(const DensityMatrix& rho) {
  const auto res = genuine_total_correlation(rho, rho.parties() - 1);
  const std::string v = "D_tot=" + num(res.value) + " bits (argmin " + res.argmin.to_string() + ")";
  return res.value > kPositiveCorrelation ? in(v + " > 0") : out(v + ": product across a partition");
}

Partition lift_bipartition(std::size_t k, std::size_t l) {
  Block a, b;
  for (std::size_t q = 0; q < k; ++q) a.push_back(q);
  for (std::size_t q = k; q < k + l; ++q) b.push_back(q);
  return Partition({a, b}, k + l);
}

}  // namespace

double harmonic(std::size_t d) {
  if (d < 1) throw DomainError("harmonic: d must be >= 1");
  double h = 0.0;
  for (std::size_t n = d; n >= 1; --n) h += 1.0 / static_cast<double>(n);
  return h;
}

ThresholdSet werner_thresholds(std::size_t d) {
  if (d < 2) throw DomainError("werner_thresholds: d must be >= 2");
  ThresholdSet t;
  t.family = ThresholdFamily::Werner;
  t.d = d;
  t.separable_upper = 1.0 / static_cast<double>(d + 1);
  t.unsteerable_povm_upper = barrett_bound(d);
  return t;
}

ThresholdSet isotropic_thresholds(std::size_t d) {
  if (d < 2) throw DomainError("isotropic_thresholds: d must be >= 2");
  ThresholdSet t;
  t.family = ThresholdFamily::Isotropic;
  t.d = d;
  t.separable_upper = 1.0 / static_cast<double>(d + 1);
  t.steering_lower = (harmonic(d) - 1.0) / static_cast<double>(d - 1);
  t.nonlocal_lower = barrett_bound(d);
  return t;
}

std::string_view layer_name(Layer layer) {
  switch (layer) {
    case Layer::Entangled: return "entangled";
    case Layer::Steerable: return "steerable";
    case Layer::Nonlocal: return "nonlocal";
    case Layer::GME: return "GME";
    case Layer::GMS: return "GMS";
    case Layer::GMNL: return "GMNL";
    case Layer::GMTPositive: return "GMT-positive";
  }
  return "?";
}

std::string_view verdict_name(Verdict verdict) {
  switch (verdict) {
    case Verdict::In: return "IN";
    case Verdict::Out: return "OUT";
    case Verdict::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::vector<std::string> chain_violations(const ClassificationReport& report) {
  std::vector<std::string> v;
  for (const auto& [outer, inner] : kInclusionChain) {
    const Verdict o = report[outer].verdict;
    const Verdict i = report[inner].verdict;
    if ((i == Verdict::In && o != Verdict::In) || (o == Verdict::Out && i != Verdict::Out))
      v.push_back(std::string(layer_name(inner)) + "=" + std::string(verdict_name(i)) + " with " +
                  std::string(layer_name(outer)) + "=" + std::string(verdict_name(o)));
  }
  return v;
}

void close_under_chain(ClassificationReport& report) {
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [outer, inner] : kInclusionChain) {
      auto& o = report[outer];
      auto& i = report[inner];
      if (i.verdict == Verdict::In && o.verdict == Verdict::Out)
        throw InvariantError("classification contradicts the inclusion chain: " +
                             std::string(layer_name(inner)) + "=IN but " +
                             std::string(layer_name(outer)) + "=OUT");
      if (i.verdict == Verdict::In && o.verdict == Verdict::Unknown) {
        o = in("chain: implied by " + std::string(layer_name(inner)) + "=IN");
        changed = true;
      }
      if (o.verdict == Verdict::Out && i.verdict == Verdict::Unknown) {
        i = out("chain: implied by " + std::string(layer_name(outer)) + "=OUT");
        changed = true;
      }
    }
  }
  if (auto v = chain_violations(report); !v.empty())
    throw InvariantError("classification contradicts the inclusion chain: " + v.front());
}

ClassificationReport classify(const FamilySpec& spec, const ClassifyOptions& options) {
  spec.validate();
  ClassificationReport r;
  r.spec = spec;
  const double eta = spec.eta;

  switch (spec.kind) {
    case FamilyKind::Werner: {
      werner_layers(r, werner_thresholds(spec.d), eta, "");
      copy_bipartite_to_genuine(r);
      r[Layer::GMTPositive] = numeric_gmt(werner(spec.d, eta));
      break;
    }
    case FamilyKind::Isotropic: {
      isotropic_layers(r, isotropic_thresholds(spec.d), eta, "");
      copy_bipartite_to_genuine(r);
      r[Layer::GMTPositive] = numeric_gmt(isotropic(spec.d, eta));
      break;
    }
    case FamilyKind::LiftedWerner: {
      const auto t = werner_thresholds(spec.d);
      werner_layers(r, t, eta, "across A'|B', same range as the base Werner state: ");
      const DensityMatrix rho = build_state(spec, options.dim_cap);
      const Partition cut = lift_bipartition(spec.k, spec.l);
      const auto w = gme_symmetric_witness(rho, cut);
      if (w.holds)
        r[Layer::GME] = in("symmetric on A' and B' (defect " + num(w.symmetry_defect) +
                           ") and NPT across " + cut.to_string() + " (min PT eigenvalue " +
                           num(w.min_pt_eigenvalue) + ")");
      else if (eta <= t.separable_upper)
        r[Layer::GME] = out("separable across " + cut.to_string() + " (lift of a separable Werner state)");
      else
        r[Layer::GME] = unknown("symmetric-NPT witness inconclusive");
      const double u = *t.unsteerable_povm_upper;
      r[Layer::GMS] = eta < u ? out("LHS model across " + cut.to_string() +
                                    " lifted from the base Werner state (eta=" + num(eta) + " < " +
                                    num(u) + ")")
                              : unknown("no LHS model known for eta=" + num(eta) + " >= " + num(u));
      r[Layer::GMNL] = unknown("no hybrid LHV model known beyond the chain");
      r[Layer::GMTPositive] = numeric_gmt(rho);
      break;
    }
    case FamilyKind::SymmetrizedLiftedIsotropic: {
      const auto t = isotropic_thresholds(spec.d);
      isotropic_layers(r, t, eta, "each lifted component across its bipartition: ");
      if (eta <= t.separable_upper) {
        r[Layer::GME] = out("hybrid separable: every component separable across its bipartition (eta=" +
                            num(eta) + " <= " + num(t.separable_upper) + ")");
      } else {
        const DensityMatrix rho = build_state(spec, options.dim_cap);
        r[Layer::GME] = unknown("symmetric-NPT witness inconclusive on every bipartition");
        for (const auto& cut : enumerate_bipartitions(spec.N)) {
          const auto w = gme_symmetric_witness(rho, cut);
          if (w.holds) {
            r[Layer::GME] = in("symmetric and NPT across " + cut.to_string() + " (min PT eigenvalue " +
                               num(w.min_pt_eigenvalue) + ")");
            break;
          }
        }
      }
      const double s = *t.steering_lower;
      r[Layer::GMS] = eta <= s ? out("hybrid LHS model: every component unsteerable (eta=" + num(eta) +
                                     " <= " + num(s) + ")")
                               : unknown("no hybrid LHS model known");
      const double nl = *t.nonlocal_lower;
      r[Layer::GMNL] = eta <= nl ? out("hybrid LHV model: every component local (eta=" + num(eta) +
                                       " <= " + num(nl) + ")")
                                 : unknown("no hybrid LHV model known");
      if (spec.N >= 3) {
        const double dtot = dtot_closed_form(spec.d, spec.N, eta);
        r[Layer::GMTPositive] = dtot > kPositiveCorrelation
                                    ? in("closed-form D_tot=" + num(dtot) + " bits > 0")
                                    : out("closed-form D_tot=" + num(dtot) + " bits");
      } else {
        r[Layer::GMTPositive] = numeric_gmt(build_state(spec, options.dim_cap));
      }
      break;
    }
    case FamilyKind::GHZ:
      throw DomainError("classify: no threshold ranges for the GHZ family");
  }

  close_under_chain(r);
  return r;
}

std::string verdict_summary(const ClassificationReport& report) {
  std::string s;
  for (auto layer : kAllLayers) {
    if (!s.empty()) s += ';';
    s += std::string(layer_name(layer)) + "=" + std::string(verdict_name(report[layer].verdict));
  }
  return s;
}

}  // namespace gmc
