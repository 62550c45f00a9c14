#include "gmc/families.hpp"

#include "gmc/errors.hpp"
#include "gmc/partitions.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace gmc {

namespace {

void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("eta must lie in [0, 1]");
}

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

// Flat index of |i>^{(x)n} for local dimension d.
std::size_t repeated_index(std::size_t d, std::size_t n, std::size_t i) {
  std::size_t idx = 0;
  for (std::size_t p = 0; p < n; ++p) idx = idx * d + i;
  return idx;
}

// Sorts levels descending and merges neighbours closer than tol.
Spectrum merged(std::vector<SpectrumLevel> levels) {
  std::erase_if(levels, [](const SpectrumLevel& l) { return l.multiplicity == 0; });
  std::sort(levels.begin(), levels.end(),
            [](const SpectrumLevel& a, const SpectrumLevel& b) { return a.value > b.value; });
  std::vector<SpectrumLevel> out;
  for (const auto& l : levels) {
    if (!out.empty() && std::abs(out.back().value - l.value) <= kClusterTol) {
      auto& prev = out.back();
      const double m0 = static_cast<double>(prev.multiplicity);
      const double m1 = static_cast<double>(l.multiplicity);
      prev.value = (prev.value * m0 + l.value * m1) / (m0 + m1);
      prev.multiplicity += l.multiplicity;
    } else {
      out.push_back(l);
    }
  }
  return Spectrum(std::move(out));
}

std::size_t parse_size(std::string_view key, std::string_view v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ParseError("family spec: bad integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  // std::from_chars for double is unavailable on older toolchains; strtod on a copy.
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(out))
    throw ParseError("family spec: bad number for '" + std::string(key) + "': '" + s + "'");
  return out;
}

}  // namespace

std::string_view family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::GHZ: return "ghz";
    case FamilyKind::Werner: return "werner";
    case FamilyKind::Isotropic: return "isotropic";
    case FamilyKind::LiftedWerner: return "lifted-werner";
    case FamilyKind::SymmetrizedLiftedIsotropic: return "slis";
  }
  return "?";
}

std::size_t bipartition_count(std::size_t n) {
  if (n < 1 || n > 63) throw DomainError("bipartition_count: n out of range");
  return (std::size_t{1} << (n - 1)) - 1;
}

// --- FamilySpec ------------------------------------------------------------

void FamilySpec::validate() const {
  if (d < 2) throw DomainError("family spec: d must be >= 2");
  check_eta(eta);
  switch (kind) {
    case FamilyKind::GHZ:
    case FamilyKind::SymmetrizedLiftedIsotropic:
      if (N < 2) throw DomainError("family spec: N must be >= 2");
      break;
    case FamilyKind::Werner:
    case FamilyKind::Isotropic:
      if (N != 2) throw DomainError("family spec: werner/isotropic states are bipartite (N = 2)");
      break;
    case FamilyKind::LiftedWerner:
      if (k < 1 || l < 1) throw DomainError("family spec: lift sizes k, l must be >= 1");
      if (k + l != N) throw DomainError("family spec: k + l must equal N");
      break;
  }
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string FamilySpec::to_string() const {
  const std::string eta_text = shortest(eta);
  std::ostringstream os;
  os << family_name(kind) << ":d=" << d;
  switch (kind) {
    case FamilyKind::GHZ: os << ",N=" << N; break;
    case FamilyKind::Werner:
    case FamilyKind::Isotropic: os << ",eta=" << eta_text; break;
    case FamilyKind::LiftedWerner: os << ",k=" << k << ",l=" << l << ",eta=" << eta_text; break;
    case FamilyKind::SymmetrizedLiftedIsotropic: os << ",N=" << N << ",eta=" << eta_text; break;
  }
  return os.str();
}

FamilySpec FamilySpec::parse(std::string_view text, bool allow_missing_eta) {
  static const std::map<std::string, FamilyKind, std::less<>> kinds{
      {"ghz", FamilyKind::GHZ},
      {"werner", FamilyKind::Werner},
      {"isotropic", FamilyKind::Isotropic},
      {"lifted-werner", FamilyKind::LiftedWerner},
      {"slis", FamilyKind::SymmetrizedLiftedIsotropic},
  };
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError("family spec: expected '<family>:key=value,...', got '" + std::string(text) + "'");
  const auto kind_it = kinds.find(text.substr(0, colon));
  if (kind_it == kinds.end())
    throw ParseError("family spec: unknown family '" + std::string(text.substr(0, colon)) + "'");

  std::map<std::string, std::string, std::less<>> fields;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw ParseError("family spec: malformed field '" + std::string(item) + "'");
    const std::string key(item.substr(0, eq));
    if (key != "d" && key != "N" && key != "k" && key != "l" && key != "eta")
      throw ParseError("family spec: unknown field '" + key + "'");
    if (!fields.emplace(key, std::string(item.substr(eq + 1))).second)
      throw ParseError("family spec: duplicate field '" + key + "'");
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
    if (rest.empty()) throw ParseError("family spec: trailing comma");
  }

  FamilySpec spec;
  spec.kind = kind_it->second;
  const auto required = [&](std::string_view key) -> const std::string& {
    auto it = fields.find(key);
    if (it == fields.end())
      throw ParseError("family spec: missing field '" + std::string(key) + "' for " +
                       std::string(family_name(spec.kind)));
    return it->second;
  };
  const auto forbid = [&](std::string_view key) {
    if (fields.contains(key))
      throw ParseError("family spec: field '" + std::string(key) + "' does not apply to " +
                       std::string(family_name(spec.kind)));
  };

  spec.d = parse_size("d", required("d"));
  const auto read_eta = [&] {
    if (allow_missing_eta && !fields.contains("eta")) return 0.0;
    return parse_real("eta", required("eta"));
  };
  switch (spec.kind) {
    case FamilyKind::GHZ:
      forbid("eta");
      forbid("k");
      forbid("l");
      spec.N = parse_size("N", required("N"));
      spec.eta = 1.0;
      break;
    case FamilyKind::Werner:
    case FamilyKind::Isotropic:
      forbid("k");
      forbid("l");
      spec.N = fields.contains("N") ? parse_size("N", fields.find("N")->second) : 2;
      spec.eta = read_eta();
      break;
    case FamilyKind::LiftedWerner:
      spec.k = parse_size("k", required("k"));
      spec.l = parse_size("l", required("l"));
      spec.N = fields.contains("N") ? parse_size("N", fields.find("N")->second) : spec.k + spec.l;
      spec.eta = read_eta();
      break;
    case FamilyKind::SymmetrizedLiftedIsotropic:
      forbid("k");
      forbid("l");
      spec.N = parse_size("N", required("N"));
      spec.eta = read_eta();
      break;
  }
  spec.validate();
  return spec;
}

// --- constructors ------------------------------------------------------------

DensityMatrix ghz(std::size_t d, std::size_t N) {
  if (d < 2 || N < 2) throw DomainError("ghz: need d >= 2 and N >= 2");
  const Dims dims(N, d);
  check_dimension(dims);
  const auto D = static_cast<Eigen::Index>(total_dimension(dims));
  Matrix m = Matrix::Zero(D, D);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(repeated_index(d, N, i), repeated_index(d, N, j)) = 1.0 / static_cast<double>(d);
  return DensityMatrix::unchecked(dims, std::move(m));
}

DensityMatrix werner(std::size_t d, double eta) {
  if (d < 2) throw DomainError("werner: d must be >= 2");
  check_eta(eta);
  const double dd = static_cast<double>(d);
  const Operator pas = antisymmetric_projector(d);
  const auto D = static_cast<Eigen::Index>(d * d);
  Matrix m = pas.matrix() * (eta * 2.0 / (dd * (dd - 1.0))) +
             Matrix::Identity(D, D) * ((1.0 - eta) / (dd * dd));
  return DensityMatrix({d, d}, std::move(m));
}

DensityMatrix isotropic(std::size_t d, double eta) {
  if (d < 2) throw DomainError("isotropic: d must be >= 2");
  check_eta(eta);
  const double dd = static_cast<double>(d);
  const auto D = static_cast<Eigen::Index>(d * d);
  Matrix m = ghz(d, 2).matrix() * eta + Matrix::Identity(D, D) * ((1.0 - eta) / (dd * dd));
  return DensityMatrix({d, d}, std::move(m));
}

Operator lift_isometry(std::size_t d, std::size_t copies) {
  if (d < 2 || copies < 1) throw DomainError("lift_isometry: need d >= 2 and copies >= 1");
  const Dims out_dims(copies, d);
  check_dimension(out_dims);
  Matrix v = Matrix::Zero(static_cast<Eigen::Index>(total_dimension(out_dims)),
                          static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) v(repeated_index(d, copies, i), i) = 1.0;
  return Operator(out_dims, {d}, std::move(v));
}

namespace {

DensityMatrix lift(const DensityMatrix& rho, std::size_t k, std::size_t l) {
  const std::size_t d = rho.dims()[0];
  check_dimension(Dims(k + l, d));
  const Operator v = kron(lift_isometry(d, k), lift_isometry(d, l));
  const Operator out = v * rho.as_operator() * v.adjoint();
  return DensityMatrix::unchecked(out.dims_out(), out.matrix());
}

}  // namespace

DensityMatrix lifted_werner(std::size_t d, std::size_t k, std::size_t l, double eta) {
  if (k < 1 || l < 1) throw DomainError("lifted_werner: need k, l >= 1");
  return lift(werner(d, eta), k, l);
}

DensityMatrix lifted_isotropic(std::size_t d, std::size_t k, std::size_t l, double eta) {
  if (k < 1 || l < 1) throw DomainError("lifted_isotropic: need k, l >= 1");
  return lift(isotropic(d, eta), k, l);
}

DensityMatrix symmetrized_lifted_isotropic(std::size_t d, std::size_t N, double eta,
                                           std::size_t dim_cap) {
  if (d < 2 || N < 2) throw DomainError("symmetrized_lifted_isotropic: need d >= 2 and N >= 2");
  check_eta(eta);
  const Dims dims(N, d);
  check_dimension(dims, dim_cap);
  const auto D = static_cast<Eigen::Index>(total_dimension(dims));
  const double dd = static_cast<double>(d);
  const std::size_t M = bipartition_count(N);

  Matrix m = Matrix::Zero(D, D);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(repeated_index(d, N, i), repeated_index(d, N, j)) += eta / dd;

  // (1-eta)/M * (I~_A'/d) (x) (I~_B'/d) for each bipartition; the basis state
  // with letter i on A' and letter j on B' picks up (1-eta)/(M d^2).
  const double weight = (1.0 - eta) / (static_cast<double>(M) * dd * dd);
  for (const auto& bp : enumerate_bipartitions(N)) {
    std::vector<bool> in_a(N, false);
    for (auto q : bp.blocks()[0]) in_a[q] = true;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        std::size_t idx = 0;
        for (std::size_t q = 0; q < N; ++q) idx = idx * d + (in_a[q] ? i : j);
        m(idx, idx) += weight;
      }
  }
  return DensityMatrix::unchecked(dims, std::move(m));
}

DensityMatrix build_state(const FamilySpec& spec, std::size_t dim_cap) {
  spec.validate();
  check_dimension(Dims(spec.N, spec.d), dim_cap);
  switch (spec.kind) {
    case FamilyKind::GHZ: return ghz(spec.d, spec.N);
    case FamilyKind::Werner: return werner(spec.d, spec.eta);
    case FamilyKind::Isotropic: return isotropic(spec.d, spec.eta);
    case FamilyKind::LiftedWerner: return lifted_werner(spec.d, spec.k, spec.l, spec.eta);
    case FamilyKind::SymmetrizedLiftedIsotropic:
      return symmetrized_lifted_isotropic(spec.d, spec.N, spec.eta, dim_cap);
  }
  throw DomainError("build_state: unsupported family");
}

// --- closed forms ------------------------------------------------------------

SlisCoefficients SlisCoefficients::compute(std::size_t d, std::size_t N, double eta) {
  if (d < 2 || N < 2) throw DomainError("slis coefficients: need d >= 2 and N >= 2");
  check_eta(eta);
  const double dd = static_cast<double>(d);
  const double M = static_cast<double>(bipartition_count(N));
  SlisCoefficients c;
  c.a = eta / dd + (1.0 - eta) / (dd * dd);
  c.b = (1.0 - eta) / (dd * dd * M);
  c.c = eta / dd;
  c.a_prime = eta / dd + (1.0 - eta) / (M * dd) + (M - 1.0) * (1.0 - eta) / (M * dd * dd);
  c.b_prime = 2.0 * c.b;
  return c;
}

double SlisCoefficients::normalization_residual(std::size_t d, std::size_t N) const {
  const double dd = static_cast<double>(d);
  const double M = static_cast<double>(bipartition_count(N));
  return dd * a + (dd * dd - dd) * M * b - 1.0;
}

double SlisCoefficients::marginal_normalization_residual(std::size_t d, std::size_t N) const {
  const double dd = static_cast<double>(d);
  const double M_b = N >= 2 ? static_cast<double>(bipartition_count(N - 1)) : 0.0;
  return dd * a_prime + M_b * (dd * dd - dd) * b_prime - 1.0;
}

Spectrum analytic_spectrum(std::size_t d, std::size_t N, const SlisCoefficients& co) {
  const std::size_t total = ipow(d, N);
  const std::size_t n_b = (d * d - d) * bipartition_count(N);
  if (total < d + n_b) throw DomainError("analytic_spectrum: inconsistent degeneracy count");
  return merged({
      {co.a + static_cast<double>(d - 1) * co.c, 1},
      {co.a - co.c, d - 1},
      {co.b, n_b},
      {0.0, total - d - n_b},
  });
}

Spectrum analytic_spectrum(const FamilySpec& spec) {
  if (spec.kind != FamilyKind::SymmetrizedLiftedIsotropic)
    throw DomainError("analytic_spectrum: only the symmetrized lifted isotropic family has a closed form");
  spec.validate();
  return analytic_spectrum(spec.d, spec.N, SlisCoefficients::compute(spec.d, spec.N, spec.eta));
}

Spectrum reduced_spectrum_B(const FamilySpec& spec) {
  if (spec.kind != FamilyKind::SymmetrizedLiftedIsotropic)
    throw DomainError("reduced_spectrum_B: only the symmetrized lifted isotropic family has a closed form");
  spec.validate();
  if (spec.N < 3) throw DomainError("reduced_spectrum_B: need N >= 3");
  const auto co = SlisCoefficients::compute(spec.d, spec.N, spec.eta);
  const std::size_t total = ipow(spec.d, spec.N - 1);
  const std::size_t n_b = bipartition_count(spec.N - 1) * (spec.d * spec.d - spec.d);
  return merged({{co.a_prime, spec.d}, {co.b_prime, n_b}, {0.0, total - spec.d - n_b}});
}

}  // namespace gmc
