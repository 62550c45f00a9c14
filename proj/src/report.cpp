#include "gmc/report.hpp"

#include "gmc/errors.hpp"
#include "gmc/measures.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

namespace gmc {

using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
    throw ParseError("expected a number, got '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, sep)) parts.push_back(trim(cur));
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

// --- state files --------------------------------------------------------------

std::string state_file_json(const DensityMatrix& rho, const std::optional<std::string>& metadata) {
  json j;
  j["dims"] = rho.dims();
  json entries = json::array();
  const Matrix& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
  j["matrix"] = std::move(entries);
  if (metadata) j["metadata"] = *metadata;
  // nlohmann writes doubles in shortest round-trip form, so reloading is exact.
  return j.dump() + "\n";
}

void write_state_file(const std::filesystem::path& path, const DensityMatrix& rho,
                      const std::optional<std::string>& metadata) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << state_file_json(rho, metadata);
}

StateFile parse_state_file(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("state file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("matrix"))
    throw ParseError("state file: expected an object with 'dims' and 'matrix'");
  StateFile f;
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.empty()) throw ParseError("state file: 'dims' must be a nonempty array");
  for (const auto& d : dims) {
    if (!d.is_number_unsigned() || d.get<std::size_t>() == 0)
      throw ParseError("state file: dims must be positive integers");
    f.dims.push_back(d.get<std::size_t>());
  }
  const auto& entries = j.at("matrix");
  // Guard the product before allocating anything.
  std::size_t n = 1;
  for (auto d : f.dims) {
    if (n > (std::size_t{1} << 20) / d) throw ResourceError("state file: dimension too large");
    n *= d;
  }
  if (!entries.is_array() || entries.size() != n * n)
    throw ParseError("state file: 'matrix' must hold (prod dims)^2 = " + std::to_string(n * n) + " entries");
  f.matrix.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("state file: matrix entries must be [re, im] pairs");
    f.matrix(static_cast<Eigen::Index>(i / n), static_cast<Eigen::Index>(i % n)) =
        cplx(e[0].get<double>(), e[1].get<double>());
  }
  if (j.contains("metadata") && !j.at("metadata").is_null()) {
    if (!j.at("metadata").is_string()) throw ParseError("state file: 'metadata' must be a string");
    f.metadata = j.at("metadata").get<std::string>();
  }
  return f;
}

StateFile read_state_file(const std::filesystem::path& path) { return parse_state_file(slurp(path)); }

DensityMatrix to_density_matrix(const StateFile& file, std::size_t dim_cap) {
  return DensityMatrix(file.dims, file.matrix, dim_cap);
}

// --- sweeps -----------------------------------------------------------------

SweepRow compute_sweep_row(const FamilySpec& spec, const SweepOptions& options) {
  const DensityMatrix rho = build_state(spec, options.dim_cap);
  const std::size_t k = options.k.value_or(spec.N - 1);
  const auto res = genuine_total_correlation(rho, k);

  SweepRow row;
  row.eta = spec.eta;
  row.dtot_numeric = res.value;
  if (spec.kind == FamilyKind::SymmetrizedLiftedIsotropic && spec.N >= 3 && k + 1 == spec.N)
    row.dtot_closed = dtot_closed_form(spec.d, spec.N, spec.eta);
  row.h_total = res.total_entropy;
  row.h_A = res.per_block_entropies.front();
  row.h_B = std::accumulate(res.per_block_entropies.begin() + 1, res.per_block_entropies.end(), 0.0);
  row.argmin = res.argmin.to_string();
  try {
    row.verdicts = verdict_summary(classify(spec, {options.dim_cap}));
  } catch (const DomainError&) {
    row.verdicts = "unsupported";
  }
  return row;
}

std::vector<SweepRow> run_sweep(const FamilySpec& family, const std::vector<double>& etas,
                                const SweepOptions& options) {
  std::vector<FamilySpec> specs;
  for (double eta : etas) {
    FamilySpec s = family;
    s.eta = eta;
    s.validate();
    specs.push_back(s);
  }

  std::vector<SweepRow> rows(specs.size());
  std::vector<std::exception_ptr> errors(specs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < specs.size(); i = next++) {
      try {
        rows[i] = compute_sweep_row(specs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, specs.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (const auto& row : rows) {
    if (row.dtot_closed && std::abs(row.dtot_numeric - *row.dtot_closed) > options.tolerance) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "sweep row eta=%.10g: numeric %.12g vs closed form %.12g", row.eta,
                    row.dtot_numeric, *row.dtot_closed);
      throw InternalError(buf);
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepHeader << "\r\n";
  for (const auto& r : rows) {
    char eta[32];
    std::snprintf(eta, sizeof eta, "%.10g", r.eta);
    os << eta << ',' << fixed6(r.dtot_numeric) << ',' << (r.dtot_closed ? fixed6(*r.dtot_closed) : "") << ','
       << fixed6(r.h_total) << ',' << fixed6(r.h_A) << ',' << fixed6(r.h_B) << ',' << r.argmin << ','
       << r.verdicts << "\r\n";
  }
}

// --- identity checks ----------------------------------------------------------

std::vector<IdentityCheck> run_identity_checks(const IdentityGrid& grid) {
  std::vector<IdentityCheck> out;
  const auto record = [&](std::size_t d, std::size_t N, double eta, std::string name, bool ok, std::string detail) {
    out.push_back({d, N, eta, std::move(name), ok, std::move(detail)});
  };
  const auto sci = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return std::string(buf);
  };

  for (auto d : grid.ds)
    for (auto N : grid.Ns)
      for (double eta : grid.etas) {
        auto co = SlisCoefficients::compute(d, N, eta);
        co.b += grid.b_perturbation;

        const double r1 = co.normalization_residual(d, N);
        record(d, N, eta, "normalization", std::abs(r1) <= grid.identity_tolerance, "residual " + sci(r1));
        const double r2 = co.marginal_normalization_residual(d, N);
        record(d, N, eta, "marginal-normalization", std::abs(r2) <= grid.identity_tolerance,
               "residual " + sci(r2));

        const DensityMatrix rho = symmetrized_lifted_isotropic(d, N, eta, grid.dim_cap);
        const auto match = compare_spectra(analytic_spectrum(d, N, co), hermitian_spectrum(rho));
        record(d, N, eta, "spectrum", match.same_multiplicities && match.max_deviation <= grid.spectrum_tolerance,
               std::string(match.same_multiplicities ? "" : "multiplicities differ; ") + "max deviation " +
                   sci(match.max_deviation));

        // All N! permutations for small N; otherwise the two generators of S_N.
        std::vector<IndexSet> perms;
        IndexSet order(N);
        std::iota(order.begin(), order.end(), 0);
        if (N <= 4) {
          do perms.push_back(order);
          while (std::next_permutation(order.begin(), order.end()));
        } else {
          IndexSet swap01 = order, cycle(N);
          std::swap(swap01[0], swap01[1]);
          for (std::size_t q = 0; q < N; ++q) cycle[q] = (q + 1) % N;
          perms = {swap01, cycle};
        }
        double worst = 0.0;
        for (const auto& p : perms) worst = std::max(worst, max_abs_diff(permute_subsystems(rho, p).matrix(), rho.matrix()));
        record(d, N, eta, "permutation-invariance", worst <= grid.identity_tolerance,
               std::to_string(perms.size()) + " permutations, max deviation " + sci(worst));

        if (N >= 3) {
          IndexSet rest(N - 1);
          std::iota(rest.begin(), rest.end(), 1);
          FamilySpec spec{FamilyKind::SymmetrizedLiftedIsotropic, d, N, 0, 0, eta};
          const auto m = compare_spectra(reduced_spectrum_B(spec), hermitian_spectrum(partial_trace(rho, rest)));
          record(d, N, eta, "marginal-spectrum", m.same_multiplicities && m.max_deviation <= grid.spectrum_tolerance,
                 "max deviation " + sci(m.max_deviation));
        }
      }
  return out;
}

// --- config -------------------------------------------------------------------

Config parse_config(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "dim_cap") {
      const double v = parse_double(value);
      if (v < 1 || v != std::floor(v)) throw ParseError("config: dim_cap must be a positive integer");
      c.dim_cap = static_cast<std::size_t>(v);
    } else if (key == "tolerance") {
      c.tolerance = parse_double(value);
      if (*c.tolerance <= 0) throw ParseError("config: tolerance must be positive");
    } else {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

Config read_config(const std::filesystem::path& path) { return parse_config(slurp(path)); }

std::vector<double> parse_real_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) return {};
  if (t.find(':') != std::string::npos) {
    const auto parts = split(t, ':');
    if (parts.size() != 3) throw ParseError("grid: expected start:step:stop");
    const double start = parse_double(parts[0]);
    const double step = parse_double(parts[1]);
    const double stop = parse_double(parts[2]);
    if (step <= 0 || stop < start) throw ParseError("grid: need step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v;
    for (std::size_t i = 0; i < count; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
  }
  std::vector<double> v;
  for (const auto& p : split(t, ',')) v.push_back(parse_double(p));
  return v;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> v;
  for (double x : parse_real_list(text)) {
    if (x < 0 || x != std::floor(x)) throw ParseError("expected nonnegative integers");
    v.push_back(static_cast<std::size_t>(x));
  }
  return v;
}

}  // namespace gmc
