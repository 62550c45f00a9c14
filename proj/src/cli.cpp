#include "gmc/cli.hpp"

#include "gmc/classify.hpp"
#include "gmc/errors.hpp"
#include "gmc/families.hpp"
#include "gmc/measures.hpp"
#include "gmc/report.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace gmc {

namespace {

struct Settings {
  std::size_t dim_cap = kDefaultDimCap;
  std::optional<double> tolerance;
};

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// A state given either as a family spec or as a path to a state file.
struct LoadedState {
  DensityMatrix rho;
  std::optional<FamilySpec> spec;
  std::string label;
};

LoadedState load_input(const std::string& input, const Settings& s) {
  if (std::filesystem::is_regular_file(input)) {
    StateFile f = read_state_file(input);
    std::optional<FamilySpec> spec;
    if (f.metadata) {
      try {
        spec = FamilySpec::parse(*f.metadata);
      } catch (const std::exception&) {
        // Free-form metadata is allowed; it just disables closed-form paths.
      }
    }
    return {to_density_matrix(f, s.dim_cap), spec, input};
  }
  const FamilySpec spec = FamilySpec::parse(input);
  return {build_state(spec, s.dim_cap), spec, spec.to_string()};
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

int cmd_build(const std::string& spec_text, const std::string& output, const Settings& s, std::ostream& out) {
  const FamilySpec spec = FamilySpec::parse(spec_text);
  const DensityMatrix rho = build_state(spec, s.dim_cap);
  // Re-validate through the checked constructor before anything is written.
  const DensityMatrix checked(rho.dims(), rho.matrix(), s.dim_cap);
  write_text(output, state_file_json(checked, spec.to_string()), out);
  return kExitOk;
}

int cmd_spectrum(const std::string& input, const Settings& s, std::ostream& out) {
  const LoadedState st = load_input(input, s);
  const Spectrum sp = hermitian_spectrum(st.rho);
  out << "# input: " << st.label << "\n";
  out << "# von Neumann entropy: " << fixed6(entropy(sp)) << " bits (log base 2)\n";
  out << "value,multiplicity\n";
  for (const auto& l : sp.levels()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", l.value);
    out << buf << ',' << l.multiplicity << "\n";
  }
  if (st.spec && st.spec->kind == FamilyKind::SymmetrizedLiftedIsotropic) {
    const auto m = compare_spectra(analytic_spectrum(*st.spec), sp);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", m.max_deviation);
    out << "# closed-form spectrum: " << (m.same_multiplicities ? "multiplicities match" : "multiplicities DIFFER")
        << ", max deviation " << buf << "\n";
  }
  return kExitOk;
}

int cmd_dtot(const std::string& input, std::optional<std::size_t> k_opt, const Settings& s, std::ostream& out) {
  const LoadedState st = load_input(input, s);
  const std::size_t n = st.rho.parties();
  if (n < 2) throw DomainError("dtot: state has a single subsystem");
  const std::size_t k = k_opt.value_or(n - 1);
  const auto res = genuine_total_correlation(st.rho, k);
  out << "# entropies in bits (log base 2)\n";
  out << "input: " << st.label << "\n";
  out << "k: " << k << "\n";
  out << "dtot_numeric: " << fixed6(res.value) << "\n";
  out << "argmin: " << res.argmin.to_string() << "\n";
  if (st.spec && st.spec->kind == FamilyKind::SymmetrizedLiftedIsotropic && st.spec->N >= 3 && k + 1 == n) {
    const double closed = dtot_closed_form(st.spec->d, st.spec->N, st.spec->eta);
    out << "dtot_closed: " << fixed6(closed) << "\n";
    if (std::abs(closed - res.value) > s.tolerance.value_or(kSweepAgreementTol))
      throw InternalError("dtot: numeric and closed-form values disagree");
  }
  return kExitOk;
}

int cmd_sweep(const std::string& tmpl, const std::string& grid, std::optional<std::size_t> k,
              const std::string& output, const Settings& s, std::ostream& out) {
  const FamilySpec family = FamilySpec::parse(tmpl, /*allow_missing_eta=*/true);
  SweepOptions opts;
  opts.k = k;
  opts.dim_cap = s.dim_cap;
  opts.tolerance = s.tolerance.value_or(kSweepAgreementTol);
  const auto rows = run_sweep(family, parse_real_list(grid), opts);
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  write_text(output, csv.str(), out);
  return kExitOk;
}

int cmd_classify(const std::string& spec_text, const Settings& s, std::ostream& out) {
  const FamilySpec spec = FamilySpec::parse(spec_text);
  const auto report = classify(spec, {s.dim_cap});
  out << "# " << spec.to_string() << "\n";
  for (auto layer : kAllLayers) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%-13s %-8s ", std::string(layer_name(layer)).c_str(),
                  std::string(verdict_name(report[layer].verdict)).c_str());
    out << buf << report[layer].justification << "\n";
  }
  return kExitOk;
}

int cmd_check_identities(const IdentityGrid& grid, std::ostream& out, std::ostream& err) {
  const auto checks = run_identity_checks(grid);
  const IdentityCheck* first_failure = nullptr;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-4s d=%zu N=%zu eta=%-6.4g %-24s ", c.passed ? "PASS" : "FAIL", c.d, c.N, c.eta,
                  c.name.c_str());
    out << buf << c.detail << "\n";
    if (c.passed) ++passed;
    else if (!first_failure) first_failure = &c;
  }
  out << passed << "/" << checks.size() << " checks passed\n";
  if (first_failure) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "first failure: (d=%zu, N=%zu, eta=%.10g) ", first_failure->d, first_failure->N,
                  first_failure->eta);
    err << buf << first_failure->name << ": " << first_failure->detail << "\n";
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genuine multipartite correlation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output, config_path;
  std::optional<double> tolerance;
  std::optional<std::size_t> dim_cap;
  app.add_option("-o,--output", output, "Output file (default: stdout)");
  app.add_option("--config", config_path, std::string("key=value config file (default: $") + kConfigEnvVar + ")");
  app.add_option("--tolerance", tolerance, "Agreement tolerance for numeric vs closed-form checks")
      ->check(CLI::PositiveNumber);
  app.add_option("--dim-cap", dim_cap, "Maximum total Hilbert-space dimension");

  std::string input;
  std::optional<std::size_t> k;

  auto* build = app.add_subcommand("build", "Write a family member as a JSON state file");
  build->add_option("spec", input, "Family spec, e.g. slis:d=2,N=3,eta=0.25")->required();

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues with multiplicities");
  spectrum->add_option("input", input, "Family spec or state file")->required();

  auto* dtot = app.add_subcommand("dtot", "Genuine total correlation by partition minimization");
  dtot->add_option("input", input, "Family spec or state file")->required();
  dtot->add_option("-k", k, "Largest admissible block size (default N-1)");

  std::string grid;
  auto* sweep = app.add_subcommand("sweep", "CSV of D_tot and verdicts over an eta grid");
  sweep->add_option("template", input, "Family spec; eta may be omitted")->required();
  sweep->add_option("--etas", grid, "Comma list or start:step:stop")->required();
  sweep->add_option("-k", k, "Largest admissible block size (default N-1)");

  auto* classify_cmd = app.add_subcommand("classify", "Three-valued hierarchy verdicts");
  classify_cmd->add_option("spec", input, "Family spec")->required();

  std::string ds = "2,3", ns = "2,3,4", etas = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1";
  double corrupt_b = 0.0;
  auto* check = app.add_subcommand("check-identities", "Closed-form identity and spectrum checks");
  check->add_option("--d", ds, "Local dimensions");
  check->add_option("--N", ns, "Party counts");
  check->add_option("--etas", etas, "Eta grid");
  check->add_option("--corrupt-b", corrupt_b, "Test hook: perturb the coefficient b");

  std::vector<std::string> argv_store{"gmc"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    Settings s;
    if (config_path.empty())
      if (const char* env = std::getenv(kConfigEnvVar); env && *env) config_path = env;
    if (!config_path.empty()) {
      const Config c = read_config(config_path);
      if (c.dim_cap) s.dim_cap = *c.dim_cap;
      if (c.tolerance) s.tolerance = c.tolerance;
    }
    if (dim_cap) s.dim_cap = *dim_cap;
    if (tolerance) s.tolerance = tolerance;

    if (*build) return cmd_build(input, output, s, out);
    if (*spectrum) return cmd_spectrum(input, s, out);
    if (*dtot) return cmd_dtot(input, k, s, out);
    if (*sweep) return cmd_sweep(input, grid, k, output, s, out);
    if (*classify_cmd) return cmd_classify(input, s, out);
    if (*check) {
      IdentityGrid g;
      g.ds = parse_size_list(ds);
      g.Ns = parse_size_list(ns);
      g.etas = parse_real_list(etas);
      g.b_perturbation = corrupt_b;
      g.dim_cap = s.dim_cap;
      if (s.tolerance) g.spectrum_tolerance = *s.tolerance;
      return cmd_check_identities(g, out, err);
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kExitResource;
  } catch (const InternalError& e) {
    err << "internal inconsistency: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace gmc
