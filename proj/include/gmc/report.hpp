#pragma once

// File formats and batch drivers behind the command-line tool: JSON state
// files, CSV eta sweeps, the closed-form identity checks and the key=value
// config file.

#include "gmc/classify.hpp"
#include "gmc/families.hpp"
#include "gmc/tensor.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gmc {

// --- state files ---
// {"dims": [2, 2], "matrix": [[re, im], ...], "metadata": "werner:d=2,eta=0.4"}
// matrix is row-major with (prod dims)^2 entries; metadata is optional.
struct StateFile {
  Dims dims;
  Matrix matrix;
  std::optional<std::string> metadata;
};

std::string state_file_json(const DensityMatrix& rho, const std::optional<std::string>& metadata);
void write_state_file(const std::filesystem::path& path, const DensityMatrix& rho,
                      const std::optional<std::string>& metadata);
// Malformed JSON or schema -> ParseError.
StateFile parse_state_file(const std::string& text);
StateFile read_state_file(const std::filesystem::path& path);
// Invariant failures -> InvariantError, dimension cap -> ResourceError.
DensityMatrix to_density_matrix(const StateFile& file, std::size_t dim_cap = kDefaultDimCap);

// --- sweeps ---
inline constexpr double kSweepAgreementTol = 1e-6;
inline constexpr const char* kSweepHeader = "eta,dtot_numeric,dtot_closed,h_total,h_A,h_B,argmin,verdicts";

struct SweepRow {
  double eta = 0.0;
  double dtot_numeric = 0.0;
  std::optional<double> dtot_closed;  // symmetrized lifted isotropic with N >= 3, k = N-1
  double h_total = 0.0;
  double h_A = 0.0;  // entropy of the first block of the argmin partition
  double h_B = 0.0;  // summed entropies of the remaining blocks
  std::string argmin;
  std::string verdicts;
};

struct SweepOptions {
  std::optional<std::size_t> k;  // default N-1
  double tolerance = kSweepAgreementTol;
  std::size_t dim_cap = kDefaultDimCap;
  unsigned threads = 0;  // 0: hardware concurrency
};

SweepRow compute_sweep_row(const FamilySpec& spec, const SweepOptions& options);
// Rows in grid order. A row whose numeric and closed-form values differ by more
// than the tolerance -> InternalError.
std::vector<SweepRow> run_sweep(const FamilySpec& family, const std::vector<double>& etas,
                                const SweepOptions& options);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

// --- identity checks ---
struct IdentityGrid {
  std::vector<std::size_t> ds{2, 3};
  std::vector<std::size_t> Ns{2, 3, 4};
  std::vector<double> etas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double spectrum_tolerance = 1e-9;
  double identity_tolerance = 1e-12;
  double b_perturbation = 0.0;  // test hook: added to the coefficient b
  std::size_t dim_cap = kDefaultDimCap;
};

struct IdentityCheck {
  std::size_t d = 0;
  std::size_t N = 0;
  double eta = 0.0;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<IdentityCheck> run_identity_checks(const IdentityGrid& grid);

// --- config ---
// key=value lines, '#' comments. Keys: dim_cap, tolerance.
struct Config {
  std::optional<std::size_t> dim_cap;
  std::optional<double> tolerance;
};

Config parse_config(const std::string& text);
Config read_config(const std::filesystem::path& path);

// Comma-separated reals; "" yields an empty list. Also accepts "start:step:stop".
std::vector<double> parse_real_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);

}  // namespace gmc
