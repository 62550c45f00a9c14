#include "gmc/errors.hpp"
#include "gmc/measures.hpp"
#include "gmc/report.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace gmc;

TEST_CASE("state file round trip is exact") {
  std::mt19937_64 rng(53);
  const DensityMatrix rho = test::random_state({2, 3}, rng);
  const std::string text = state_file_json(rho, std::string("random"));
  const StateFile f = parse_state_file(text);
  CHECK(f.dims == Dims{2, 3});
  CHECK(f.metadata == std::optional<std::string>("random"));
  CHECK(max_abs_diff(f.matrix, rho.matrix()) == 0.0);
  CHECK(max_abs_diff(to_density_matrix(f).matrix(), rho.matrix()) <= 1e-15);
  CHECK(state_file_json(to_density_matrix(f), std::string("random")) == text);

  const DensityMatrix s = symmetrized_lifted_isotropic(2, 3, 0.25);
  CHECK_FALSE(parse_state_file(state_file_json(s, std::nullopt)).metadata.has_value());
}

TEST_CASE("state file parse errors") {
  CHECK_THROWS_AS(parse_state_file("{"), ParseError);
  CHECK_THROWS_AS(parse_state_file("[]"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"matrix": [[1, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"dims": [2], "matrix": [[1, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"dims": [2], "matrix": [[1, 0], [0], [0, 0], [0, 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0], ["x", 0]]})"), ParseError);
  CHECK_THROWS_AS(parse_state_file(R"({"dims": [0], "matrix": []})"), ParseError);
}

TEST_CASE("state file semantic errors") {
  const auto trace2 = parse_state_file(R"({"dims": [2], "matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]})");
  CHECK_THROWS_AS(to_density_matrix(trace2), InvariantError);
  const auto negative = parse_state_file(R"({"dims": [2], "matrix": [[1.5, 0], [0, 0], [0, 0], [-0.5, 0]]})");
  CHECK_THROWS_AS(to_density_matrix(negative), InvariantError);
  const auto ok = parse_state_file(R"({"dims": [2, 2], "matrix": [[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0],[0,0],[0,0],[0,0],[0,0],[0.25,0]]})");
  CHECK(to_density_matrix(ok).dimension() == 4);
  CHECK_THROWS_AS(to_density_matrix(ok, 2), ResourceError);
}

TEST_CASE("sweep rows agree with the closed form and with the entropies") {
  const auto family = FamilySpec::parse("slis:d=2,N=3", true);
  const std::vector<double> etas{0.0, 0.25, 0.5, 1.0};
  const auto rows = run_sweep(family, etas, SweepOptions{});
  REQUIRE(rows.size() == etas.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    CHECK(r.eta == etas[i]);
    REQUIRE(r.dtot_closed.has_value());
    CHECK(std::abs(r.dtot_numeric - *r.dtot_closed) < 1e-6);
    CHECK(r.dtot_numeric == doctest::Approx(r.h_A + r.h_B - r.h_total).epsilon(1e-12));
    CHECK(r.argmin == "1|23");
    CHECK(r.verdicts.find("GMT-positive=IN") != std::string::npos);
  }
  CHECK(rows[1].dtot_numeric == doctest::Approx(0.3366763717).epsilon(1e-9));
  CHECK(rows[1].h_A == doctest::Approx(1.0));

  const auto werner_rows = run_sweep(FamilySpec::parse("werner:d=2", true), {0.3}, SweepOptions{});
  CHECK_FALSE(werner_rows[0].dtot_closed.has_value());
}

TEST_CASE("sweep CSV is deterministic across thread counts") {
  const auto family = FamilySpec::parse("slis:d=2,N=4", true);
  const auto etas = parse_real_list("0:0.125:1");
  REQUIRE(etas.size() == 9);
  std::string first;
  for (unsigned threads : {1U, 2U, 4U}) {
    SweepOptions opts;
    opts.threads = threads;
    std::ostringstream os;
    write_sweep_csv(os, run_sweep(family, etas, opts));
    if (first.empty()) first = os.str();
    CHECK(os.str() == first);
  }
  CHECK(first.rfind(std::string(kSweepHeader) + "\r\n", 0) == 0);
  CHECK(std::count(first.begin(), first.end(), '\n') == 10);
}

TEST_CASE("empty sweep writes only the header") {
  std::ostringstream os;
  write_sweep_csv(os, run_sweep(FamilySpec::parse("slis:d=2,N=3", true), {}, SweepOptions{}));
  CHECK(os.str() == std::string(kSweepHeader) + "\r\n");
}

TEST_CASE("CSV field formatting") {
  SweepRow row;
  row.eta = 0.25;
  row.dtot_numeric = 0.3366763717;
  row.h_total = 1.5;
  row.argmin = "1|23";
  row.verdicts = "GME=OUT";
  std::ostringstream os;
  write_sweep_csv(os, {row});
  CHECK(os.str() == std::string(kSweepHeader) + "\r\n0.25,0.336676,,1.500000,0.000000,0.000000,1|23,GME=OUT\r\n");
}

TEST_CASE("identity checks pass on the default grid and catch a corrupted coefficient") {
  const auto checks = run_identity_checks(IdentityGrid{});
  CHECK(checks.size() > 0);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.passed);
  }
  IdentityGrid bad;
  bad.ds = {2};
  bad.Ns = {3};
  bad.etas = {0.5};
  bad.b_perturbation = 1e-3;
  const auto failing = run_identity_checks(bad);
  CHECK(std::any_of(failing.begin(), failing.end(), [](const IdentityCheck& c) { return !c.passed; }));
}

TEST_CASE("config parsing") {
  const Config c = parse_config("# comment\ndim_cap = 512\n\ntolerance=1e-8\n");
  CHECK(c.dim_cap == std::optional<std::size_t>(512));
  CHECK(c.tolerance == std::optional<double>(1e-8));
  CHECK_FALSE(parse_config("").dim_cap.has_value());
  CHECK_THROWS_AS(parse_config("dim_cap"), ParseError);
  CHECK_THROWS_AS(parse_config("colour=blue"), ParseError);
  CHECK_THROWS_AS(parse_config("dim_cap=lots"), ParseError);
}

TEST_CASE("list parsing") {
  CHECK(parse_real_list("").empty());
  CHECK(parse_real_list("0.1,0.2") == std::vector<double>{0.1, 0.2});
  const auto r = parse_real_list("0:0.1:1");
  REQUIRE(r.size() == 11);
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK(r[3] == doctest::Approx(0.3));
  CHECK(parse_size_list("2,3") == std::vector<std::size_t>{2, 3});
  CHECK_THROWS_AS(parse_real_list("0.1,,0.2"), ParseError);
  CHECK_THROWS_AS(parse_real_list("a"), ParseError);
  CHECK_THROWS_AS(parse_size_list("2,-1"), ParseError);
}
