#include "gmc/errors.hpp"
#include "gmc/partitions.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace gmc;

namespace {

// Bell numbers via the Bell triangle.
std::vector<std::size_t> bell_numbers(std::size_t up_to) {
  std::vector<std::size_t> bell{1};
  std::vector<std::size_t> row{1};
  for (std::size_t n = 1; n <= up_to; ++n) {
    std::vector<std::size_t> next{row.back()};
    for (std::size_t x : row) next.push_back(next.back() + x);
    bell.push_back(next.front());
    row = next;
  }
  return bell;
}

std::vector<std::string> strings(const std::vector<Partition>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

}  // namespace

TEST_CASE("Bell triangle oracle") {
  const auto b = bell_numbers(8);
  CHECK(b == std::vector<std::size_t>{1, 1, 2, 5, 15, 52, 203, 877, 4140});
}

TEST_CASE("enumerate_partitions counts match Bell numbers") {
  const auto bell = bell_numbers(8);
  for (std::size_t n = 1; n <= 8; ++n) {
    CAPTURE(n);
    CHECK(enumerate_partitions(n, n).size() == bell[n]);
    if (n >= 2) CHECK(enumerate_partitions(n, n - 1).size() == bell[n] - 1);
  }
  CHECK(enumerate_partitions(4, 3).size() == 14);
  CHECK(enumerate_partitions(4, 1).size() == 1);
  CHECK(enumerate_partitions(3, 2).size() == 4);
}

TEST_CASE("enumerated partitions are distinct, valid and sorted") {
  for (std::size_t n = 1; n <= 6; ++n) {
    const auto ps = enumerate_partitions(n, n);
    CHECK(std::is_sorted(ps.begin(), ps.end()));
    std::set<std::string> seen;
    for (const auto& p : ps) {
      CHECK(seen.insert(p.to_string()).second);
      std::size_t covered = 0;
      for (const auto& b : p.blocks()) covered += b.size();
      CHECK(covered == n);
      CHECK(Partition::parse(p.to_string()) == p);
    }
  }
}

TEST_CASE("bipartitions of three parties") {
  const auto bp = enumerate_bipartitions(3);
  CHECK(strings(bp) == std::vector<std::string>{"1|23", "12|3", "13|2"});
  CHECK(enumerate_bipartitions(4).size() == 7);
  CHECK(enumerate_bipartitions(5).size() == 15);
  for (std::size_t n = 2; n <= 10; ++n) CHECK(enumerate_bipartitions(n).size() == (std::size_t{1} << (n - 1)) - 1);
}

TEST_CASE("directed bipartitions emit both orientations") {
  const auto dirs = enumerate_directed_bipartitions(3);
  CHECK(dirs.size() == 6);
  std::set<std::string> names;
  for (const auto& d : dirs) names.insert(d.to_string());
  CHECK(names.count("1>23") == 1);
  CHECK(names.count("23>1") == 1);
  CHECK(names.count("12>3") == 1);
}

TEST_CASE("parse and canonical ordering") {
  CHECK(Partition::parse("3|21").to_string() == "12|3");
  CHECK(Partition::parse("2|1|3") == Partition::finest(3));
  CHECK(Partition::parse("123") == Partition::whole(3));
  CHECK(Partition::parse("1|23") < Partition::parse("12|3"));
  CHECK(Partition::parse("12|3") < Partition::parse("13|2"));
  CHECK(Partition::parse("1,2|3,10,4,5,6,7,8,9,11").parties() == 11);
  CHECK(Partition::parse("1,2|3,10,4,5,6,7,8,9,11").to_string() == "1,2|3,4,5,6,7,8,9,10,11");
  CHECK(Partition::parse("1|23").max_block() == 2);

  CHECK_THROWS_AS(Partition::parse(""), ParseError);
  CHECK_THROWS_AS(Partition::parse("1|1"), ParseError);
  CHECK_THROWS_AS(Partition::parse("1|3"), ParseError);
  CHECK_THROWS_AS(Partition::parse("1a|2"), ParseError);
  CHECK_THROWS_AS(Partition::parse("0|1"), ParseError);
  CHECK_THROWS_AS(Partition::parse("1||2"), ParseError);
}

TEST_CASE("Partition constructor validates coverage") {
  CHECK_THROWS(Partition({{0}, {0, 1}}, 2));
  CHECK_THROWS(Partition({{0}}, 2));
  CHECK_THROWS(Partition({{0}, {}, {1}}, 2));
  CHECK(Partition({{2, 1}, {0}}, 3).to_string() == "1|23");
}

TEST_CASE("cursor agrees with eager enumeration") {
  for (std::size_t n = 1; n <= 7; ++n)
    for (std::size_t k = 1; k <= n; ++k) {
      PartitionCursor cur(n, k);
      std::vector<Partition> streamed;
      while (auto p = cur.next()) streamed.push_back(*p);
      std::sort(streamed.begin(), streamed.end());
      CHECK(streamed == enumerate_partitions(n, k));
    }
}

TEST_CASE("eager enumeration is capped; the cursor streams beyond") {
  CHECK_THROWS_AS(enumerate_partitions(13, 13), ResourceError);
  PartitionCursor cur(14, 14);
  std::size_t seen = 0;
  while (seen < 1000 && cur.next()) ++seen;
  CHECK(seen == 1000);
  // Max block 1 leaves a single partition regardless of n.
  PartitionCursor singles(20, 1);
  REQUIRE(singles.next().has_value());
  CHECK_FALSE(singles.next().has_value());
}
