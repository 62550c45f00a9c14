#pragma once

// Set partitions of subsystem indices. Indices are 0-based in the API; the
// textual notation ("12|3", or "1,2|3" once any index exceeds 9) is 1-based.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gmc {

using Block = std::vector<std::size_t>;

// Canonical form: blocks internally sorted, blocks ordered by smallest
// element. Ordering is lexicographic over the block lists, so 1|23 < 12|3 < 13|2.
class Partition {
 public:
  Partition() = default;
  // Validates disjointness and coverage of {0..n-1}, then canonicalizes.
  Partition(std::vector<Block> blocks, std::size_t n);

  static Partition finest(std::size_t n);
  static Partition whole(std::size_t n);
  // "12|3" or "1,2|3" (1-based); n inferred from the largest index.
  static Partition parse(std::string_view text);

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t parties() const { return n_; }
  std::size_t block_count() const { return blocks_.size(); }
  std::size_t max_block() const;
  std::string to_string() const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.blocks_ <=> b.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  std::size_t n_ = 0;
};

struct DirectedBipartition {
  Block steering;  // A
  Block steered;   // A^c

  std::string to_string() const;  // "1>23": steering side first
  friend bool operator==(const DirectedBipartition&, const DirectedBipartition&) = default;
};

inline constexpr std::size_t kEagerPartitionLimit = 12;

// Streams every partition of {0..n-1} with blocks no larger than max_block, in
// restricted-growth-string order. Only admissible strings are visited, so
// the cost per partition is O(n^2) for any n; memory stays O(n).
class PartitionCursor {
 public:
  PartitionCursor(std::size_t n, std::size_t max_block);
  std::optional<Partition> next();

 private:
  bool advance();
  void fill_from(std::size_t j);
  Partition current() const;

  std::size_t n_;
  std::size_t max_block_;
  std::vector<std::size_t> rgs_;
  std::vector<std::size_t> prefix_max_;  // max(rgs_[0..i])
  std::vector<std::size_t> sizes_;       // block sizes of the current string
  bool started_ = false;
  bool done_ = false;
};

// Materialized, sorted canonically. n > kEagerPartitionLimit -> ResourceError
// (use PartitionCursor instead).
std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t max_block);
std::vector<Partition> enumerate_bipartitions(std::size_t n);
std::vector<DirectedBipartition> enumerate_directed_bipartitions(std::size_t n);

}  // namespace gmc
