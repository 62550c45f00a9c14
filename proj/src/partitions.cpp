#include "gmc/partitions.hpp"

#include "gmc/errors.hpp"

#include <algorithm>
#include <charconv>

namespace gmc {

namespace {

std::string block_text(const Block& b, bool with_commas) {
  std::string out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (with_commas && i > 0) out += ',';
    out += std::to_string(b[i] + 1);
  }
  return out;
}

std::size_t parse_index(std::string_view tok) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size() || v == 0)
    throw ParseError("partition: bad index '" + std::string(tok) + "'");
  return v - 1;
}

}  // namespace

Partition::Partition(std::vector<Block> blocks, std::size_t n) : blocks_(std::move(blocks)), n_(n) {
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (auto& b : blocks_) {
    if (b.empty()) throw DomainError("partition: empty block");
    std::sort(b.begin(), b.end());
    for (auto q : b) {
      if (q >= n || seen[q]) throw DomainError("partition: blocks overlap or index out of range");
      seen[q] = true;
      ++count;
    }
  }
  if (count != n) throw DomainError("partition: blocks do not cover all subsystems");
  std::sort(blocks_.begin(), blocks_.end(),
            [](const Block& a, const Block& b) { return a.front() < b.front(); });
}

Partition Partition::finest(std::size_t n) {
  std::vector<Block> blocks;
  for (std::size_t q = 0; q < n; ++q) blocks.push_back({q});
  return Partition(std::move(blocks), n);
}

Partition Partition::whole(std::size_t n) {
  Block b(n);
  for (std::size_t q = 0; q < n; ++q) b[q] = q;
  return Partition({b}, n);
}

Partition Partition::parse(std::string_view text) {
  std::vector<Block> blocks;
  std::size_t n = 0;
  const bool comma_form = text.find(',') != std::string_view::npos;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t bar = text.find('|', start);
    if (bar == std::string_view::npos) bar = text.size();
    const std::string_view part = text.substr(start, bar - start);
    if (part.empty()) throw ParseError("partition: empty block in '" + std::string(text) + "'");
    Block b;
    if (comma_form) {
      std::size_t s = 0;
      while (s <= part.size()) {
        std::size_t comma = part.find(',', s);
        if (comma == std::string_view::npos) comma = part.size();
        b.push_back(parse_index(part.substr(s, comma - s)));
        s = comma + 1;
      }
    } else {
      for (char ch : part) b.push_back(parse_index(std::string_view(&ch, 1)));
    }
    for (auto q : b) n = std::max(n, q + 1);
    blocks.push_back(std::move(b));
    start = bar + 1;
  }
  try {
    return Partition(std::move(blocks), n);
  } catch (const DomainError& e) {
    throw ParseError(std::string(e.what()) + " in '" + std::string(text) + "'");
  }
}

std::size_t Partition::max_block() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.size());
  return m;
}

std::string Partition::to_string() const {
  const bool commas = n_ > 9;
  std::string out;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i > 0) out += '|';
    out += block_text(blocks_[i], commas);
  }
  return out;
}

std::string DirectedBipartition::to_string() const {
  const std::size_t n = steering.size() + steered.size();
  return block_text(steering, n > 9) + ">" + block_text(steered, n > 9);
}

// --- PartitionCursor --------------------------------------------------------

PartitionCursor::PartitionCursor(std::size_t n, std::size_t max_block)
    : n_(n), max_block_(max_block), rgs_(n, 0), prefix_max_(n, 0), sizes_(n + 1, 0) {
  if (n < 1) throw DomainError("partitions: n must be >= 1");
  if (max_block < 1 || max_block > n) throw DomainError("partitions: need 1 <= max_block <= n");
  sizes_[0] = 1;
  fill_from(1);
}

// Smallest admissible labels for positions j..n-1. A fresh label always fits.
void PartitionCursor::fill_from(std::size_t j) {
  for (; j < n_; ++j) {
    std::size_t v = 0;
    while (sizes_[v] >= max_block_) ++v;
    rgs_[j] = v;
    ++sizes_[v];
    prefix_max_[j] = std::max(prefix_max_[j - 1], v);
  }
}

bool PartitionCursor::advance() {
  for (std::size_t i = n_; i-- > 1;) {
    --sizes_[rgs_[i]];
    for (std::size_t v = rgs_[i] + 1; v <= prefix_max_[i - 1] + 1; ++v) {
      if (sizes_[v] >= max_block_) continue;
      rgs_[i] = v;
      ++sizes_[v];
      prefix_max_[i] = std::max(prefix_max_[i - 1], v);
      fill_from(i + 1);
      return true;
    }
  }
  return false;
}

Partition PartitionCursor::current() const {
  std::vector<Block> blocks(prefix_max_.back() + 1);
  for (std::size_t q = 0; q < n_; ++q) blocks[rgs_[q]].push_back(q);
  return Partition(std::move(blocks), n_);
}

std::optional<Partition> PartitionCursor::next() {
  if (done_) return std::nullopt;
  if (!started_) {
    started_ = true;
    return current();
  }
  if (advance()) return current();
  done_ = true;
  return std::nullopt;
}

// --- eager enumeration ------------------------------------------------------

std::vector<Partition> enumerate_partitions(std::size_t n, std::size_t max_block) {
  if (n > kEagerPartitionLimit)
    throw ResourceError("enumerate_partitions: n > " + std::to_string(kEagerPartitionLimit) +
                        "; stream with PartitionCursor");
  PartitionCursor cursor(n, max_block);
  std::vector<Partition> out;
  while (auto p = cursor.next()) out.push_back(std::move(*p));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Partition> enumerate_bipartitions(std::size_t n) {
  if (n < 2) throw DomainError("enumerate_bipartitions: n must be >= 2");
  if (n > 63) throw ResourceError("enumerate_bipartitions: n too large");
  std::vector<Partition> out;
  // Subsystem 0 is always on the first side; the other side must be nonempty.
  const std::size_t rest = n - 1;
  for (std::size_t mask = 0; mask + 1 < (std::size_t{1} << rest); ++mask) {
    Block a{0}, b;
    for (std::size_t q = 1; q < n; ++q) ((mask >> (q - 1)) & 1U ? a : b).push_back(q);
    out.emplace_back(std::vector<Block>{a, b}, n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DirectedBipartition> enumerate_directed_bipartitions(std::size_t n) {
  std::vector<DirectedBipartition> out;
  for (const auto& p : enumerate_bipartitions(n)) {
    const auto& b = p.blocks();
    out.push_back({b[0], b[1]});
    out.push_back({b[1], b[0]});
  }
  return out;
}

}  // namespace gmc
