#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tsketch {

// A reproducible Zipfian stream: `total` draws over `distinct` ranks with
// P(rank r) ∝ (r+1)^−skew. skew = 0 degenerates to uniform. Items are the
// decimal rank strings "0" … "distinct−1".
struct ZipfSpec {
  double skew = 1.0;
  uint64_t distinct = 0;
  uint64_t total = 0;
  uint64_t seed = 0;

  void validate() const {
    if (!(skew >= 0.0)) {
      throw std::invalid_argument("skew must be >= 0");
    }
    if (distinct == 0) {
      throw std::invalid_argument("distinct item count must be >= 1");
    }
    if (total == 0) {
      throw std::invalid_argument("stream length must be >= 1");
    }
  }
};

// Inverse-CDF sampler over the precomputed cumulative rank distribution.
// Uniform variates come straight off the mt19937_64 bit stream ((x >> 11)
// · 2⁻⁵³) so identical seeds give identical streams on every platform.
class ZipfGenerator {
 public:
  explicit ZipfGenerator(const ZipfSpec& spec) : spec_(spec), rng_(spec.seed) {
    spec_.validate();
    cumulative_.resize(spec_.distinct);
    long double sum = 0.0L;
    for (uint64_t r = 0; r < spec_.distinct; ++r) {
      sum += std::pow(static_cast<long double>(r + 1),
                      -static_cast<long double>(spec_.skew));
      cumulative_[r] = static_cast<double>(sum);
    }
    double norm = cumulative_.back();
    for (double& c : cumulative_) {
      c /= norm;
    }
    cumulative_.back() = 1.0;
  }

  const ZipfSpec& spec() const noexcept { return spec_; }

  uint64_t next_rank() {
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<uint64_t>(it - cumulative_.begin());
  }

  std::string next_item() { return item_for_rank(next_rank()); }

  static std::string item_for_rank(uint64_t rank) { return std::to_string(rank); }

 private:
  ZipfSpec spec_;
  std::vector<double> cumulative_;
  std::mt19937_64 rng_;
};

// Writes the full stream, one item per line.
inline void write_zipf_stream(const ZipfSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  ZipfGenerator gen(spec);
  for (uint64_t i = 0; i < spec.total; ++i) {
    out << gen.next_item() << '\n';
  }
  if (!out.flush()) {
    throw std::runtime_error("failed writing stream to " + path.string());
  }
}

// Newline-delimited item reader. Every line is one item, byte-for-byte;
// a blank line is the empty-string item.
class FileStream {
 public:
  explicit FileStream(const std::filesystem::path& path)
      : in_(path, std::ios::binary) {
    if (!in_) {
      throw std::runtime_error("cannot open " + path.string() + " for reading");
    }
  }

  bool next(std::string& item) { return static_cast<bool>(std::getline(in_, item)); }

 private:
  std::ifstream in_;
};

// Exact frequency table used as ground truth when scoring sketches. Keeps
// first-insertion order so reports are deterministic.
class ExactOracle {
 public:
  ExactOracle() = default;
  ExactOracle(const ExactOracle&) = delete;
  ExactOracle& operator=(const ExactOracle&) = delete;
  ExactOracle(ExactOracle&&) = default;
  ExactOracle& operator=(ExactOracle&&) = default;

  void add(std::string_view item, uint64_t count = 1) {
    auto it = counts_.find(item);
    if (it == counts_.end()) {
      auto [pos, inserted] = counts_.emplace(std::string(item), count);
      (void)inserted;
      order_.push_back(pos->first);
    } else {
      it->second += count;
    }
    total_ += count;
  }

  uint64_t count(std::string_view item) const {
    auto it = counts_.find(item);
    return it == counts_.end() ? 0 : it->second;
  }

  uint64_t total() const noexcept { return total_; }
  uint64_t distinct() const noexcept { return counts_.size(); }

  // Distinct items in first-insertion order; views stay valid for the
  // oracle's lifetime (and across moves — map nodes do not relocate).
  const std::vector<std::string_view>& items() const noexcept { return order_; }

 private:
  struct TransparentHash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::unordered_map<std::string, uint64_t, TransparentHash, std::equal_to<>> counts_;
  std::vector<std::string_view> order_;
  uint64_t total_ = 0;
};

inline ExactOracle oracle_from_file(const std::filesystem::path& path) {
  ExactOracle oracle;
  FileStream stream(path);
  std::string item;
  while (stream.next(item)) {
    oracle.add(item);
  }
  return oracle;
}

inline ExactOracle oracle_from_zipf(const ZipfSpec& spec) {
  ExactOracle oracle;
  ZipfGenerator gen(spec);
  for (uint64_t i = 0; i < spec.total; ++i) {
    oracle.add(gen.next_item());
  }
  return oracle;
}

}  // namespace tsketch
