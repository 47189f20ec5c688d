#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tsketch {

// One row of a sketch: `size` counters of `bits` bits each, packed
// little-endian into 64-bit words. Counters saturate at 2^bits − 1 instead
// of wrapping; a counter sitting at that ceiling is reported as saturated
// even if it never actually overflowed (conservative classification).
class LayerArray {
 public:
  LayerArray(uint32_t bits, uint64_t size)
      : bits_(bits), size_(size) {
    if (bits_ < 1 || bits_ > 64) {
      throw std::invalid_argument("counter width must be in [1, 64], got " +
                                  std::to_string(bits_));
    }
    if (size_ == 0) {
      throw std::invalid_argument("layer must hold at least one counter");
    }
    if (size_ > (UINT64_MAX - 63) / bits_) {
      throw std::length_error("layer bit count overflows 64-bit addressing");
    }
    mask_ = (bits_ == 64) ? ~uint64_t{0} : (uint64_t{1} << bits_) - 1;
    words_.assign((size_ * bits_ + 63) / 64, 0);
  }

  // Rebuild a layer from its packed words (deserialization path).
  static LayerArray from_words(uint32_t bits, uint64_t size,
                               std::vector<uint64_t> words) {
    LayerArray layer(bits, size);
    if (words.size() != layer.words_.size()) {
      throw std::invalid_argument("packed word count does not match layer shape");
    }
    layer.words_ = std::move(words);
    // Zero the packing tail so popcount-based statistics see counter bits only.
    uint64_t used = size * uint64_t{bits};
    if (used % 64 != 0) {
      layer.words_.back() &= (uint64_t{1} << (used % 64)) - 1;
    }
    return layer;
  }

  uint32_t bits() const noexcept { return bits_; }
  uint64_t size() const noexcept { return size_; }
  uint64_t total_bits() const noexcept { return size_ * bits_; }
  uint64_t saturation_value() const noexcept { return mask_; }
  std::span<const uint64_t> words() const noexcept { return words_; }

  uint64_t value(uint64_t index) const {
    check_index(index);
    return load(index);
  }

  // Saturating add of one; returns the stored value after the operation.
  uint64_t increment(uint64_t index) {
    check_index(index);
    uint64_t v = load(index);
    if (v < mask_) {
      store(index, ++v);
    }
    return v;
  }

  bool saturated(uint64_t index) const {
    check_index(index);
    return load(index) == mask_;
  }

  // Counter-wise saturating sum with another layer of identical shape.
  void add_saturating(const LayerArray& other) {
    if (other.bits_ != bits_ || other.size_ != size_) {
      throw std::invalid_argument("cannot add layers of different shapes");
    }
    for (uint64_t i = 0; i < size_; ++i) {
      uint64_t a = load(i);
      uint64_t b = other.load(i);
      store(i, a > mask_ - b ? mask_ : a + b);
    }
  }

  // Number of one-bits across all counters.
  uint64_t ones() const noexcept {
    uint64_t count = 0;
    for (uint64_t word : words_) {
      count += static_cast<uint64_t>(std::popcount(word));
    }
    return count;
  }

  // Fraction of stored bits that are one — a cheap utilization signal.
  double popcount_ratio() const noexcept {
    return static_cast<double>(ones()) / static_cast<double>(total_bits());
  }

  friend bool operator==(const LayerArray& a, const LayerArray& b) noexcept {
    return a.bits_ == b.bits_ && a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  void check_index(uint64_t index) const {
    if (index >= size_) {
      throw std::out_of_range("counter index " + std::to_string(index) +
                              " out of range for layer of size " +
                              std::to_string(size_));
    }
  }

  uint64_t load(uint64_t index) const noexcept {
    uint64_t bitpos = index * bits_;
    uint64_t word = bitpos >> 6;
    unsigned shift = static_cast<unsigned>(bitpos & 63);
    uint64_t v = words_[word] >> shift;
    unsigned low = 64 - shift;
    if (low < bits_) {
      v |= words_[word + 1] << low;
    }
    return v & mask_;
  }

  void store(uint64_t index, uint64_t v) noexcept {
    uint64_t bitpos = index * bits_;
    uint64_t word = bitpos >> 6;
    unsigned shift = static_cast<unsigned>(bitpos & 63);
    words_[word] = (words_[word] & ~(mask_ << shift)) | (v << shift);
    unsigned low = 64 - shift;
    if (low < bits_) {
      uint64_t high_mask = mask_ >> low;
      words_[word + 1] = (words_[word + 1] & ~high_mask) | (v >> low);
    }
  }

  uint32_t bits_;
  uint64_t size_;
  uint64_t mask_;
  std::vector<uint64_t> words_;
};

}  // namespace tsketch
