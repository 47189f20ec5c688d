#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "tsketch/geometry.hpp"
#include "tsketch/layer_array.hpp"

namespace tsketch {

// Aggregate accuracy of a batch of estimates against exact truths.
struct AccuracyReport {
  double aae = 0.0;            // mean |estimate − truth|
  double are = 0.0;            // mean |estimate − truth| / truth over truth > 0
  uint64_t pairs = 0;          // pairs scored into aae
  uint64_t are_skipped = 0;    // zero-truth pairs excluded from are
};

inline AccuracyReport compute_accuracy(std::span<const double> estimates,
                                       std::span<const uint64_t> truths) {
  if (estimates.size() != truths.size()) {
    throw std::invalid_argument("estimate and truth lists must have equal length");
  }
  if (estimates.empty()) {
    throw std::invalid_argument("cannot score an empty batch");
  }
  AccuracyReport r;
  r.pairs = estimates.size();
  double abs_sum = 0.0;
  double rel_sum = 0.0;
  for (size_t i = 0; i < estimates.size(); ++i) {
    double diff = std::abs(estimates[i] - static_cast<double>(truths[i]));
    abs_sum += diff;
    if (truths[i] == 0) {
      ++r.are_skipped;
    } else {
      rel_sum += diff / static_cast<double>(truths[i]);
    }
  }
  r.aae = abs_sum / static_cast<double>(r.pairs);
  uint64_t rel_pairs = r.pairs - r.are_skipped;
  r.are = rel_pairs == 0 ? 0.0 : rel_sum / static_cast<double>(rel_pairs);
  return r;
}

// Physical footprint and utilization of a sketch.
struct ResourceReport {
  uint64_t space_bits = 0;        // sum of layer bit counts
  double occupation_ratio = 0.0;  // fraction of stored bits set to one
  uint64_t capacity = 0;          // top layer's counter size 2^b
  uint64_t max_recordable = 0;    // top layer's saturation value 2^b − 1
};

// Works for any sketch exposing layers() (TSketch and RSketch both do).
template <typename Sketch>
ResourceReport compute_resources(const Sketch& sketch) {
  ResourceReport r;
  uint64_t ones = 0;
  for (const LayerArray& layer : sketch.layers()) {
    r.space_bits += layer.total_bits();
    ones += layer.ones();
  }
  r.occupation_ratio = static_cast<double>(ones) / static_cast<double>(r.space_bits);
  const LayerArray& top = sketch.layers().back();
  r.max_recordable = top.saturation_value();
  r.capacity = top.bits() >= 64 ? UINT64_MAX : (uint64_t{1} << top.bits());
  return r;
}

}  // namespace tsketch
