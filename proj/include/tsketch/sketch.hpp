#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "tsketch/analytics.hpp"
#include "tsketch/geometry.hpp"
#include "tsketch/hash.hpp"
#include "tsketch/layer_array.hpp"

namespace tsketch {

struct QueryResult {
  uint64_t raw_estimate = 0;      // min over the item's non-saturated counters
  uint32_t saturated_layers = 0;  // how many of the item's counters are saturated
  bool all_saturated = false;     // every mapped counter saturated; raw is a floor
  std::optional<double> corrected_estimate;  // set by corrected queries only
};

// Frequency sketch over layers of saturating counters. Each layer hashes
// items independently into `counters_per_layer` cells; an insert increments
// one cell per layer, a query takes the minimum over the cells that have not
// saturated. With trapezoidal geometry the narrow layers absorb the bulk of
// the space savings while the wide layers keep heavy items countable.
class TSketch {
 public:
  TSketch(SketchGeometry geometry, uint64_t master_seed)
      : geometry_(std::move(geometry)), master_seed_(master_seed) {
    geometry_.validate();
    layers_.reserve(geometry_.layers());
    seeds_.reserve(geometry_.layers());
    for (uint32_t i = 0; i < geometry_.layers(); ++i) {
      layers_.emplace_back(geometry_.layer_bits[i], geometry_.counters_per_layer);
      seeds_.push_back(derive_layer_seed(master_seed_, i));
    }
  }

  // Reassemble a sketch from previously captured state (deserialization).
  static TSketch restore(SketchGeometry geometry, uint64_t master_seed,
                         uint64_t total_count, std::vector<LayerArray> layers) {
    TSketch s(std::move(geometry), master_seed);
    if (layers.size() != s.layers_.size()) {
      throw std::invalid_argument("layer count does not match geometry");
    }
    for (size_t i = 0; i < layers.size(); ++i) {
      if (layers[i].bits() != s.layers_[i].bits() ||
          layers[i].size() != s.layers_[i].size()) {
        throw std::invalid_argument("layer shape does not match geometry");
      }
    }
    s.layers_ = std::move(layers);
    s.total_count_ = total_count;
    return s;
  }

  const SketchGeometry& geometry() const noexcept { return geometry_; }
  uint64_t master_seed() const noexcept { return master_seed_; }
  uint64_t total_count() const noexcept { return total_count_; }
  const std::vector<LayerArray>& layers() const noexcept { return layers_; }

  uint64_t mapped_index(uint32_t layer, std::string_view item) const {
    return xxhash64(item, seeds_[layer]) % geometry_.counters_per_layer;
  }

  void insert(std::string_view item) {
    for (uint32_t i = 0; i < layers_.size(); ++i) {
      layers_[i].increment(mapped_index(i, item));
    }
    ++total_count_;
  }

  QueryResult query(std::string_view item) const {
    QueryResult r;
    uint64_t best = std::numeric_limits<uint64_t>::max();
    for (uint32_t i = 0; i < layers_.size(); ++i) {
      const LayerArray& layer = layers_[i];
      uint64_t v = layer.value(mapped_index(i, item));
      if (v == layer.saturation_value()) {
        ++r.saturated_layers;
      } else if (v < best) {
        best = v;
      }
    }
    if (r.saturated_layers == layers_.size()) {
      // No usable counter: the largest saturation ceiling is the best
      // available lower bound on the true frequency.
      r.all_saturated = true;
      r.raw_estimate = layers_.back().saturation_value();
    } else {
      r.raw_estimate = best;
    }
    return r;
  }

  // Query with the expected collision mass subtracted. `distinct_items`
  // (the number of distinct keys in the stream) feeds the collision model;
  // it is information the sketch itself does not track, so the caller
  // supplies it.
  QueryResult query_corrected(std::string_view item, uint64_t distinct_items) const {
    if (distinct_items == 0) {
      throw std::invalid_argument("distinct item count must be >= 1");
    }
    QueryResult r = query(item);
    double rho = error_probability(geometry_.counters_per_layer, distinct_items,
                                   geometry_.layers(), r.saturated_layers);
    r.corrected_estimate = corrected_estimate(r.raw_estimate, rho, total_count_,
                                              geometry_.counters_per_layer);
    return r;
  }

  friend TSketch merge(const TSketch& a, const TSketch& b) {
    if (!a.geometry_.merge_compatible(b.geometry_) ||
        a.master_seed_ != b.master_seed_) {
      throw std::invalid_argument(
          "merge requires identical geometry and hash seeds");
    }
    TSketch out = a;
    for (size_t i = 0; i < out.layers_.size(); ++i) {
      out.layers_[i].add_saturating(b.layers_[i]);
    }
    out.total_count_ += b.total_count_;
    return out;
  }

 private:
  SketchGeometry geometry_;
  uint64_t master_seed_ = 0;
  uint64_t total_count_ = 0;
  std::vector<LayerArray> layers_;
  std::vector<uint64_t> seeds_;
};

}  // namespace tsketch
