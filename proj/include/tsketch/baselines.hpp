#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "tsketch/geometry.hpp"
#include "tsketch/hash.hpp"
#include "tsketch/layer_array.hpp"

namespace tsketch {

// How a flat sketch spends its increments.
enum class UpdateRule : uint8_t {
  CountMin = 0,            // bump every mapped counter
  ConservativeUpdate = 1,  // bump only the mapped counters currently minimal
};

inline const char* update_rule_name(UpdateRule r) {
  switch (r) {
    case UpdateRule::CountMin: return "count-min";
    case UpdateRule::ConservativeUpdate: return "conservative-update";
  }
  return "unknown";
}

// Classical flat sketch: every layer has the same counter width. Serves as
// the reference point the trapezoidal layouts are measured against. Queries
// take the plain minimum over all mapped counters (no saturation handling
// beyond the saturating add itself).
class RSketch {
 public:
  RSketch(uint32_t counter_bits, uint32_t layers, uint64_t counters_per_layer,
          uint64_t master_seed, UpdateRule rule)
      : RSketch(SketchGeometry::r_structure(counters_per_layer, layers, counter_bits),
                master_seed, rule) {}

  RSketch(SketchGeometry geometry, uint64_t master_seed, UpdateRule rule)
      : geometry_(std::move(geometry)), master_seed_(master_seed), rule_(rule) {
    geometry_.validate();
    if (geometry_.variant != Variant::RStructure) {
      throw std::invalid_argument("flat sketch requires r-structure geometry");
    }
    layers_.reserve(geometry_.layers());
    seeds_.reserve(geometry_.layers());
    for (uint32_t i = 0; i < geometry_.layers(); ++i) {
      layers_.emplace_back(geometry_.layer_bits[i], geometry_.counters_per_layer);
      seeds_.push_back(derive_layer_seed(master_seed_, i));
    }
  }

  static RSketch restore(SketchGeometry geometry, uint64_t master_seed,
                         UpdateRule rule, uint64_t total_count,
                         std::vector<LayerArray> layers) {
    RSketch s(std::move(geometry), master_seed, rule);
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
  UpdateRule update_rule() const noexcept { return rule_; }
  const std::vector<LayerArray>& layers() const noexcept { return layers_; }

  uint64_t mapped_index(uint32_t layer, std::string_view item) const {
    return xxhash64(item, seeds_[layer]) % geometry_.counters_per_layer;
  }

  void insert(std::string_view item) {
    if (rule_ == UpdateRule::CountMin) {
      for (uint32_t i = 0; i < layers_.size(); ++i) {
        layers_[i].increment(mapped_index(i, item));
      }
    } else {
      // Conservative update: only the counters currently equal to the
      // item's minimum move, so no counter ever exceeds what the count-min
      // rule would have given it.
      uint64_t min_value = std::numeric_limits<uint64_t>::max();
      indices_.resize(layers_.size());
      for (uint32_t i = 0; i < layers_.size(); ++i) {
        indices_[i] = mapped_index(i, item);
        uint64_t v = layers_[i].value(indices_[i]);
        if (v < min_value) min_value = v;
      }
      for (uint32_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].value(indices_[i]) == min_value) {
          layers_[i].increment(indices_[i]);
        }
      }
    }
    ++total_count_;
  }

  uint64_t query(std::string_view item) const {
    uint64_t best = std::numeric_limits<uint64_t>::max();
    for (uint32_t i = 0; i < layers_.size(); ++i) {
      uint64_t v = layers_[i].value(mapped_index(i, item));
      if (v < best) best = v;
    }
    return best;
  }

 private:
  SketchGeometry geometry_;
  uint64_t master_seed_ = 0;
  uint64_t total_count_ = 0;
  UpdateRule rule_;
  std::vector<LayerArray> layers_;
  std::vector<uint64_t> seeds_;
  std::vector<uint64_t> indices_;  // scratch for conservative updates
};

}  // namespace tsketch
