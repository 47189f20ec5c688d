#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsketch {

// Counter layout families. RStructure keeps every layer at the same width
// (the classical layout); the trapezoidal families grow widths geometrically
// from a narrow first layer to a wide last one.
enum class Variant : uint8_t {
  RStructure = 0,
  SpaceSaving = 1,
  CapacityImprovement = 2,
};

inline const char* variant_name(Variant v) {
  switch (v) {
    case Variant::RStructure: return "r-structure";
    case Variant::SpaceSaving: return "space-saving";
    case Variant::CapacityImprovement: return "capacity-improvement";
  }
  return "unknown";
}

namespace detail {

// d^exp < bound, evaluated without 64-bit overflow.
inline bool power_below(uint64_t d, uint32_t exp, uint64_t bound) {
  uint64_t acc = 1;
  for (uint32_t i = 0; i < exp; ++i) {
    if (acc > UINT64_MAX / d) return false;
    acc *= d;
  }
  return acc < bound;
}

inline uint32_t exact_log2(uint64_t v, const char* what) {
  if (v < 2 || !std::has_single_bit(v)) {
    throw std::invalid_argument(std::string(what) +
                                " must be a power of two >= 2, got " +
                                std::to_string(v));
  }
  return static_cast<uint32_t>(std::countr_zero(v));
}

}  // namespace detail

// Full static description of a sketch: how many counters per layer, each
// layer's width in bits, and which family the layout belongs to. Layer 0 is
// the narrowest layer in trapezoidal layouts.
struct SketchGeometry {
  Variant variant = Variant::RStructure;
  uint64_t counters_per_layer = 0;   // shared row length w
  std::vector<uint8_t> layer_bits;   // widths, narrowest first
  uint16_t width_ratio = 1;          // geometric step d between layer sizes; 1 when flat
  uint8_t base_bits = 0;             // log2 of the reference counter size B; 0 when unknown

  uint32_t layers() const noexcept { return static_cast<uint32_t>(layer_bits.size()); }

  // Bits in one slice across all layers (one counter from each layer).
  uint64_t slice_bits() const noexcept {
    return std::accumulate(layer_bits.begin(), layer_bits.end(), uint64_t{0});
  }

  uint64_t total_bits() const noexcept { return counters_per_layer * slice_bits(); }

  // Everything that must agree for two sketches to be mergeable. base_bits
  // is bookkeeping only (it is not recoverable from every serialized form),
  // so it deliberately does not participate.
  bool merge_compatible(const SketchGeometry& other) const noexcept {
    return variant == other.variant &&
           counters_per_layer == other.counters_per_layer &&
           layer_bits == other.layer_bits &&
           width_ratio == other.width_ratio;
  }

  void validate() const {
    if (counters_per_layer == 0) {
      throw std::invalid_argument("geometry needs at least one counter per layer");
    }
    if (layer_bits.empty()) {
      throw std::invalid_argument("geometry needs at least one layer");
    }
    for (uint8_t b : layer_bits) {
      if (b < 1 || b > 64) {
        throw std::invalid_argument("layer width must be in [1, 64], got " +
                                    std::to_string(int(b)));
      }
    }
    if (variant == Variant::RStructure) {
      for (uint8_t b : layer_bits) {
        if (b != layer_bits.front()) {
          throw std::invalid_argument("r-structure layers must share one width");
        }
      }
      if (width_ratio != 1) {
        throw std::invalid_argument("r-structure has no width ratio; expected 1");
      }
    } else {
      if (width_ratio < 2 || !std::has_single_bit(uint64_t{width_ratio})) {
        throw std::invalid_argument("width ratio must be a power of two >= 2");
      }
      uint32_t step = static_cast<uint32_t>(std::countr_zero(uint64_t{width_ratio}));
      for (size_t i = 1; i < layer_bits.size(); ++i) {
        if (layer_bits[i] != layer_bits[i - 1] + step) {
          throw std::invalid_argument(
              "trapezoidal widths must increase by log2(ratio) per layer");
        }
      }
    }
  }

  // Flat layout: `layers` layers of `counter_bits`-bit counters.
  static SketchGeometry r_structure(uint64_t counters_per_layer, uint32_t layers,
                                    uint32_t counter_bits) {
    if (layers == 0) throw std::invalid_argument("layer count must be >= 1");
    if (counter_bits < 1 || counter_bits > 64) {
      throw std::invalid_argument("counter width must be in [1, 64]");
    }
    SketchGeometry g;
    g.variant = Variant::RStructure;
    g.counters_per_layer = counters_per_layer;
    g.layer_bits.assign(layers, static_cast<uint8_t>(counter_bits));
    g.width_ratio = 1;
    g.base_bits = static_cast<uint8_t>(counter_bits);
    g.validate();
    return g;
  }

  // Trapezoidal layout with the widest layer matching counter size
  // `top_size` (= B, a power of two) and layer sizes shrinking by a factor
  // of `ratio` (= d) toward the first layer. Requires d^(layers−1) < B so
  // every width stays positive.
  static SketchGeometry trapezoidal(Variant variant, uint64_t counters_per_layer,
                                    uint64_t top_size, uint32_t layers,
                                    uint64_t ratio) {
    if (variant == Variant::RStructure) {
      throw std::invalid_argument("trapezoidal layout requires a trapezoidal variant");
    }
    if (layers == 0) throw std::invalid_argument("layer count must be >= 1");
    uint32_t top_bits = detail::exact_log2(top_size, "top counter size");
    if (ratio < 2) throw std::invalid_argument("size ratio must be >= 2");
    if (!detail::power_below(ratio, layers - 1, top_size)) {
      throw std::invalid_argument("ratio^(layers-1) must stay below the top counter size");
    }
    uint32_t step = detail::exact_log2(ratio, "size ratio");
    SketchGeometry g;
    g.variant = variant;
    g.counters_per_layer = counters_per_layer;
    g.layer_bits.resize(layers);
    for (uint32_t i = 0; i < layers; ++i) {
      g.layer_bits[i] = static_cast<uint8_t>(top_bits - (layers - 1 - i) * step);
    }
    g.width_ratio = static_cast<uint16_t>(ratio);
    g.base_bits = static_cast<uint8_t>(top_bits);
    g.validate();
    return g;
  }

  // Escape hatch for layouts assembled elsewhere (planner, deserializer).
  static SketchGeometry from_layer_bits(Variant variant, uint64_t counters_per_layer,
                                        std::vector<uint8_t> layer_bits,
                                        uint16_t width_ratio, uint8_t base_bits) {
    SketchGeometry g;
    g.variant = variant;
    g.counters_per_layer = counters_per_layer;
    g.layer_bits = std::move(layer_bits);
    g.width_ratio = width_ratio;
    g.base_bits = base_bits;
    g.validate();
    return g;
  }
};

}  // namespace tsketch
