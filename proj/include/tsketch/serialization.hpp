#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "tsketch/baselines.hpp"
#include "tsketch/geometry.hpp"
#include "tsketch/hash.hpp"
#include "tsketch/layer_array.hpp"
#include "tsketch/sketch.hpp"

namespace tsketch {

class SerializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::array<uint8_t, 4> kMagic{'T', 'S', 'K', 'T'};
inline constexpr uint16_t kFormatVersion = 1;

// Sub-kind stored only for flat (variant 0) sketches, which come in three
// behavioral flavours sharing one layout.
enum class FlatKind : uint8_t {
  BaselineCountMin = 0,
  BaselineConservative = 1,
  SaturatingMinSketch = 2,
};

namespace detail {

// Little-endian byte packing, independent of host width assumptions.
struct ByteWriter {
  std::vector<uint8_t> out;

  void u8(uint8_t v) { out.push_back(v); }
  void u16(uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      out.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }
};

struct ByteReader {
  std::span<const uint8_t> in;
  size_t pos = 0;

  void need(size_t n) const {
    if (in.size() - pos < n) {
      throw SerializationError("truncated sketch payload");
    }
  }
  uint8_t u8() {
    need(1);
    return in[pos++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(in[pos]) |
                 static_cast<uint16_t>(in[pos + 1]) << 8;
    pos += 2;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
    }
    pos += 8;
    return v;
  }
  void finish() const {
    if (pos != in.size()) {
      throw SerializationError("unexpected trailing bytes after sketch payload");
    }
  }
};

struct Header {
  Variant variant;
  FlatKind flat_kind;  // meaningful only when variant == RStructure
  SketchGeometry geometry;
  uint64_t master_seed;
  uint64_t total_count;
};

inline void write_header(ByteWriter& w, const SketchGeometry& g, FlatKind kind,
                         uint64_t master_seed, uint64_t total_count) {
  w.out.insert(w.out.end(), kMagic.begin(), kMagic.end());
  w.u16(kFormatVersion);
  w.u8(static_cast<uint8_t>(g.variant));
  if (g.variant == Variant::RStructure) {
    w.u8(static_cast<uint8_t>(kind));
  }
  w.u8(kHashFamilyXxh64);
  w.u16(static_cast<uint16_t>(g.layers()));
  w.u64(g.counters_per_layer);
  w.u16(g.width_ratio);
  w.u64(master_seed);
  w.u64(total_count);
  for (uint8_t b : g.layer_bits) {
    w.u8(b);
  }
}

inline void write_layers(ByteWriter& w, const std::vector<LayerArray>& layers) {
  for (const LayerArray& layer : layers) {
    for (uint64_t word : layer.words()) {
      w.u64(word);
    }
  }
}

inline Header read_header(ByteReader& r) {
  std::array<uint8_t, 4> magic{};
  for (auto& b : magic) b = r.u8();
  if (magic != kMagic) {
    throw SerializationError("bad magic: not a sketch file");
  }
  uint16_t version = r.u16();
  if (version != kFormatVersion) {
    throw SerializationError("unsupported format version " + std::to_string(version));
  }
  uint8_t variant_byte = r.u8();
  if (variant_byte > 2) {
    throw SerializationError("unknown sketch variant " + std::to_string(variant_byte));
  }
  Header h{};
  h.variant = static_cast<Variant>(variant_byte);
  h.flat_kind = FlatKind::SaturatingMinSketch;
  if (h.variant == Variant::RStructure) {
    uint8_t kind = r.u8();
    if (kind > 2) {
      throw SerializationError("unknown flat-sketch kind " + std::to_string(kind));
    }
    h.flat_kind = static_cast<FlatKind>(kind);
  }
  uint8_t hash_family = r.u8();
  if (hash_family != kHashFamilyXxh64) {
    throw SerializationError("unsupported hash family " + std::to_string(hash_family));
  }
  uint16_t layer_count = r.u16();
  uint64_t counters = r.u64();
  uint16_t ratio = r.u16();
  h.master_seed = r.u64();
  h.total_count = r.u64();
  if (layer_count == 0) {
    throw SerializationError("sketch must have at least one layer");
  }
  std::vector<uint8_t> widths(layer_count);
  for (auto& b : widths) b = r.u8();

  h.geometry.variant = h.variant;
  h.geometry.counters_per_layer = counters;
  h.geometry.layer_bits = std::move(widths);
  h.geometry.width_ratio = ratio;
  // The reference counter size is not part of the wire format; recover it
  // where the layout determines it, leave it unknown otherwise.
  switch (h.variant) {
    case Variant::RStructure:
      h.geometry.base_bits = h.geometry.layer_bits.front();
      break;
    case Variant::SpaceSaving:
      h.geometry.base_bits = h.geometry.layer_bits.back();
      break;
    case Variant::CapacityImprovement:
      h.geometry.base_bits = 0;
      break;
  }
  try {
    h.geometry.validate();
  } catch (const std::invalid_argument& e) {
    throw SerializationError(std::string("invalid geometry on load: ") + e.what());
  }
  return h;
}

inline std::vector<LayerArray> read_layers(ByteReader& r, const SketchGeometry& g) {
  std::vector<LayerArray> layers;
  layers.reserve(g.layers());
  for (uint32_t i = 0; i < g.layers(); ++i) {
    uint64_t bits = g.counters_per_layer * uint64_t{g.layer_bits[i]};
    uint64_t word_count = (bits + 63) / 64;
    std::vector<uint64_t> words(word_count);
    for (auto& word : words) word = r.u64();
    layers.push_back(LayerArray::from_words(g.layer_bits[i], g.counters_per_layer,
                                            std::move(words)));
  }
  return layers;
}

}  // namespace detail

inline std::vector<uint8_t> serialize(const TSketch& s) {
  detail::ByteWriter w;
  detail::write_header(w, s.geometry(), FlatKind::SaturatingMinSketch,
                       s.master_seed(), s.total_count());
  detail::write_layers(w, s.layers());
  return std::move(w.out);
}

inline std::vector<uint8_t> serialize(const RSketch& s) {
  detail::ByteWriter w;
  FlatKind kind = s.update_rule() == UpdateRule::CountMin
                      ? FlatKind::BaselineCountMin
                      : FlatKind::BaselineConservative;
  detail::write_header(w, s.geometry(), kind, s.master_seed(), s.total_count());
  detail::write_layers(w, s.layers());
  return std::move(w.out);
}

using AnySketch = std::variant<TSketch, RSketch>;

inline AnySketch deserialize_any(std::span<const uint8_t> bytes) {
  detail::ByteReader r{bytes};
  detail::Header h = detail::read_header(r);
  std::vector<LayerArray> layers = detail::read_layers(r, h.geometry);
  r.finish();
  if (h.variant == Variant::RStructure &&
      h.flat_kind != FlatKind::SaturatingMinSketch) {
    UpdateRule rule = h.flat_kind == FlatKind::BaselineCountMin
                          ? UpdateRule::CountMin
                          : UpdateRule::ConservativeUpdate;
    return RSketch::restore(std::move(h.geometry), h.master_seed, rule,
                            h.total_count, std::move(layers));
  }
  return TSketch::restore(std::move(h.geometry), h.master_seed, h.total_count,
                          std::move(layers));
}

inline TSketch deserialize_tsketch(std::span<const uint8_t> bytes) {
  AnySketch any = deserialize_any(bytes);
  if (auto* t = std::get_if<TSketch>(&any)) {
    return std::move(*t);
  }
  throw SerializationError("payload holds a baseline sketch, not a layered sketch");
}

inline RSketch deserialize_rsketch(std::span<const uint8_t> bytes) {
  AnySketch any = deserialize_any(bytes);
  if (auto* r = std::get_if<RSketch>(&any)) {
    return std::move(*r);
  }
  throw SerializationError("payload holds a layered sketch, not a baseline sketch");
}

}  // namespace tsketch
