#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "tsketch/serialization.hpp"

using namespace tsketch;

namespace {

TSketch sample_sketch() {
  SketchGeometry g = SketchGeometry::trapezoidal(Variant::SpaceSaving, 257, 65536, 4, 2);
  TSketch s(g, 0xDEADBEEF);
  for (int i = 0; i < 900; ++i) s.insert(std::to_string(i % 111));
  return s;
}

RSketch sample_baseline(UpdateRule rule) {
  RSketch s(16, 4, 257, 0xDEADBEEF, rule);
  for (int i = 0; i < 900; ++i) s.insert(std::to_string(i % 111));
  return s;
}

}  // namespace

TEST_CASE("sketch round-trip preserves every query", "[serialization]") {
  TSketch s = sample_sketch();
  std::vector<uint8_t> bytes = serialize(s);
  TSketch loaded = deserialize_tsketch(bytes);

  CHECK(loaded.master_seed() == s.master_seed());
  CHECK(loaded.total_count() == s.total_count());
  CHECK(loaded.geometry().layer_bits == s.geometry().layer_bits);
  CHECK(loaded.geometry().base_bits == s.geometry().base_bits);
  for (int i = 0; i < 111; ++i) {
    std::string item = std::to_string(i);
    CHECK(loaded.query(item).raw_estimate == s.query(item).raw_estimate);
  }
  // Serialization is deterministic: same state, same bytes.
  CHECK(serialize(loaded) == bytes);
}

TEST_CASE("baseline round-trip preserves rule and queries", "[serialization]") {
  for (UpdateRule rule : {UpdateRule::CountMin, UpdateRule::ConservativeUpdate}) {
    RSketch s = sample_baseline(rule);
    std::vector<uint8_t> bytes = serialize(s);
    RSketch loaded = deserialize_rsketch(bytes);
    CHECK(loaded.update_rule() == rule);
    CHECK(loaded.total_count() == s.total_count());
    for (int i = 0; i < 111; ++i) {
      std::string item = std::to_string(i);
      CHECK(loaded.query(item) == s.query(item));
    }
  }
}

TEST_CASE("deserialize_any distinguishes the sketch kinds", "[serialization]") {
  AnySketch layered = deserialize_any(serialize(sample_sketch()));
  CHECK(std::holds_alternative<TSketch>(layered));
  AnySketch flat = deserialize_any(serialize(sample_baseline(UpdateRule::CountMin)));
  CHECK(std::holds_alternative<RSketch>(flat));

  CHECK_THROWS_AS(deserialize_rsketch(serialize(sample_sketch())), SerializationError);
  CHECK_THROWS_AS(deserialize_tsketch(serialize(sample_baseline(UpdateRule::CountMin))),
                  SerializationError);
}

TEST_CASE("malformed payloads are rejected", "[serialization]") {
  std::vector<uint8_t> good = serialize(sample_sketch());

  SECTION("empty input") {
    CHECK_THROWS_AS(deserialize_tsketch(std::vector<uint8_t>{}), SerializationError);
  }
  SECTION("corrupted magic") {
    std::vector<uint8_t> bad = good;
    bad[0] = 'X';
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
  }
  SECTION("unsupported version") {
    std::vector<uint8_t> bad = good;
    bad[4] = 0x7F;
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
  }
  SECTION("unknown variant") {
    std::vector<uint8_t> bad = good;
    bad[6] = 9;
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
  }
  SECTION("truncated payload") {
    std::vector<uint8_t> bad(good.begin(), good.end() - 5);
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
    std::vector<uint8_t> header_only(good.begin(), good.begin() + 10);
    CHECK_THROWS_AS(deserialize_tsketch(header_only), SerializationError);
  }
  SECTION("trailing garbage") {
    std::vector<uint8_t> bad = good;
    bad.push_back(0);
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
  }
  SECTION("widths breaking the layout law") {
    // Byte layout: magic(4) version(2) variant(1) hash(1) K(2) w(8) d(2)
    // seed(8) N(8), then the width bytes. Swap the first two widths so the
    // strict-increase rule fails.
    size_t widths_at = 4 + 2 + 1 + 1 + 2 + 8 + 2 + 8 + 8;
    std::vector<uint8_t> bad = good;
    std::swap(bad[widths_at], bad[widths_at + 1]);
    CHECK_THROWS_AS(deserialize_tsketch(bad), SerializationError);
  }
}

TEST_CASE("wire layout matches the documented header", "[serialization]") {
  TSketch s = sample_sketch();
  std::vector<uint8_t> bytes = serialize(s);
  REQUIRE(bytes.size() >= 40);
  CHECK(bytes[0] == 'T');
  CHECK(bytes[1] == 'S');
  CHECK(bytes[2] == 'K');
  CHECK(bytes[3] == 'T');
  CHECK(bytes[4] == 1);  // version, little-endian u16
  CHECK(bytes[5] == 0);
  CHECK(bytes[6] == 1);  // variant: space-saving
  CHECK(bytes[7] == kHashFamilyXxh64);
  CHECK(bytes[8] == 4);  // layer count u16
  CHECK(bytes[9] == 0);
  // w = 257 little-endian u64
  CHECK(bytes[10] == 1);
  CHECK(bytes[11] == 1);
  for (int i = 12; i < 18; ++i) CHECK(bytes[i] == 0);
  CHECK(bytes[18] == 2);  // width ratio u16
  CHECK(bytes[19] == 0);
  // master seed 0xDEADBEEF little-endian u64
  CHECK(bytes[20] == 0xEF);
  CHECK(bytes[21] == 0xBE);
  CHECK(bytes[22] == 0xAD);
  CHECK(bytes[23] == 0xDE);
  for (int i = 24; i < 28; ++i) CHECK(bytes[i] == 0);
  // N = 900 little-endian u64
  CHECK(bytes[28] == (900 & 0xFF));
  CHECK(bytes[29] == (900 >> 8));
  for (int i = 30; i < 36; ++i) CHECK(bytes[i] == 0);
  // widths 13,14,15,16
  CHECK(bytes[36] == 13);
  CHECK(bytes[37] == 14);
  CHECK(bytes[38] == 15);
  CHECK(bytes[39] == 16);
  // total size: header + packed words
  size_t words = 0;
  for (uint8_t b : {13, 14, 15, 16}) words += (257 * size_t{b} + 63) / 64;
  CHECK(bytes.size() == 40 + words * 8);
}
