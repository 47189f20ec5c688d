#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tsketch/geometry.hpp"

namespace tsketch {

// Bit accounting of a trapezoidal plan against its flat reference.
struct SpaceReport {
  uint64_t reference_bits = 0;  // flat layout of the same B, k, w
  uint64_t plan_bits = 0;       // bits the trapezoidal plan actually uses
  uint64_t saved_bits = 0;      // reference − space-saving plan
  double reduction_ratio = 0.0; // saved_bits / reference_bits
  uint64_t residual_bits = 0;   // savings left over after extra layers are paid for
};

// Result of the extra-layer planner: how many layers the saved bits fund and
// how far the counter ceiling rises as a result.
struct CapacityPlan {
  uint32_t base_layers = 0;       // k
  uint64_t ratio = 2;             // d
  double extra_exact = 0.0;       // real-valued solution s of the budget equation
  uint32_t extra_layers = 0;      // s̃ = ⌊s⌋
  uint64_t max_counter_size = 0;  // d^s̃ · B
  int principle = 1;              // which selection rule picked this plan (1, 2, or 3)
};

struct GeometryBuild {
  SketchGeometry geometry;
  SpaceReport space;
};

struct CapacityBuild {
  SketchGeometry geometry;
  SpaceReport space;
  CapacityPlan plan;
};

namespace detail {

inline uint64_t checked_shift(uint32_t bits, const char* what) {
  if (bits > 63) {
    throw std::invalid_argument(std::string(what) + " exceeds the 64-bit range");
  }
  return uint64_t{1} << bits;
}

}  // namespace detail

// Widths shrinking geometrically from log2(B) at the top: layer i of k gets
// log2(B) − (k−i)·log2(d) bits. The narrow layers are where the savings
// come from: a flat layout would give every layer log2(B) bits.
inline GeometryBuild space_saving_geometry(uint64_t top_size, uint32_t layers,
                                           uint64_t counters_per_layer,
                                           uint64_t ratio) {
  SketchGeometry g = SketchGeometry::trapezoidal(Variant::SpaceSaving,
                                                 counters_per_layer, top_size,
                                                 layers, ratio);
  uint64_t top_bits = g.base_bits;
  GeometryBuild out;
  out.space.reference_bits = uint64_t{layers} * counters_per_layer * top_bits;
  out.space.plan_bits = g.total_bits();
  out.space.saved_bits = out.space.reference_bits - out.space.plan_bits;
  out.space.reduction_ratio =
      static_cast<double>(out.space.saved_bits) /
      static_cast<double>(out.space.reference_bits);
  out.geometry = std::move(g);
  return out;
}

// Real-valued count of extra layers (widths log2(B)+log2(d), +2·log2(d), …)
// the space-saving savings can fund: the positive root of
//   s²·L + s·(L + 2M) − k(k−1)·L = 0,  L = log2(d), M = log2(B),
// which equates the cost of s extra layers with the k(k−1)/2·w·L saved bits.
// The row length w cancels from both sides, so it only gets validated here.
inline double solve_extra_layers(uint64_t top_size, uint32_t layers,
                                 uint64_t counters_per_layer, uint64_t ratio) {
  uint32_t m = detail::exact_log2(top_size, "top counter size");
  uint32_t l = detail::exact_log2(ratio, "size ratio");
  if (layers == 0) throw std::invalid_argument("layer count must be >= 1");
  if (counters_per_layer == 0) {
    throw std::invalid_argument("row length must be >= 1");
  }
  if (!detail::power_below(ratio, layers - 1, top_size)) {
    throw std::invalid_argument("ratio^(layers-1) must stay below the top counter size");
  }
  double L = static_cast<double>(l);
  double M = static_cast<double>(m);
  double k = static_cast<double>(layers);
  double b = L + 2.0 * M;
  double disc = b * b + 4.0 * k * (k - 1.0) * L * L;
  return (std::sqrt(disc) - b) / (2.0 * L);
}

// Exhaustive scan of feasible (d = 2^j, k ≥ 2) pairs for the plan with the
// most fundable extra layers. Rank by ⌊s⌋, breaking ties by the larger
// fractional part (a deeper partial layer still buys headroom sooner when
// the budget grows); among exact ties prefer the doubling plan (smaller d),
// then more base layers. `principle` records how the winner was chosen:
//   1 — the doubling plan d=2, k=log2(B) won outright,
//   2 — some d > 2 plan won outright,
//   3 — a floor-tie between the two shapes was settled by fractional part.
inline CapacityPlan optimize_capacity(uint64_t top_size, uint64_t counters_per_layer) {
  uint32_t m = detail::exact_log2(top_size, "top counter size");
  if (m < 2) {
    throw std::invalid_argument("top counter size must be at least 4 to layer at all");
  }
  if (counters_per_layer == 0) {
    throw std::invalid_argument("row length must be >= 1");
  }
  struct Candidate {
    uint64_t d = 0;
    uint32_t k = 0;
    double s = 0.0;
    uint32_t floor_s = 0;
    bool valid = false;
  };
  Candidate best_doubling;  // d == 2 branch
  Candidate best_wider;     // d > 2 branch
  for (uint32_t j = 1; j < m; ++j) {          // d = 2^j, need log2(d) ≤ m−1
    uint64_t d = uint64_t{1} << j;
    for (uint32_t k = 2; uint64_t{k - 1} * j <= m - 1; ++k) {  // d^(k−1) < B
      Candidate c;
      c.d = d;
      c.k = k;
      c.s = solve_extra_layers(top_size, k, counters_per_layer, d);
      c.floor_s = static_cast<uint32_t>(c.s);
      c.valid = true;
      Candidate& best = (j == 1) ? best_doubling : best_wider;
      bool better = !best.valid || c.floor_s > best.floor_s ||
                    (c.floor_s == best.floor_s && c.s > best.s) ||
                    (c.floor_s == best.floor_s && c.s == best.s && c.k > best.k);
      if (better) best = c;
    }
  }
  Candidate winner = best_doubling;
  int principle = 1;
  if (best_wider.valid) {
    if (best_wider.floor_s > best_doubling.floor_s) {
      winner = best_wider;
      principle = 2;
    } else if (best_wider.floor_s == best_doubling.floor_s) {
      // Equal whole layers: the fractional part decides.
      principle = 3;
      if (best_wider.s > best_doubling.s) winner = best_wider;
    }
  }
  CapacityPlan plan;
  plan.base_layers = winner.k;
  plan.ratio = winner.d;
  plan.extra_exact = winner.s;
  plan.extra_layers = winner.floor_s;
  plan.principle = principle;
  uint32_t l = static_cast<uint32_t>(std::countr_zero(winner.d));
  plan.max_counter_size =
      detail::checked_shift(m + plan.extra_layers * l, "maximum counter size");
  return plan;
}

// Full capacity-improvement layout: the space-saving widths for the winning
// (d, k) plus the extra layers its savings pay for, at the same row length.
inline CapacityBuild capacity_improvement_geometry(uint64_t top_size,
                                                   uint64_t counters_per_layer) {
  CapacityPlan plan = optimize_capacity(top_size, counters_per_layer);
  GeometryBuild base = space_saving_geometry(top_size, plan.base_layers,
                                             counters_per_layer, plan.ratio);
  uint32_t m = base.geometry.base_bits;
  uint32_t l = static_cast<uint32_t>(std::countr_zero(plan.ratio));
  std::vector<uint8_t> widths = base.geometry.layer_bits;
  uint64_t extra_bits = 0;
  for (uint32_t j = 1; j <= plan.extra_layers; ++j) {
    uint32_t width = m + j * l;
    if (width > 64) {
      throw std::invalid_argument("extra layer width exceeds the 64-bit counter limit");
    }
    widths.push_back(static_cast<uint8_t>(width));
    extra_bits += counters_per_layer * uint64_t{width};
  }
  if (extra_bits > base.space.saved_bits) {
    throw std::logic_error("extra layers exceed the saved-bit budget");
  }
  CapacityBuild out;
  out.geometry = SketchGeometry::from_layer_bits(
      Variant::CapacityImprovement, counters_per_layer, std::move(widths),
      base.geometry.width_ratio, static_cast<uint8_t>(m));
  out.space = base.space;
  out.space.plan_bits = out.geometry.total_bits();
  out.space.residual_bits = base.space.saved_bits - extra_bits;
  out.plan = plan;
  return out;
}

}  // namespace tsketch
