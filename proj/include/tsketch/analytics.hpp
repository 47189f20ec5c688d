#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tsketch {

// Inputs shared by the closed-form accuracy formulas. `layers` is the total
// layer count of the sketch under discussion, `distinct_items` the number of
// distinct keys in the stream, `stream_total` the stream length (sum of all
// frequencies), and `bound_scale` the tolerance β in bounds of the form
// P[error ≤ β(N−f)].
struct AnalyticContext {
  uint64_t counters_per_layer = 0;  // w
  uint32_t layers = 0;              // K
  uint64_t distinct_items = 0;      // n
  uint64_t stream_total = 0;        // N
  double bound_scale = 0.0;         // β

  void validate() const {
    if (counters_per_layer == 0) throw std::invalid_argument("w must be >= 1");
    if (layers == 0) throw std::invalid_argument("layer count must be >= 1");
  }
};

namespace detail {

inline void check_saturated_count(uint32_t layers, uint32_t saturated) {
  if (saturated > layers) {
    throw std::out_of_range("saturated layer count " + std::to_string(saturated) +
                            " exceeds layer count " + std::to_string(layers));
  }
}

}  // namespace detail

// Probability that at least one of the other n−1 items lands in a given
// counter: 1 − (1 − 1/w)^(n−1).
inline double collision_probability(uint64_t counters_per_layer, uint64_t distinct_items) {
  if (counters_per_layer == 0) throw std::invalid_argument("w must be >= 1");
  if (distinct_items == 0) throw std::invalid_argument("distinct item count must be >= 1");
  if (distinct_items == 1) return 0.0;
  double log_miss = static_cast<double>(distinct_items - 1) *
                    std::log1p(-1.0 / static_cast<double>(counters_per_layer));
  return -std::expm1(log_miss);
}

// Probability that an item with `saturated` of its `layers` mapped counters
// saturated is overestimated: every one of the remaining layers must have a
// collision, so the collision probability raised to the (K − i)th power.
inline double error_probability(uint64_t counters_per_layer, uint64_t distinct_items,
                                uint32_t layers, uint32_t saturated) {
  detail::check_saturated_count(layers, saturated);
  double p = collision_probability(counters_per_layer, distinct_items);
  return std::pow(p, static_cast<double>(layers - saturated));
}

inline double error_probability(const AnalyticContext& ctx, uint32_t saturated) {
  ctx.validate();
  return error_probability(ctx.counters_per_layer, ctx.distinct_items, ctx.layers,
                           saturated);
}

// Noise-cancelled point estimate: subtract the expected collision mass
// (N − f̂)/w, weighted by the probability the estimate is noisy at all, and
// clamp at zero since frequencies cannot be negative.
inline double corrected_estimate(uint64_t raw_estimate, double error_prob,
                                 uint64_t stream_total, uint64_t counters_per_layer) {
  if (counters_per_layer == 0) throw std::invalid_argument("w must be >= 1");
  double raw = static_cast<double>(raw_estimate);
  double noise = (static_cast<double>(stream_total) - raw) /
                 static_cast<double>(counters_per_layer);
  return std::max(0.0, raw - error_prob * noise);
}

// Probability that an estimate built from K − i usable layers stays within
// β(N − f) of the truth: 1 − (wβ)^−(K−i), clamped to [0, 1].
inline double error_bound(const AnalyticContext& ctx, uint32_t saturated) {
  ctx.validate();
  detail::check_saturated_count(ctx.layers, saturated);
  if (ctx.bound_scale <= 0.0) throw std::invalid_argument("bound scale must be > 0");
  double wb = static_cast<double>(ctx.counters_per_layer) * ctx.bound_scale;
  double bound = 1.0 - std::pow(wb, -static_cast<double>(ctx.layers - saturated));
  return std::clamp(bound, 0.0, 1.0);
}

// Same guarantee for the noise-cancelled estimate: 1 − 2ρ(1−ρ)/(wβ). The
// 2ρ(1−ρ) factor is the variance-style weight of the correction's residual.
inline double corrected_error_bound(const AnalyticContext& ctx, uint32_t saturated) {
  ctx.validate();
  if (ctx.bound_scale <= 0.0) throw std::invalid_argument("bound scale must be > 0");
  double rho = error_probability(ctx, saturated);
  double wb = static_cast<double>(ctx.counters_per_layer) * ctx.bound_scale;
  double bound = 1.0 - 2.0 * rho * (1.0 - rho) / wb;
  return std::clamp(bound, 0.0, 1.0);
}

// Probability that an item of frequency `item_frequency` does NOT overflow a
// counter of size `layer_size`: 1 − (N−f)/(w(S−f)), clamped to [0, 1].
// Items at or above the counter size overflow deterministically, which the
// caller must handle (this is a domain error here).
inline double overflow_safety_bound(const AnalyticContext& ctx, double layer_size,
                                    double item_frequency) {
  ctx.validate();
  if (item_frequency < 0.0) throw std::domain_error("frequency must be >= 0");
  if (item_frequency >= layer_size) {
    throw std::domain_error("item frequency reaches the counter size; overflow is certain");
  }
  double n_minus_f = static_cast<double>(ctx.stream_total) - item_frequency;
  double slack = static_cast<double>(ctx.counters_per_layer) * (layer_size - item_frequency);
  return std::clamp(1.0 - n_minus_f / slack, 0.0, 1.0);
}

// Guarantee ratio of the corrected estimate over the raw one:
// (wβ − 2ρ(1−ρ)) / (wβ − 1). Exceeds 1 whenever wβ > 1, i.e. the corrected
// bound is never the weaker one.
inline double phi_from_error_probability(double rho, double w_beta) {
  if (!(rho >= 0.0) || !(rho <= 1.0)) {
    throw std::invalid_argument("error probability must lie in [0, 1]");
  }
  if (!(w_beta > 1.0)) {
    throw std::invalid_argument("phi requires w*beta > 1 (raw bound must be non-vacuous)");
  }
  return (w_beta - 2.0 * rho * (1.0 - rho)) / (w_beta - 1.0);
}

inline double phi_ratio(const AnalyticContext& ctx, uint32_t saturated) {
  ctx.validate();
  if (ctx.bound_scale <= 0.0) throw std::invalid_argument("bound scale must be > 0");
  double wb = static_cast<double>(ctx.counters_per_layer) * ctx.bound_scale;
  return phi_from_error_probability(error_probability(ctx, saturated), wb);
}

enum class RatioOrder { BelowOne, One, AboveOne };

struct CorrectionComparison {
  double phi = 0.0;  // (wβ − 2ρ₁(1−ρ₁)) / (wβ − 2ρ₂(1−ρ₂)): corrected-bound ratio
  double mu = 0.0;   // 2ρ₁(1−ρ₁) / (2ρ₂(1−ρ₂)): residual-noise ratio
  RatioOrder phi_order = RatioOrder::One;  // phi vs 1
  RatioOrder mu_order = RatioOrder::One;   // mu vs 1; always opposite to phi_order
};

// Compares the corrected-estimate guarantees at two error probabilities
// ρ₁ > ρ₂ (e.g. the same sketch before and after adding layers). Which side
// of 1 both ratios land on follows the parabola g(ρ) = 2ρ(1−ρ):
//   • both probabilities below ½  → g₁ > g₂, so μ > 1 and φ < 1,
//   • both above ½                → g₁ < g₂, so μ < 1 and φ > 1,
//   • straddling ½                → decided by ρ₁ + ρ₂ vs 1, equality giving 1.
inline CorrectionComparison compare_corrected_bounds(double rho1, double rho2,
                                                     double w_beta) {
  if (!(rho2 > 0.0) || !(rho1 < 1.0) || !(rho1 > rho2)) {
    throw std::invalid_argument(
        "error probabilities must lie in (0, 1) with rho1 > rho2");
  }
  if (!(w_beta > 0.5)) {
    throw std::invalid_argument("w*beta must exceed 1/2 for the comparison to be defined");
  }
  CorrectionComparison c;
  double g1 = 2.0 * rho1 * (1.0 - rho1);
  double g2 = 2.0 * rho2 * (1.0 - rho2);
  c.phi = (w_beta - g1) / (w_beta - g2);
  c.mu = g1 / g2;
  if (g1 > g2) {
    c.mu_order = RatioOrder::AboveOne;
    c.phi_order = RatioOrder::BelowOne;
  } else if (g1 < g2) {
    c.mu_order = RatioOrder::BelowOne;
    c.phi_order = RatioOrder::AboveOne;
  }
  return c;
}

// μ for one sketch before/after `extra_layers` additional layers: the ratio
// of correction residual weights 2ρ(1−ρ) between the shallow and the deep
// configuration. Both probabilities must be meaningful (in (0,1)) and
// strictly ordered, which holds whenever extra_layers >= 1 and there are
// collisions at all.
inline double mu_ratio(const AnalyticContext& ctx, uint32_t saturated,
                       uint32_t extra_layers) {
  ctx.validate();
  double rho1 = error_probability(ctx, saturated);
  AnalyticContext deeper = ctx;
  deeper.layers += extra_layers;
  double rho2 = error_probability(deeper, saturated);
  if (!(rho2 > 0.0) || !(rho1 < 1.0)) {
    throw std::domain_error("error probabilities must lie in (0, 1) for mu");
  }
  if (!(rho1 > rho2)) {
    throw std::invalid_argument("mu requires extra layers to lower the error probability");
  }
  return (2.0 * rho1 * (1.0 - rho1)) / (2.0 * rho2 * (1.0 - rho2));
}

struct CorrectedNoise {
  double mean = 0.0;          // expected leftover noise after correction
  double scaled_bound = 0.0;  // β₁ = 2ρ(1−ρ)·β, the effective tolerance
};

// Expected residual noise of the corrected estimate for an item of frequency
// `item_frequency`: mean 2ρ(1−ρ)(N−f)/w, with the matching scaled tolerance.
inline CorrectedNoise corrected_noise(const AnalyticContext& ctx, uint32_t saturated,
                                      double item_frequency) {
  ctx.validate();
  if (item_frequency < 0.0 ||
      item_frequency > static_cast<double>(ctx.stream_total)) {
    throw std::domain_error("item frequency must lie in [0, N]");
  }
  double rho = error_probability(ctx, saturated);
  double weight = 2.0 * rho * (1.0 - rho);
  CorrectedNoise out;
  out.mean = weight * (static_cast<double>(ctx.stream_total) - item_frequency) /
             static_cast<double>(ctx.counters_per_layer);
  out.scaled_bound = weight * ctx.bound_scale;
  return out;
}

}  // namespace tsketch
