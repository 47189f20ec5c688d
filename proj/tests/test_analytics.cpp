#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>

#include "tsketch/analytics.hpp"

using namespace tsketch;
using Catch::Approx;

namespace {

AnalyticContext ctx(uint64_t w, uint32_t layers, uint64_t n, uint64_t N, double beta) {
  AnalyticContext c;
  c.counters_per_layer = w;
  c.layers = layers;
  c.distinct_items = n;
  c.stream_total = N;
  c.bound_scale = beta;
  return c;
}

}  // namespace

TEST_CASE("collision probability follows 1 − (1 − 1/w)^(n−1)", "[analytics]") {
  CHECK(collision_probability(100, 1) == 0.0);
  CHECK(collision_probability(100, 2) == Approx(0.01).epsilon(1e-12));
  CHECK(collision_probability(100, 51) ==
        Approx(1.0 - std::pow(0.99, 50)).epsilon(1e-12));
  CHECK(collision_probability(1, 2) == 1.0);  // single counter always collides
  CHECK_THROWS_AS(collision_probability(0, 5), std::invalid_argument);
  CHECK_THROWS_AS(collision_probability(5, 0), std::invalid_argument);
}

TEST_CASE("error probability matches the layered collision model", "[analytics]") {
  // (1 − 0.99⁵⁰)² ≈ 0.15602: two usable layers must both collide.
  CHECK(error_probability(100, 51, 3, 1) == Approx(0.1560202070).epsilon(1e-9));
  SECTION("no colliders means no error") {
    CHECK(error_probability(100, 1, 3, 0) == 0.0);
    CHECK(error_probability(100, 1, 3, 2) == 0.0);
  }
  SECTION("all layers saturated is certain error") {
    CHECK(error_probability(100, 51, 3, 3) == 1.0);
    CHECK(error_probability(100, 1, 3, 3) == 1.0);  // 0⁰ convention
  }
  SECTION("more usable layers shrink the probability") {
    double prev = 1.0;
    for (uint32_t i = 5; i-- > 0;) {
      double rho = error_probability(1000, 600, 5, i);
      CHECK(rho < prev);
      prev = rho;
    }
  }
  CHECK_THROWS_AS(error_probability(100, 51, 3, 4), std::out_of_range);
}

TEST_CASE("corrected estimate subtracts scaled collision mass", "[analytics]") {
  // 100 − 0.2·(10100−100)/100 = 80.
  CHECK(corrected_estimate(100, 0.2, 10100, 100) == Approx(80.0).epsilon(1e-12));
  // Clamp at zero: 1 − 0.9·(10⁶−1)/100 is far below zero.
  CHECK(corrected_estimate(1, 0.9, 1000000, 100) == 0.0);
  // Zero probability leaves the raw value alone.
  CHECK(corrected_estimate(123, 0.0, 99999, 64) == 123.0);
}

TEST_CASE("error bound follows 1 − (wβ)^−(K−i)", "[analytics]") {
  AnalyticContext c = ctx(1000, 4, 0, 0, 0.01);
  CHECK(error_bound(c, 0) == Approx(0.9999).epsilon(1e-12));
  CHECK(error_bound(c, 2) == Approx(0.99).epsilon(1e-12));
  CHECK(error_bound(c, 4) == 0.0);  // zero usable layers: vacuous
  SECTION("wβ at or below one is vacuous") {
    AnalyticContext weak = ctx(50, 4, 0, 0, 0.01);  // wβ = 0.5
    CHECK(error_bound(weak, 0) == 0.0);
    CHECK(error_bound(weak, 3) == 0.0);
  }
  CHECK_THROWS_AS(error_bound(ctx(100, 4, 0, 0, 0.0), 0), std::invalid_argument);
}

TEST_CASE("corrected error bound uses the residual weight 2ρ(1−ρ)", "[analytics]") {
  SECTION("hand value: ρ=0.5, wβ=10 → 0.95") {
    // w=2, n=2 makes the collision probability exactly 1/2 at one usable layer.
    AnalyticContext c = ctx(2, 1, 2, 0, 5.0);
    CHECK(error_probability(c, 0) == Approx(0.5).epsilon(1e-12));
    CHECK(corrected_error_bound(c, 0) == Approx(0.95).epsilon(1e-12));
  }
  SECTION("ρ = 0 and ρ = 1 both give a perfect bound") {
    AnalyticContext no_noise = ctx(100, 3, 1, 0, 1.0);  // n=1 → ρ=0
    CHECK(corrected_error_bound(no_noise, 0) == 1.0);
    AnalyticContext all_sat = ctx(100, 3, 51, 0, 1.0);  // i=K → ρ=1
    CHECK(corrected_error_bound(all_sat, 3) == 1.0);
  }
  SECTION("matches the derived value at the worked example") {
    AnalyticContext c = ctx(100, 3, 51, 0, 0.04);  // wβ = 4
    double rho = error_probability(c, 1);
    CHECK(corrected_error_bound(c, 1) ==
          Approx(1.0 - 2.0 * rho * (1.0 - rho) / 4.0).epsilon(1e-12));
    CHECK(corrected_error_bound(c, 1) == Approx(0.9341610489967955).epsilon(1e-12));
  }
}

TEST_CASE("overflow safety bound clamps the Markov estimate", "[analytics]") {
  AnalyticContext c = ctx(100, 1, 0, 0, 1.0);
  SECTION("worked example: w=100, N−f=1000, S−f=50 → 0.8") {
    c.stream_total = 1100;
    CHECK(overflow_safety_bound(c, 150.0, 100.0) == Approx(0.8).epsilon(1e-12));
  }
  SECTION("no other items: probability 1") {
    c.stream_total = 100;
    CHECK(overflow_safety_bound(c, 500.0, 100.0) == 1.0);
  }
  SECTION("vacuous Markov bound clamps to 0") {
    c.stream_total = 1000000;
    CHECK(overflow_safety_bound(c, 101.0, 100.0) == 0.0);
  }
  SECTION("frequency at the counter size is a deterministic overflow") {
    c.stream_total = 200;
    CHECK_THROWS_AS(overflow_safety_bound(c, 100.0, 100.0), std::domain_error);
    CHECK_THROWS_AS(overflow_safety_bound(c, 100.0, 150.0), std::domain_error);
  }
}

TEST_CASE("phi ratio compares corrected and raw guarantees", "[analytics]") {
  SECTION("worked example: wβ=10, ρ=0.3 → (10 − 0.42)/9 ≈ 1.06444") {
    CHECK(phi_from_error_probability(0.3, 10.0) ==
          Approx(9.58 / 9.0).epsilon(1e-12));
  }
  SECTION("context route matches the raw-probability route") {
    // w=2, n=2 gives an exact interior probability: ρ = 1/2.
    AnalyticContext half = ctx(2, 1, 2, 0, 5.0);  // wβ = 10
    CHECK(phi_ratio(half, 0) == Approx((10.0 - 0.5) / 9.0).epsilon(1e-12));
    CHECK(phi_ratio(half, 0) == phi_from_error_probability(0.5, 10.0));
  }
  SECTION("endpoints: ρ ∈ {0, 1} give wβ/(wβ−1)") {
    AnalyticContext zero = ctx(10, 2, 1, 0, 1.0);  // n=1 → ρ=0
    CHECK(phi_ratio(zero, 0) == Approx(10.0 / 9.0).epsilon(1e-12));
    AnalyticContext one = ctx(10, 2, 5, 0, 1.0);
    CHECK(phi_ratio(one, 2) == Approx(10.0 / 9.0).epsilon(1e-12));  // i=K → ρ=1
  }
  SECTION("exceeds one for every interior ρ (the corrected bound wins)") {
    for (uint64_t n : {2u, 11u, 101u, 5001u}) {
      AnalyticContext c = ctx(500, 3, n, 0, 0.01);  // wβ = 5
      for (uint32_t i = 0; i <= 3; ++i) {
        INFO("n=" << n << " i=" << i);
        REQUIRE(phi_ratio(c, i) >= 1.0);
      }
    }
  }
  SECTION("requires wβ > 1") {
    AnalyticContext weak = ctx(100, 2, 5, 0, 0.01);  // wβ = 1
    CHECK_THROWS_AS(phi_ratio(weak, 0), std::invalid_argument);
  }
}

TEST_CASE("corrected-bound comparison classifies by the parabola", "[analytics]") {
  SECTION("both below one half: residual grows, bound ratio shrinks") {
    CorrectionComparison c = compare_corrected_bounds(0.4, 0.2, 10.0);
    CHECK(c.mu == Approx(1.5).epsilon(1e-12));
    CHECK(c.mu_order == RatioOrder::AboveOne);
    CHECK(c.phi_order == RatioOrder::BelowOne);
    CHECK(c.phi == Approx((10.0 - 0.48) / (10.0 - 0.32)).epsilon(1e-12));
  }
  SECTION("both above one half") {
    CorrectionComparison c = compare_corrected_bounds(0.8, 0.6, 10.0);
    CHECK(c.mu == Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(c.mu_order == RatioOrder::BelowOne);
    CHECK(c.phi_order == RatioOrder::AboveOne);
  }
  SECTION("straddling: the sum against one decides, equality at one") {
    CorrectionComparison at_boundary = compare_corrected_bounds(0.75, 0.25, 10.0);
    CHECK(at_boundary.mu == 1.0);
    CHECK(at_boundary.mu_order == RatioOrder::One);
    CHECK(at_boundary.phi_order == RatioOrder::One);
    CHECK(compare_corrected_bounds(0.7, 0.3, 10.0).mu == Approx(1.0).epsilon(1e-12));
    CHECK(compare_corrected_bounds(0.8, 0.3, 10.0).mu_order == RatioOrder::BelowOne);
    CHECK(compare_corrected_bounds(0.7, 0.2, 10.0).mu_order == RatioOrder::AboveOne);
  }
  SECTION("grid: classification always agrees with the computed ratio") {
    for (int a = 1; a < 20; ++a) {
      for (int b = 1; b < a; ++b) {
        double rho1 = a / 20.0;
        double rho2 = b / 20.0;
        CorrectionComparison c = compare_corrected_bounds(rho1, rho2, 3.0);
        INFO("rho1=" << rho1 << " rho2=" << rho2);
        // phi's numerator and denominator differ by g1 − g2; when the pair
        // straddles one half that difference can shrink to an ulp and the
        // division collapse to exactly 1, so phi gets the weak inequality.
        if (c.mu_order == RatioOrder::AboveOne) {
          REQUIRE(c.mu > 1.0);
          REQUIRE(c.phi <= 1.0);
        } else if (c.mu_order == RatioOrder::BelowOne) {
          REQUIRE(c.mu < 1.0);
          REQUIRE(c.phi >= 1.0);
        } else {
          REQUIRE(c.mu == Approx(1.0).epsilon(1e-12));
          REQUIRE(c.phi == Approx(1.0).epsilon(1e-12));
        }
      }
    }
  }
  SECTION("rejects unordered or degenerate probabilities") {
    CHECK_THROWS_AS(compare_corrected_bounds(0.2, 0.4, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(compare_corrected_bounds(0.4, 0.4, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(compare_corrected_bounds(1.0, 0.4, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(compare_corrected_bounds(0.4, 0.0, 10.0), std::invalid_argument);
  }
}

TEST_CASE("mu ratio relates shallow and deep configurations", "[analytics]") {
  AnalyticContext c = ctx(100, 4, 51, 0, 1.0);
  double rho_shallow = error_probability(c, 1);
  AnalyticContext deep = c;
  deep.layers = 7;
  double rho_deep = error_probability(deep, 1);
  double expect = (2.0 * rho_shallow * (1.0 - rho_shallow)) /
                  (2.0 * rho_deep * (1.0 - rho_deep));
  CHECK(mu_ratio(c, 1, 3) == Approx(expect).epsilon(1e-12));
  // Zero extra layers violate the strict ordering precondition.
  CHECK_THROWS_AS(mu_ratio(c, 1, 0), std::invalid_argument);
  // n=1 puts both probabilities at zero.
  AnalyticContext lone = ctx(100, 4, 1, 0, 1.0);
  CHECK_THROWS_AS(mu_ratio(lone, 1, 3), std::domain_error);
}

TEST_CASE("corrected noise mean scales the flat-sketch noise", "[analytics]") {
  SECTION("ρ=0.5 halves the noise and the tolerance") {
    AnalyticContext c = ctx(2, 1, 2, 1000, 0.08);
    CorrectedNoise noise = corrected_noise(c, 0, 0.0);
    CHECK(noise.mean == Approx(0.5 * 1000.0 / 2.0).epsilon(1e-12));
    CHECK(noise.scaled_bound == Approx(0.04).epsilon(1e-12));
  }
  SECTION("worked example: ρ=0.1, N−f=10⁴, w=100 → 18") {
    // w=10, n=2 gives collision probability exactly 0.1 at one usable layer.
    AnalyticContext c = ctx(10, 1, 2, 0, 1.0);
    CHECK(error_probability(c, 0) == Approx(0.1).epsilon(1e-12));
    // Scale w to 100 while keeping ρ=0.1 via the raw-parameter overload is
    // not possible with integers, so check the formula shape at w=10:
    // 2·0.1·0.9·(10000)/10 = 180.
    c.stream_total = 10000;
    CorrectedNoise noise = corrected_noise(c, 0, 0.0);
    CHECK(noise.mean == Approx(180.0).epsilon(1e-9));
  }
  SECTION("ρ=0 yields zero residual noise") {
    AnalyticContext c = ctx(100, 3, 1, 5000, 0.01);
    CorrectedNoise noise = corrected_noise(c, 0, 17.0);
    CHECK(noise.mean == 0.0);
    CHECK(noise.scaled_bound == 0.0);
  }
  SECTION("frequency outside [0, N] is rejected") {
    AnalyticContext c = ctx(100, 3, 51, 1000, 0.01);
    CHECK_THROWS_AS(corrected_noise(c, 0, -1.0), std::domain_error);
    CHECK_THROWS_AS(corrected_noise(c, 0, 1001.0), std::domain_error);
  }
}

TEST_CASE("error probability is monotone in its drivers", "[analytics]") {
  // More counters → fewer collisions. (n stays moderate so the collision
  // probability is interior — at w=10, n=500 it rounds to exactly 1.)
  double prev = 1.0;
  for (uint64_t w : {10u, 100u, 1000u, 10000u}) {
    double rho = error_probability(w, 50, 3, 0);
    CHECK(rho < prev);
    prev = rho;
  }
  // More distinct items → more collisions.
  prev = 0.0;
  for (uint64_t n : {2u, 20u, 200u, 2000u}) {
    double rho = error_probability(100, n, 3, 0);
    CHECK(rho > prev);
    prev = rho;
  }
}
