#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "plaque/error.hpp"
#include "plaque/pullback.hpp"

using namespace plaque::pullback;
using namespace plaque::dynamics;
using plaque::Error;

namespace {

Polynomial z2() { return Polynomial::quad({0.0, 0.0}); }
Polynomial z2m1() { return Polynomial::quad({-1.0, 0.0}); }
Polynomial z2m2() { return Polynomial::quad({-2.0, 0.0}); }

void check_chain_sound(const Polynomial& f, const PullbackChain& chain) {
  REQUIRE_FALSE(chain.error.has_value());
  for (size_t i = 1; i < chain.levels.size(); ++i) {
    CHECK(forward_residual(f, chain.levels[i].loop, chain.levels[i - 1].loop) <= 1e-9);
    // the level center is the orbit point and lies inside its loop
    CHECK(winding_contains(chain.levels[i].loop, chain.orbit.points[i]).inside);
  }
}

std::string bits_of(const PullbackChain& chain, int crit) { return index_bits(chain, crit).bits; }

}  // namespace

TEST_CASE("preimage sets") {
  auto p1 = preimage_set(z2(), {1.0, 0.0});
  REQUIRE(p1.size() == 2);
  CHECK(std::abs(p1[0] - Complex{-1.0, 0.0}) < 1e-12);
  CHECK(std::abs(p1[1] - Complex{1.0, 0.0}) < 1e-12);

  auto p0 = preimage_set(z2(), {0.0, 0.0});
  REQUIRE(p0.size() == 2);
  CHECK(std::abs(p0[0]) < 1e-6);
  CHECK(std::abs(p0[1]) < 1e-6);

  auto pm1 = preimage_set(z2m1(), {-1.0, 0.0});
  REQUIRE(pm1.size() == 2);
  CHECK(std::abs(pm1[0]) < 1e-6);
  CHECK(std::abs(pm1[1]) < 1e-6);
}

TEST_CASE("pullback of a loop away from critical values") {
  SampledLoop base = circle_loop({1.0, 0.0}, 0.1, 256);
  SampledLoop lifted = pullback_loop(z2(), base, {1.0, 0.0});
  CHECK(lifted.traversals == 1);
  CHECK(forward_residual(z2(), lifted, base) <= 1e-9);
  CHECK(winding_contains(lifted, {1.0, 0.0}).inside);
  CHECK_FALSE(winding_contains(lifted, {-1.0, 0.0}).inside);
}

TEST_CASE("pullback around a critical value closes after two circuits") {
  SampledLoop base = circle_loop({0.0, 0.0}, 0.25, 256);
  SampledLoop lifted = pullback_loop(z2(), base, {0.5, 0.0});
  CHECK(lifted.traversals == 2);
  CHECK(winding_contains(lifted, {0.0, 0.0}).inside);
  // the curve is the circle of radius sqrt(0.25) = 0.5
  for (const auto& s : lifted.samples) CHECK(std::abs(std::abs(s) - 0.5) < 1e-9);
  CHECK(forward_residual(z2(), lifted, base) <= 1e-9);
}

TEST_CASE("disjoint branch disks") {
  SampledLoop base = circle_loop({4.0, 0.0}, 0.1, 256);
  SampledLoop plus = pullback_loop(z2(), base, {2.0, 0.0});
  SampledLoop minus = pullback_loop(z2(), base, {-2.0, 0.0});
  CHECK(winding_contains(minus, {-2.0, 0.0}).inside);
  CHECK_FALSE(winding_contains(minus, {2.0, 0.0}).inside);
  CHECK(winding_contains(plus, {2.0, 0.0}).inside);
  double min_gap = 1e300;
  for (const auto& a : plus.samples)
    for (const auto& b : minus.samples) min_gap = std::min(min_gap, std::abs(a - b));
  CHECK(min_gap > 1.0);
}

TEST_CASE("winding multiplicativity through the map") {
  SampledLoop base = circle_loop({0.0, 0.0}, 0.25, 256);
  SampledLoop lifted = pullback_loop(z2(), base, {0.5, 0.0});
  std::vector<Complex> mapped = map_samples(z2(), lifted);
  SampledLoop image;
  image.samples = mapped;
  image.center = base.center;
  int w_image = winding_contains(image, base.center).winding;
  int w_base = winding_contains(base, base.center).winding;
  CHECK(w_image == lifted.traversals * w_base);
}

TEST_CASE("on-curve winding queries are rejected") {
  SampledLoop base = circle_loop({0.0, 0.0}, 1.0, 64);
  CHECK_THROWS_AS(winding_contains(base, base.samples[0]), Error);
}

TEST_CASE("invariant lifts walk the cycle backward") {
  auto cycles2 = periodic_cycles(z2m1(), 2);
  REQUIRE(cycles2.size() == 1);
  // points stored backward from the lex-least: (-1, 0)
  BackwardOrbit from_zero = BackwardOrbit::invariant_lift(cycles2[0], 2, 6);
  CHECK(std::abs(from_zero.points[0] - Complex{0.0, 0.0}) < 1e-9);
  CHECK(std::abs(from_zero.points[1] - Complex{-1.0, 0.0}) < 1e-9);
  CHECK(std::abs(from_zero.points[2] - Complex{0.0, 0.0}) < 1e-9);

  BackwardOrbit from_m1 = BackwardOrbit::invariant_lift(cycles2[0], 1, 4);
  CHECK(std::abs(from_m1.points[0] - Complex{-1.0, 0.0}) < 1e-9);
  CHECK(std::abs(from_m1.points[1] - Complex{0.0, 0.0}) < 1e-9);

  auto fixed = periodic_cycles(z2(), 1);
  const Cycle* one = nullptr;
  for (const auto& c : fixed)
    if (std::abs(c.points[0] - Complex{1.0, 0.0}) < 1e-9) one = &c;
  REQUIRE(one != nullptr);
  BackwardOrbit lift1 = BackwardOrbit::invariant_lift(*one, 1, 5);
  for (const auto& z : lift1.points) CHECK(std::abs(z - Complex{1.0, 0.0}) < 1e-9);
}

TEST_CASE("super-attracting chain of z^2: every level contains the critical point") {
  auto fixed = periodic_cycles(z2(), 1);
  const Cycle* zero = nullptr;
  for (const auto& c : fixed)
    if (std::abs(c.points[0]) < 1e-9) zero = &c;
  REQUIRE(zero != nullptr);
  BackwardOrbit lift = BackwardOrbit::invariant_lift(*zero, 1, 8);
  PullbackChain chain = pullback_chain(z2(), lift, 0.25, 8);
  check_chain_sound(z2(), chain);
  CHECK(bits_of(chain, 0) == "11111111");
  // levels are circles of radius 0.25^(1/2^i)
  for (size_t i = 0; i < chain.levels.size(); ++i) {
    double expect = std::pow(0.25, std::pow(0.5, static_cast<double>(i)));
    for (const auto& s : chain.levels[i].loop.samples) CHECK(std::abs(s) == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("repelling chain of z^2: no level contains the critical point") {
  auto fixed = periodic_cycles(z2(), 1);
  const Cycle* one = nullptr;
  for (const auto& c : fixed)
    if (std::abs(c.points[0] - Complex{1.0, 0.0}) < 1e-9) one = &c;
  REQUIRE(one != nullptr);
  BackwardOrbit lift = BackwardOrbit::invariant_lift(*one, 1, 8);
  PullbackChain chain = pullback_chain(z2(), lift, 0.1, 8);
  check_chain_sound(z2(), chain);
  CHECK(bits_of(chain, 0) == "00000000");
}

TEST_CASE("alternating chain of the z^2-1 two-cycle") {
  auto cycles2 = periodic_cycles(z2m1(), 2);
  BackwardOrbit lift = BackwardOrbit::invariant_lift(cycles2[0], 2, 8);  // base at 0
  PullbackChain chain = pullback_chain(z2m1(), lift, 0.05, 8);
  check_chain_sound(z2m1(), chain);
  CHECK(bits_of(chain, 0) == "10101010");
}

TEST_CASE("index bits are monotone in the seed radius") {
  auto cycles2 = periodic_cycles(z2m1(), 2);
  BackwardOrbit lift = BackwardOrbit::invariant_lift(cycles2[0], 2, 8);
  PullbackChain big = pullback_chain(z2m1(), lift, 0.05, 8);
  PullbackChain small = pullback_chain(z2m1(), lift, 0.025, 8);
  std::string b = bits_of(big, 0), s = bits_of(small, 0);
  for (size_t i = 0; i < b.size(); ++i) CHECK(s[i] <= b[i]);
}

TEST_CASE("regular plaque construction") {
  RegularPlaqueConfig cfg;
  cfg.seed_center = Complex{2.0, 0.0};
  cfg.seed_radius = 0.1;
  RegularPlaqueResult res = construct_regular_plaque(z2(), 16, cfg);
  REQUIRE(res.chain.depth() == 16);
  for (const auto& level : res.chain.levels)
    for (uint8_t flag : level.contains_critical) CHECK(flag == 0);
  // positive-real branch: orbit = 2^(1/2^k)
  for (size_t k = 0; k < res.orbit.points.size(); ++k) {
    double expect = std::pow(2.0, std::pow(0.5, static_cast<double>(k)));
    CHECK(std::abs(res.orbit.points[k] - Complex{expect, 0.0}) < 1e-9);
  }
  check_chain_sound(z2(), res.chain);
}

TEST_CASE("regular plaque with automatic seeds") {
  RegularPlaqueResult res = construct_regular_plaque(z2m1(), 12, {});
  REQUIRE(res.chain.depth() == 12);
  for (const auto& level : res.chain.levels)
    for (uint8_t flag : level.contains_critical) CHECK(flag == 0);
  check_chain_sound(z2m1(), res.chain);
  CHECK(res.seed_candidates.size() == 2);
}

TEST_CASE("regular plaque depth zero is trivially regular") {
  RegularPlaqueResult res = construct_regular_plaque(z2(), 0, {});
  CHECK(res.chain.depth() == 0);
}

TEST_CASE("irregular orbit at the super-attracting fixed point engulfs at every depth") {
  IrregularOrbitConfig cfg;
  cfg.seed_radius = 0.25;
  IrregularOrbitResult res = construct_irregular_orbit(z2(), {0.0, 0.0}, {0.0, 0.0}, 8, cfg);
  CHECK(res.status == IrregularStatus::Ok);
  REQUIRE(res.engulf_depths.size() >= 7);
  for (size_t i = 0; i < res.engulf_depths.size(); ++i) CHECK(res.engulf_depths[i] == static_cast<int>(i + 1));
  for (const auto& z : res.orbit.points) CHECK(std::abs(z) < 1e-6);
}

TEST_CASE("z^2-2 critical point is not recurrent: NoPcMembership") {
  IrregularOrbitResult res = construct_irregular_orbit(z2m2(), {0.0, 0.0}, {2.0, 0.0}, 8, {});
  CHECK(res.status == IrregularStatus::NoPcMembership);
}

TEST_CASE("orbit validation rejects non-orbits") {
  CHECK_THROWS_AS(BackwardOrbit::from_points(z2(), {{1.0, 0.0}, {3.0, 0.0}}), Error);
}

TEST_CASE("cubic map: triple traversal around the totally branched point") {
  Polynomial z3({{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  SampledLoop base = circle_loop({0.0, 0.0}, 0.125, 256);
  SampledLoop lifted = pullback_loop(z3, base, {0.5, 0.0});
  CHECK(lifted.traversals == 3);
  // preimage of |w| = 0.125 under z^3 is |z| = 0.5
  for (const auto& s : lifted.samples) CHECK(std::abs(std::abs(s) - 0.5) < 1e-9);
  CHECK(winding_contains(lifted, {0.0, 0.0}).inside);
  CHECK(forward_residual(z3, lifted, base) <= 1e-9);
  // image winding multiplies by the traversal count
  SampledLoop image;
  image.samples = map_samples(z3, lifted);
  image.center = base.center;
  CHECK(winding_contains(image, base.center).winding == 3 * winding_contains(base, base.center).winding);
}

TEST_CASE("cubic map: three disjoint branch components") {
  // z^3 - 3z has critical points +-1 and critical values -+2
  Polynomial cubic({{0.0, 0.0}, {-3.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}});
  Complex w{10.0, 0.0};
  auto fiber = preimage_set(cubic, w);
  REQUIRE(fiber.size() == 3);
  SampledLoop base = circle_loop(w, 0.2, 256);
  std::vector<SampledLoop> comps;
  for (const auto& y : fiber) comps.push_back(pullback_loop(cubic, base, y));
  for (size_t i = 0; i < comps.size(); ++i) {
    CHECK(comps[i].traversals == 1);
    CHECK(winding_contains(comps[i], fiber[i]).inside);
    for (size_t j = i + 1; j < comps.size(); ++j) {
      double gap = 1e300;
      for (const auto& a : comps[i].samples)
        for (const auto& b : comps[j].samples) gap = std::min(gap, std::abs(a - b));
      CHECK(gap > 0.1);
    }
  }
  // chain soundness on a quadratic with non-real coefficients
  Polynomial qi = Polynomial::quad({0.0, 1.0});
  auto cyc = periodic_cycles(qi, 1);
  REQUIRE_FALSE(cyc.empty());
  BackwardOrbit lift = BackwardOrbit::invariant_lift(cyc[0], 1, 6);
  PullbackChain chain = pullback_chain(qi, lift, 0.05, 6);
  if (!chain.error) check_chain_sound(qi, chain);
}

TEST_CASE("chains over random maps complete or fail structurally, never unsoundly") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  std::uniform_real_distribution<double> rad(0.02, 0.5);
  for (int iter = 0; iter < 60; ++iter) {
    int deg = 2 + (iter % 2);
    std::vector<Complex> coeffs;
    for (int i = 0; i < deg; ++i) coeffs.push_back({coef(rng), coef(rng)});
    coeffs.push_back({1.0, 0.0});
    CAPTURE(iter);
    try {
      Polynomial f(std::move(coeffs));
      auto cycles = periodic_cycles(f, 1);
      REQUIRE_FALSE(cycles.empty());
      BackwardOrbit lift = BackwardOrbit::invariant_lift(cycles[iter % cycles.size()], 1, 16);
      PullbackChain chain = pullback_chain(f, lift, rad(rng), 16);
      for (size_t i = 1; i < chain.levels.size(); ++i)
        CHECK(forward_residual(f, chain.levels[i].loop, chain.levels[i - 1].loop) <= 1e-9);
    } catch (const Error&) {
      // structured engine failure is an acceptable outcome
    }
  }
}

TEST_CASE("a base curve through a critical value is rejected as ambiguous") {
  // the circle |w - 0.25| = 0.25 passes through the critical value 0 of z^2
  SampledLoop base = circle_loop({0.25, 0.0}, 0.25, 256);
  CHECK_THROWS_WITH_AS(pullback_loop(z2(), base, {0.70710678118, 0.0}),
                       doctest::Contains("critical value"), Error);
}
