#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plaque/dynamics.hpp"
#include "plaque/loop.hpp"

namespace plaque::pullback {

using dynamics::Cycle;

// Backward orbit (x_1, x_2, ...) with f(x_{i+1}) = x_i.
struct BackwardOrbit {
  enum class Generator { InvariantLift, ExplicitBranches, Greedy };

  std::vector<Complex> points;
  Generator generator = Generator::ExplicitBranches;
  int cycle_period = 0;  // for invariant lifts
  int base_index = 1;    // 1-based base point within the cycle

  static BackwardOrbit invariant_lift(const Cycle& cycle, int base_index, int length);
  static BackwardOrbit from_points(const Polynomial& f, std::vector<Complex> pts,
                                   Generator gen = Generator::ExplicitBranches);
};

std::string to_string(BackwardOrbit::Generator g);

struct ChainLevel {
  SampledLoop loop;
  std::vector<uint8_t> contains_critical;  // flag per critical point
};

struct ChainError {
  int level;  // 1-based level that failed
  std::string kind;
  std::string detail;
};

struct PullbackChain {
  std::vector<ChainLevel> levels;  // levels[0] is the seed disk U_1
  BackwardOrbit orbit;
  Complex seed_center{0.0, 0.0};
  double seed_radius = 0.0;
  std::vector<Complex> criticals;
  std::optional<ChainError> error;  // set when construction stopped early
  int requested_depth = 0;
  // For invariant lifts: first level whose loop is certified to lie strictly
  // inside the level one period up, with an all-zero flag window. All deeper
  // flags are then zero by monotone pullback containment and the levels are
  // not materialized. 0 = never trapped.
  int trapped_from = 0;

  int depth() const { return static_cast<int>(levels.size()); }
};

// U_1 = circle(x_1, r); U_{i+1} = pullback of U_i at x_{i+1}. Containment
// flags per critical point at every level. Trace errors stop the chain and
// are recorded rather than thrown.
PullbackChain pullback_chain(const Polynomial& f, const BackwardOrbit& orbit, double radius, int depth,
                             const TraceConfig& cfg = {});

struct IndexBits {
  std::string bits;  // bits[i] = '1' iff the critical point lies in U_{i+1}
  double radius;
  int depth;
};

// Index word of Def-15 type for the chain and one critical point (by index
// into chain.criticals).
IndexBits index_bits(const PullbackChain& chain, int critical_index);

struct RegularPlaqueConfig {
  std::optional<Complex> seed_center;
  std::optional<double> seed_radius;
  int node_budget = 10000;
  TraceConfig trace;
};

struct RegularPlaqueResult {
  BackwardOrbit orbit;
  PullbackChain chain;
  std::vector<Complex> seed_candidates;  // the d disjoint seed disk centers examined
};

// Constructive regular point: seed disks away from all critical values, then
// branch choices whose pulled-back components avoid every critical point.
RegularPlaqueResult construct_regular_plaque(const Polynomial& f, int depth,
                                             const RegularPlaqueConfig& cfg = {});

struct IrregularOrbitConfig {
  double epsilon = 0.05;        // admissible distance to the orbit-closure sample
  double recurrence_eps = 0.05; // recurrence threshold on the critical point
  int sample_steps = 4096;      // forward steps for the orbit-closure sample
  double seed_radius = 0.1;     // first seed disk radius
  double shrink_factor = 0.5;   // seed radius multiplier per engulfing stage
  int node_budget = 10000;
  bool include_start_in_sample = false;  // reading of "orbit of c"
  TraceConfig trace;
};

enum class IrregularStatus { Ok, NoPcMembership, SearchExhausted };

struct IrregularOrbitResult {
  IrregularStatus status;
  BackwardOrbit orbit;
  std::vector<int> engulf_depths;   // levels whose pulled-back set contains c
  std::vector<double> stage_radii;  // seed radius per engulfing stage
  std::string detail;
};

// Greedy backward-orbit construction staying near the orbit closure of c
// until pulled-back neighborhoods engulf c, with shrinking seed disks.
IrregularOrbitResult construct_irregular_orbit(const Polynomial& f, Complex c, Complex x0, int depth,
                                               const IrregularOrbitConfig& cfg = {});

}  // namespace plaque::pullback
