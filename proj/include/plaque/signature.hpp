#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plaque/pullback.hpp"
#include "plaque/seq.hpp"

namespace plaque::engine {

using dynamics::Complex;
using dynamics::Cycle;
using dynamics::Polynomial;
using pullback::BackwardOrbit;
using pullback::ChainError;
using pullback::PullbackChain;
using pullback::TraceConfig;

struct IndexClassResult {
  std::optional<seqlat::TailClass> cls;  // empty = inconclusive
  std::string bits;
  double radius = 0.0;
  int depth = 0;
  int preperiod = 0;  // inferred (s, p) when resolved
  int period = 0;
  std::optional<ChainError> chain_error;
};

// Index word of a pullback chain, then the eventually periodic pattern in it:
// preperiod <= depth/2, period <= depth/4, at least two confirming periods.
IndexClassResult index_class(const Polynomial& f, const BackwardOrbit& orbit, int critical_index,
                             double radius, int depth, const TraceConfig& cfg = {});

struct PerRadiusEstimate {
  double radius;
  IndexClassResult index;
};

struct SignatureEstimate {
  std::optional<seqlat::Signature> value;
  std::vector<PerRadiusEstimate> per_radius;
  int stabilization_depth = 0;
  bool stable = false;
  std::string detail;  // truncation caveats
};

// Partial meets of per-radius index classes; Stable when every radius
// resolved and the meet chain shows at least two consecutive equal values.
SignatureEstimate estimate_signature(const Polynomial& f, const BackwardOrbit& orbit, int critical_index,
                                     const std::vector<double>& radii, int depth,
                                     const TraceConfig& cfg = {});

enum class Regularity { Regular, Irregular, Inconclusive };
std::string to_string(Regularity r);

struct RegularityResult {
  Regularity verdict;
  int depth;
  std::vector<double> radii;
  std::string detail;
};

RegularityResult regularity_verdict(const Polynomial& f, const BackwardOrbit& orbit, int depth,
                                    const std::vector<double>& radii, const TraceConfig& cfg = {});

struct Prediction {
  bool bottom;
  int n = 0;  // non-bottom: sign = shift_k(alpha[sq(n)]) for some 0 <= k < n
  std::string note;
};

// Cycle-classification prediction for sign(x, c) at the invariant lift.
Prediction predict_signature(const Polynomial& f, const Cycle& cycle, Complex critical,
                             int basin_steps = 20000, double basin_tol = 1e-2);

struct VerifyConfig {
  int depth = 32;
  int depth_parabolic = 64;
  double r0 = 0.4;
  double r0_parabolic = 1.2;
  int schedule_len = 6;  // radii r0 * 2^-j, j = 0..schedule_len-1
  // Repelling/neutral rows shrink r0 below this fraction of the distance to
  // the nearest critical point/value so regular rows stay clean.
  double clearance_factor = 0.4;
  dynamics::Tolerances tol;
  TraceConfig trace;
};

struct VerifyRow {
  int period;
  int cycle_index;
  Cycle cycle;
  int critical_index;
  Complex critical;
  std::vector<double> radii;
  int depth;
  Prediction prediction;
  SignatureEstimate estimate;
  RegularityResult regularity;
  std::optional<int> observed_shift;  // k with estimate == shift_k(alpha[sq(n)])
  bool match;     // stable estimate equals prediction
  bool resolved;  // estimate stable
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_match;  // over resolved rows
  int unresolved;
};

VerifyReport verify_cycle_theorem(const Polynomial& f, int n_max, const VerifyConfig& cfg = {});

struct BranchingCount {
  int levels_with_critical;
  unsigned long long component_lower_bound;  // 2^levels
};

BranchingCount branching_count(const PullbackChain& chain);

enum class ProbeStatus { Satisfied, Unsatisfied, Exhausted };
std::string to_string(ProbeStatus s);

struct ProbeEntry {
  Complex x;
  double radius;
  ProbeStatus status;
  int engulf_depth = 0;  // level at which the pulled-back set contained c
  int nodes_used = 0;
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  double satisfied_fraction;
};

// Inverse-critical test over the orbit-closure sample: for each probed point
// x and radius r, search for a preimage chain staying epsilon-close to the
// sample whose pulled-back component engulfs c. probe_limit > 0 probes only
// the first points of the sample (admissibility always uses the full sample).
ProbeReport inverse_critical_probe(const Polynomial& f, Complex c, const std::vector<Complex>& sample,
                                   const std::vector<double>& radii, int depth, double epsilon = 0.05,
                                   int node_budget = 10000, const TraceConfig& cfg = {},
                                   int probe_limit = 0);

}  // namespace plaque::engine
