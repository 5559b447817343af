#pragma once

#include <vector>

#include "plaque/dynamics.hpp"

namespace plaque::pullback {

using dynamics::Complex;
using dynamics::Polynomial;

// Closed sampled curve. The wraparound edge samples.back() -> samples.front()
// is implied. For traced curves params[i] is the parameter of sample i on the
// parent loop, in parent sample-index units (mod parent size); seed circles
// have no params.
struct SampledLoop {
  std::vector<Complex> samples;
  std::vector<double> params;
  Complex center{0.0, 0.0};
  int traversals = 1;     // parent circuits needed to close (1 for seeds)
  double seed_radius = 0.0;  // > 0 for seed circles
};

struct WindingResult {
  int winding;
  bool inside;
};

struct TraceConfig {
  double eta = 0.5;               // nearest/second-nearest branch ratio bound
  size_t max_samples = size_t{1} << 16;  // refinement cap per traced loop
  double close_tol = 1e-9;
  double newton_tol = 1e-12;
  size_t target_samples = 1024;   // decimation target for stored loops
  size_t min_samples = 64;
  int circle_samples = 256;       // seed circle resolution
  // Loops contracted below this extent stop being traced once their tail is
  // certified (see PullbackChain::trapped_from); tracing further would sink
  // below double precision within a few more levels.
  double trap_scale = 1e-8;
};

SampledLoop circle_loop(Complex center, double radius, int n_samples);

// Discrete winding number of the closed polyline around z; inside iff nonzero.
// Throws OnCurve when z sits within 1e-12 of the polyline.
WindingResult winding_contains(const SampledLoop& loop, Complex z);

double min_distance_to_polyline(const std::vector<Complex>& samples, Complex z);

// All preimages f^{-1}(w), with multiplicity, polished to residual <= 1e-12.
std::vector<Complex> preimage_set(const Polynomial& f, Complex w, uint64_t seed = 0);

// Connected component of f^{-1}(loop) containing target, traced by
// continuation with the branch-ambiguity ratio test and parameter bisection.
// target must be a preimage of loop.center. Throws AmbiguousBranch when the
// refinement cap is hit near a critical value, OpenCurve when the trace fails
// to close within degree-many circuits.
SampledLoop pullback_loop(const Polynomial& f, const SampledLoop& loop, Complex target,
                          const TraceConfig& cfg = {});

// f applied to every sample (batched).
std::vector<Complex> map_samples(const Polynomial& f, const SampledLoop& loop);

// Max distance from f(sample of next) to the parent polyline segment the
// sample was traced from. Returns 0 for seed circles (no parent).
double forward_residual(const Polynomial& f, const SampledLoop& next, const SampledLoop& parent);

}  // namespace plaque::pullback
