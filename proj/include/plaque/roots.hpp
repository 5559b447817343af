#pragma once

#include <cstdint>
#include <vector>

#include "plaque/polynomial.hpp"

namespace plaque::dynamics {

struct RootConfig {
  uint64_t seed = 0;        // phase of the initial-guess circle
  double tol = 1e-13;       // simultaneous-iteration step tolerance
  int max_iter = 400;
  double cluster_radius = 1e-5;  // roots closer than this are one cluster
};

// All roots (with multiplicity) of the polynomial with the given ascending
// coefficients, by Aberth-Ehrlich simultaneous iteration.
std::vector<Complex> aberth_roots(const std::vector<Complex>& coeffs, const RootConfig& cfg = {});

// Newton iteration for f^n(z) = w evaluated through the composition (never an
// expanded form). Returns the refined point; throws on non-convergence.
Complex newton_preimage(const Polynomial& f, Complex w, Complex start, double tol = 1e-12, int max_iter = 64);

// Newton refinement of a root of F(z) = f^n(z) - z. For multiplicity > 1 the
// iteration runs on the (multiplicity-1)-th derivative of F, which has a
// simple root there and so restores full accuracy on parabolic points.
Complex polish_periodic_root(const Polynomial& f, int n, Complex start, int multiplicity = 1,
                             double tol = 1e-12, int max_iter = 80);

// Roots of f^n(z) - z: expansion-based simultaneous iteration for starting
// values, composition-based polishing, cluster detection for multiple roots.
// Returned points carry their cluster multiplicity.
struct PeriodicRoot {
  Complex z;
  int multiplicity;
};
std::vector<PeriodicRoot> periodic_points(const Polynomial& f, int n, const RootConfig& cfg = {});

}  // namespace plaque::dynamics
