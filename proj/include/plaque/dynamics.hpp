#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plaque/polynomial.hpp"
#include "plaque/roots.hpp"

namespace plaque::dynamics {

struct Tolerances {
  double band = 1e-9;           // |lambda| banding around 1
  double crit_coincide = 1e-9;  // cycle point vs critical point
  double root_unity = 1e-6;     // |lambda^p - 1| for parabolic detection
  int p_max = 64;
  double root_residual = 1e-9;  // |f^n(z) - z| certification
  double dedup_radius = 1e-8;   // orbit sample deduplication
  double separation = 1e-6;     // exact-period divisor test
  uint64_t seed = 0;
};

enum class CycleKind { Repelling, AttractingNonSuper, SuperAttracting, Parabolic, NeutralIrrational };

std::string to_string(CycleKind k);

struct CycleLabel {
  CycleKind kind;
  // For Parabolic: lambda = e^{2 pi i q/p}.
  int q = 0;
  int p = 0;
  std::string to_string() const;
};

// Periodic orbit stored in backward order: f(points[i+1]) = points[i] and
// f(points[0]) = points[n-1].
struct Cycle {
  std::vector<Complex> points;
  int period;
  Complex multiplier;
  CycleLabel label;
  int root_multiplicity = 1;     // > 1 when f^n(z) - z had a multiple root here
  bool separation_flagged = false;
};

struct OrbitResult {
  std::vector<Complex> points;
  bool escaped = false;
};

// (z0, f(z0), ..., f^N(z0)); stops early when |z| leaves the escape radius.
OrbitResult evaluate_orbit(const Polynomial& f, Complex z0, int steps);

// Distinct roots of f', polished to residual <= 1e-12, sorted by (re, im).
std::vector<Complex> critical_points(const Polynomial& f);

// All cycles of exact period n, sorted deterministically; multipliers by the
// chain-rule product over the cycle.
std::vector<Cycle> periodic_cycles(const Polynomial& f, int n, const Tolerances& tol = {});

CycleLabel classify_cycle(const Polynomial& f, const Cycle& c, const Tolerances& tol = {});

struct OrbitSample {
  std::vector<Complex> points;  // deduplicated forward orbit of the critical point
  bool escaped = false;
  bool includes_start = false;
};

// Desk-scale stand-in for the closure of the orbit of c. The orbit starts at
// f(c); include_start adds c itself (both readings are reported upstream).
OrbitSample orbit_closure_sample(const Polynomial& f, Complex c, int steps, bool include_start = false,
                                 double dedup_radius = 1e-8);

struct RecurrenceResult {
  double min_distance;
  int step;        // argmin m of |f^m(c) - c|
  int steps_used;
  bool escaped = false;
};

RecurrenceResult recurrence_probe(const Polynomial& f, Complex c, int steps);

// Helpers shared by the engine and the CLI.
bool lex_less_complex(Complex a, Complex b);
Complex cycle_multiplier(const Polynomial& f, const std::vector<Complex>& points);

}  // namespace plaque::dynamics
