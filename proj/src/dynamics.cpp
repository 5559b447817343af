#include "plaque/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaque/error.hpp"

namespace plaque::dynamics {

std::string to_string(CycleKind k) {
  switch (k) {
    case CycleKind::Repelling: return "Repelling";
    case CycleKind::AttractingNonSuper: return "AttractingNonSuper";
    case CycleKind::SuperAttracting: return "SuperAttracting";
    case CycleKind::Parabolic: return "Parabolic";
    case CycleKind::NeutralIrrational: return "NeutralIrrational";
  }
  return "?";
}

std::string CycleLabel::to_string() const {
  if (kind == CycleKind::Parabolic)
    return "Parabolic(" + std::to_string(q) + "," + std::to_string(p) + ")";
  return dynamics::to_string(kind);
}

bool lex_less_complex(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

OrbitResult evaluate_orbit(const Polynomial& f, Complex z0, int steps) {
  if (steps < 0) throw Error("BadArgument", "orbit length must be >= 0");
  const double escape = f.escape_radius();
  OrbitResult out;
  out.points.push_back(z0);
  for (int i = 0; i < steps; ++i) {
    Complex z = out.points.back();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error("NonFinite", "orbit produced a non-finite value");
    if (std::abs(z) > escape) {
      out.escaped = true;
      break;
    }
    out.points.push_back(f(z));
  }
  return out;
}

std::vector<Complex> critical_points(const Polynomial& f) {
  auto dcoeffs = f.derivative_coeffs();
  std::vector<Complex> roots = aberth_roots(dcoeffs);
  // Polish on f' directly.
  auto ddcoeffs = dcoeffs;
  {
    std::vector<Complex> d2(dcoeffs.size() - 1);
    for (size_t i = 1; i < dcoeffs.size(); ++i) d2[i - 1] = dcoeffs[i] * static_cast<double>(i);
    ddcoeffs = d2;
  }
  for (auto& z : roots) {
    for (int it = 0; it < 60; ++it) {
      Complex p = eval_poly(dcoeffs, z);
      if (std::abs(p) <= 1e-13) break;
      Complex dp = eval_poly(ddcoeffs, z);
      if (std::abs(dp) < 1e-300) break;
      z -= p / dp;
    }
  }
  // Collapse multiplicities to distinct values.
  std::sort(roots.begin(), roots.end(), lex_less_complex);
  std::vector<Complex> out;
  for (const auto& z : roots) {
    bool dup = false;
    for (const auto& w : out)
      if (std::abs(z - w) < 1e-8) dup = true;
    if (!dup) out.push_back(z);
  }
  int k = static_cast<int>(out.size());
  if (k < 1 || k > f.degree() - 1)
    throw Error("Internal", "critical point count outside 1..d-1");
  for (const auto& z : out)
    if (std::abs(eval_poly(dcoeffs, z)) > 1e-12)
      throw Error("RootsNotConverged", "critical point residual above 1e-12");
  return out;
}

Complex cycle_multiplier(const Polynomial& f, const std::vector<Complex>& points) {
  Complex prod{1.0, 0.0};
  for (const auto& z : points) prod *= f.dfdz(z);
  return prod;
}

namespace {

// Continued-fraction convergent denominators of theta in (0,1), ascending.
std::vector<long long> convergent_denominators(double theta, long long cap) {
  std::vector<long long> qs;
  double x = theta;
  long long q_prev = 0, q_cur = 1;
  for (int i = 0; i < 40; ++i) {
    double fl = std::floor(x);
    long long a = static_cast<long long>(fl);
    long long q_next = (i == 0) ? 1 : a * q_cur + q_prev;
    if (i > 0) {
      q_prev = q_cur;
      q_cur = q_next;
      if (q_cur > cap) break;
      qs.push_back(q_cur);
    }
    double frac = x - fl;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  return qs;
}

}  // namespace

CycleLabel classify_cycle(const Polynomial& f, const Cycle& c, const Tolerances& tol) {
  const Complex lambda = c.multiplier;
  const double mod = std::abs(lambda);
  if (mod > 1.0 + tol.band) return {CycleKind::Repelling};
  if (mod < 1.0 - tol.band) {
    for (const auto& z : c.points)
      for (const auto& cp : critical_points(f))
        if (std::abs(z - cp) <= tol.crit_coincide) return {CycleKind::SuperAttracting};
    return {CycleKind::AttractingNonSuper};
  }
  // Neutral band: search for a root of unity among continued-fraction
  // convergents of arg(lambda)/2pi (plus p=1 for lambda near 1).
  double theta = std::arg(lambda) / (2.0 * std::numbers::pi);
  if (theta < 0.0) theta += 1.0;
  std::vector<long long> candidates{1};
  for (long long q : convergent_denominators(theta, tol.p_max)) candidates.push_back(q);
  for (long long p : candidates) {
    if (p > tol.p_max) continue;
    Complex lp{1.0, 0.0};
    for (long long i = 0; i < p; ++i) lp *= lambda;
    if (std::abs(lp - Complex{1.0, 0.0}) <= tol.root_unity) {
      int q = static_cast<int>(std::llround(theta * static_cast<double>(p))) % static_cast<int>(p);
      if (q < 0) q += static_cast<int>(p);
      return {CycleKind::Parabolic, q, static_cast<int>(p)};
    }
  }
  return {CycleKind::NeutralIrrational};
}

std::vector<Cycle> periodic_cycles(const Polynomial& f, int n, const Tolerances& tol) {
  if (n < 1) throw Error("BadArgument", "period must be >= 1");
  RootConfig rc;
  rc.seed = tol.seed;
  std::vector<PeriodicRoot> roots = periodic_points(f, n, rc);

  // Keep points of exact period n: every proper divisor m of n must move them.
  std::vector<PeriodicRoot> exact;
  for (const auto& r : roots) {
    bool proper = true;
    for (int m = 1; m < n; ++m) {
      if (n % m != 0) continue;
      Complex w = r.z;
      for (int i = 0; i < m; ++i) w = f(w);
      if (std::abs(w - r.z) <= tol.separation) {
        proper = false;
        break;
      }
    }
    if (proper) exact.push_back(r);
  }

  // Group into cycles by following the forward orbit and matching points.
  std::vector<bool> used(exact.size(), false);
  std::vector<Cycle> cycles;
  for (size_t i = 0; i < exact.size(); ++i) {
    if (used[i]) continue;
    std::vector<Complex> forward{exact[i].z};
    std::vector<size_t> members{i};
    used[i] = true;
    bool collision = false;
    Complex z = exact[i].z;
    for (int s = 1; s < n; ++s) {
      z = f(z);
      // match to the nearest exact-period point
      size_t best = exact.size();
      double best_d = 1e300;
      for (size_t j = 0; j < exact.size(); ++j) {
        double d = std::abs(exact[j].z - z);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best == exact.size() || best_d > 1e-6) throw Error("Internal", "cycle grouping failed to match orbit point");
      if (used[best]) collision = true;  // multiple root collapsed onto one location
      used[best] = true;
      forward.push_back(exact[best].z);
      members.push_back(best);
    }
    // Convert the forward orbit (z, f(z), ...) to the backward storage order
    // (x_1, x_2, ...) with f(x_{i+1}) = x_i, starting at the lex-least point:
    // points[j] = forward[(start - j) mod n].
    size_t start = 0;
    for (size_t j = 1; j < forward.size(); ++j)
      if (lex_less_complex(forward[j], forward[start])) start = j;
    std::vector<Complex> backward;
    backward.reserve(forward.size());
    for (size_t j = 0; j < static_cast<size_t>(n); ++j)
      backward.push_back(forward[(start + static_cast<size_t>(n) - j) % static_cast<size_t>(n)]);

    Cycle cyc;
    cyc.points = backward;
    cyc.period = n;
    cyc.multiplier = cycle_multiplier(f, backward);
    cyc.root_multiplicity = 1;
    for (size_t j : members) cyc.root_multiplicity = std::max(cyc.root_multiplicity, exact[j].multiplicity);
    cyc.separation_flagged = collision || cyc.root_multiplicity > 1;
    cyc.label = classify_cycle(f, cyc, tol);
    cycles.push_back(std::move(cyc));
  }
  std::sort(cycles.begin(), cycles.end(),
            [](const Cycle& a, const Cycle& b) { return lex_less_complex(a.points[0], b.points[0]); });

  for (const auto& cyc : cycles) {
    for (const auto& z : cyc.points) {
      Complex w = z;
      for (int s = 0; s < n; ++s) w = f(w);
      if (std::abs(w - z) > tol.root_residual)
        throw Error("RootsNotConverged", "periodic point residual above tolerance");
    }
  }
  return cycles;
}

OrbitSample orbit_closure_sample(const Polynomial& f, Complex c, int steps, bool include_start,
                                 double dedup_radius) {
  OrbitSample out;
  out.includes_start = include_start;
  OrbitResult orbit = evaluate_orbit(f, c, steps);
  out.escaped = orbit.escaped;
  size_t first = include_start ? 0 : 1;
  for (size_t i = first; i < orbit.points.size(); ++i) {
    bool dup = false;
    for (const auto& w : out.points)
      if (std::abs(orbit.points[i] - w) < dedup_radius) dup = true;
    if (!dup) out.points.push_back(orbit.points[i]);
  }
  return out;
}

RecurrenceResult recurrence_probe(const Polynomial& f, Complex c, int steps) {
  RecurrenceResult out{1e300, 0, 0, false};
  Complex z = c;
  const double escape = f.escape_radius();
  for (int m = 1; m <= steps; ++m) {
    z = f(z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > escape) {
      out.escaped = true;
      out.steps_used = m - 1;
      return out;
    }
    double d = std::abs(z - c);
    if (d < out.min_distance) {
      out.min_distance = d;
      out.step = m;
    }
    out.steps_used = m;
  }
  return out;
}

}  // namespace plaque::dynamics
