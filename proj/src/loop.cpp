#include "plaque/loop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "plaque/error.hpp"
#include "plaque/kernels.hpp"
#include "plaque/roots.hpp"

namespace plaque::pullback {

SampledLoop circle_loop(Complex center, double radius, int n_samples) {
  if (radius <= 0.0 || n_samples < 8) throw Error("BadArgument", "circle needs radius > 0 and >= 8 samples");
  SampledLoop loop;
  loop.center = center;
  loop.seed_radius = radius;
  loop.samples.reserve(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / n_samples;
    loop.samples.push_back(center + std::polar(radius, angle));
  }
  return loop;
}

namespace {

double point_segment_distance(Complex p, Complex a, Complex b) {
  double d;
  kernels::scalar::segment_distance_batch(&p, &a, &b, &d, 1);
  return d;
}

}  // namespace

double min_distance_to_polyline(const std::vector<Complex>& samples, Complex z) {
  size_t n = samples.size();
  std::vector<Complex> p(n, z), b(n);
  for (size_t i = 0; i < n; ++i) b[i] = samples[(i + 1) % n];
  std::vector<double> d(n);
  kernels::segment_distance_batch(p, samples, b, d);
  return *std::min_element(d.begin(), d.end());
}

WindingResult winding_contains(const SampledLoop& loop, Complex z) {
  if (loop.samples.size() < 3) throw Error("BadArgument", "winding needs a closed polyline");
  if (min_distance_to_polyline(loop.samples, z) < 1e-12)
    throw Error("OnCurve", "point lies on the sampled curve within tolerance");
  int w = kernels::winding_number(loop.samples, z);
  return {w, w != 0};
}

std::vector<Complex> preimage_set(const Polynomial& f, Complex w, uint64_t seed) {
  std::vector<Complex> coeffs = f.coefficients();
  coeffs[0] -= w;
  dynamics::RootConfig rc;
  rc.seed = seed;
  std::vector<Complex> roots = dynamics::aberth_roots(coeffs, rc);
  double scale = std::max(1.0, std::abs(w));
  for (auto& z : roots) {
    try {
      z = dynamics::newton_preimage(f, w, z, 1e-13);
    } catch (const Error&) {
      // multiple preimage at a critical value: Newton stalls at the noise
      // floor, which still satisfies the residual bound below
    }
    if (std::abs(f(z) - w) > 1e-12 * scale)
      throw Error("RootsNotConverged", "preimage residual above 1e-12");
  }
  std::sort(roots.begin(), roots.end(), dynamics::lex_less_complex);
  return roots;
}

namespace {

Complex nearest_critical_value(const Polynomial& f, Complex w) {
  Complex best{0.0, 0.0};
  double bd = 1e300;
  for (const auto& c : dynamics::critical_points(f)) {
    Complex v = f(c);
    double d = std::abs(v - w);
    if (d < bd) {
      bd = d;
      best = v;
    }
  }
  return best;
}

// Continuation state: the full preimage fiber of the current base point plus
// the traced branch. Trial steps are proposed against a copy and committed
// only when the branch pick is unambiguous.
class PathLifter {
 public:
  PathLifter(const Polynomial& f, Complex w0, Complex y0, const TraceConfig& cfg)
      : dcoeffs_(f.derivative_coeffs()), f_(f), cfg_(cfg), fiber_(preimage_set(f, w0)), y_(y0) {}

  Complex current() const { return y_; }

  // Attempt to advance the lift to base point w over parameter increment dt.
  // Returns false when the branch choice fails the eta ratio test.
  bool try_step(Complex w, double dt) {
    std::vector<Complex> next = propose_fiber(w);
    Complex predicted = have_slope_ ? y_ + slope_ * dt : y_;
    double d1 = 1e300, d2 = 1e300;
    Complex best{0.0, 0.0};
    for (const auto& z : next) {
      double d = std::abs(z - predicted);
      if (d < d1) {
        d2 = d1;
        d1 = d;
        best = z;
      } else if (d < d2) {
        d2 = d;
      }
    }
    if (next.size() >= 2 && !(d1 <= cfg_.eta * d2)) return false;
    if (dt > 0.0) {
      slope_ = (best - y_) / dt;
      have_slope_ = true;
    }
    y_ = best;
    fiber_ = std::move(next);
    return true;
  }

 private:
  std::vector<Complex> propose_fiber(Complex w) const {
    std::vector<Complex> next = fiber_;
    double scale = std::max(1.0, std::abs(w));
    bool warm_ok = true;
    for (auto& z : next) {
      bool converged = false;
      for (int it = 0; it < 24 && !converged; ++it) {
        Complex r = f_(z) - w;
        if (std::abs(r) <= 1e-13 * scale) {
          converged = true;
          break;
        }
        Complex d = dynamics::eval_poly(dcoeffs_, z);
        if (std::abs(d) < 1e-300) break;
        z -= r / d;
      }
      if (!converged && std::abs(f_(z) - w) > 1e-11 * scale) {
        warm_ok = false;
        break;
      }
    }
    if (warm_ok && next.size() > 1) {
      // Warm steps can silently merge two branches onto one root.
      double min_gap = 1e300;
      for (size_t i = 0; i < next.size(); ++i)
        for (size_t j = i + 1; j < next.size(); ++j)
          min_gap = std::min(min_gap, std::abs(next[i] - next[j]));
      if (min_gap < 1e-9 * scale) warm_ok = false;
    }
    if (!warm_ok) next = preimage_set(f_, w);
    return next;
  }

  std::vector<Complex> dcoeffs_;
  const Polynomial& f_;
  TraceConfig cfg_;
  std::vector<Complex> fiber_;
  Complex y_;
  Complex slope_{0.0, 0.0};
  bool have_slope_ = false;
};

void decimate(SampledLoop& loop, const TraceConfig& cfg) {
  double diam = 1e-12;
  for (const auto& s : loop.samples) diam = std::max(diam, std::abs(s - loop.center));
  double tol = 2e-5 * diam;
  for (int round = 0; round < 12 && loop.samples.size() > cfg.target_samples; ++round, tol *= 2.0) {
    const auto& s = loop.samples;
    const size_t n = s.size();
    std::vector<size_t> keep{0};
    size_t i = 0;
    while (i < n - 1) {
      size_t jmax = std::min(n - 1, i + 32);
      size_t best = i + 1;
      for (size_t j = i + 2; j <= jmax; ++j) {
        bool ok = true;
        for (size_t k = i + 1; k < j && ok; ++k)
          if (point_segment_distance(s[k], s[i], s[j]) > tol) ok = false;
        if (!ok) break;
        best = j;
      }
      keep.push_back(best);
      i = best;
    }
    if (keep.size() < cfg.min_samples || keep.size() >= n) continue;
    std::vector<Complex> s2;
    std::vector<double> p2;
    s2.reserve(keep.size());
    for (size_t k : keep) {
      s2.push_back(loop.samples[k]);
      if (!loop.params.empty()) p2.push_back(loop.params[k]);
    }
    loop.samples = std::move(s2);
    loop.params = std::move(p2);
  }
}

}  // namespace

SampledLoop pullback_loop(const Polynomial& f, const SampledLoop& base, Complex target,
                          const TraceConfig& cfg) {
  if (base.samples.size() < 3) throw Error("BadArgument", "base loop must be sampled");
  double scale = std::max(1.0, std::abs(base.center));
  // target may sit over the center (usual chain case) or over the basepoint
  // of the curve itself
  bool over_center = std::abs(f(target) - base.center) <= 1e-6 * scale;
  bool over_basepoint = std::abs(f(target) - base.samples[0]) <= 1e-6 * scale;
  if (!over_center && !over_basepoint)
    throw Error("BadTarget", "target is not a preimage of the loop center or basepoint");
  if (over_center) {
    try {
      target = dynamics::newton_preimage(f, base.center, target, cfg.newton_tol);
    } catch (const Error&) {
      // target at a critical point: accept the unpolished value
    }
  }

  const size_t m = base.samples.size();

  // The trace may start at any boundary sample; pick one whose radial
  // segment from the center stays clear of the critical values (the straight
  // seed-lift path would otherwise be ambiguous). When the center itself is
  // the critical value the inner quarter of the segment is exempt, since the
  // lift jumps to mid-radius there anyway.
  std::vector<Complex> center_fiber = preimage_set(f, base.center);
  int target_mult = 0;
  for (const auto& z : center_fiber)
    if (std::abs(z - target) <= 1e-6 * scale) ++target_mult;
  size_t j0 = 0;
  if (over_center) {
    std::vector<Complex> crit_values;
    for (const auto& cp : dynamics::critical_points(f)) crit_values.push_back(f(cp));
    double s_skip = target_mult >= 2 ? 0.25 : 0.0;
    double best = -1.0;
    for (size_t cand = 0; cand < 16; ++cand) {
      size_t j = (m * cand) / 16;
      Complex a = base.center + s_skip * (base.samples[j] - base.center);
      double clearance = 1e300;
      for (const auto& v : crit_values) {
        double d;
        kernels::scalar::segment_distance_batch(&v, &a, &base.samples[j], &d, 1);
        clearance = std::min(clearance, d);
      }
      if (clearance > best) {
        best = clearance;
        j0 = j;
      }
    }
  }

  auto base_sample = [&](size_t i) -> const Complex& { return base.samples[(i + j0) % m]; };
  auto base_at = [&](double t) -> Complex {
    double tm = std::fmod(t, static_cast<double>(m));
    if (tm < 0.0) tm += static_cast<double>(m);
    size_t i = static_cast<size_t>(tm);
    if (i >= m) i = 0;
    double frac = tm - static_cast<double>(i);
    const Complex& a = base_sample(i);
    const Complex& b = base_sample(i + 1);
    return a + frac * (b - a);
  };
  auto radial_at = [&](double s) -> Complex { return base.center + s * (base_sample(0) - base.center); };

  // Radial lift (center mode): carry target from the fiber over the center
  // to the fiber over base.samples[0]. When the target is a multiple
  // preimage (the center is a critical value), the branches are symmetric
  // around it; any of them bounds the same component, so jump to mid-radius
  // and pick one deterministically. In basepoint mode the target is already
  // on the curve fiber.
  Complex y = target;
  if (over_center) {
    double s = 0.0;
    if (target_mult >= 2) {
      s = 0.5;
      std::vector<Complex> fib = preimage_set(f, radial_at(s));
      double dmin = 1e300;
      for (const auto& z : fib) dmin = std::min(dmin, std::abs(z - target));
      Complex pick{0.0, 0.0};
      bool found = false;
      for (const auto& z : fib)
        if (std::abs(z - target) <= dmin + 1e-12 * scale)
          if (!found || dynamics::lex_less_complex(pick, z)) {
            pick = z;
            found = true;
          }
      y = pick;
    }
    PathLifter lifter(f, radial_at(s), y, cfg);
    double h = 0.25;
    size_t rejects = 0;
    while (s < 1.0) {
      double s_next = std::min(1.0, s + h);
      if (lifter.try_step(radial_at(s_next), s_next - s)) {
        s = s_next;
        h = std::min(0.25, h * 1.5);
      } else {
        h *= 0.5;
        if (++rejects > 64 || h < 1e-9)
          throw Error("AmbiguousBranch",
                      "seed lift could not separate branches near critical value " +
                          dynamics::format_complex(nearest_critical_value(f, radial_at(s_next))));
      }
    }
    y = lifter.current();
  } else {
    y = dynamics::newton_preimage(f, base_sample(0), target, cfg.newton_tol);
  }

  // Loop trace over up to degree-many circuits of the base.
  SampledLoop out;
  out.center = target;
  out.samples.push_back(y);
  out.params.push_back(static_cast<double>(j0));

  PathLifter lifter(f, base_sample(0), y, cfg);
  const int max_circuits = f.degree();
  double t = 0.0;
  double dt = 1.0;
  int ok_streak = 0;

  for (int circuit = 0; circuit < max_circuits; ++circuit) {
    const double t_end = static_cast<double>(m) * (circuit + 1);
    while (t < t_end) {
      double t_next = std::min(t_end, t + dt);
      Complex w = base_at(t_next);
      if (lifter.try_step(w, t_next - t)) {
        t = t_next;
        if (++ok_streak >= 8) {
          dt = std::min(1.0, dt * 2.0);
          ok_streak = 0;
        }
        bool at_closure = (t == t_end) && std::abs(lifter.current() - out.samples[0]) <= cfg.close_tol;
        if (!at_closure) {
          out.samples.push_back(lifter.current());
          // parameters reference the stored (unrotated) parent samples
          out.params.push_back(std::fmod(t + static_cast<double>(j0), static_cast<double>(m)));
        }
        if (out.samples.size() > cfg.max_samples)
          throw Error("AmbiguousBranch",
                      "refinement cap exceeded near critical value " +
                          dynamics::format_complex(nearest_critical_value(f, w)));
      } else {
        ok_streak = 0;
        dt *= 0.5;
        if (dt < 1.0 / static_cast<double>(cfg.max_samples))
          throw Error("AmbiguousBranch",
                      "step bisection exhausted near critical value " +
                          dynamics::format_complex(nearest_critical_value(f, w)));
      }
    }
    if (std::abs(lifter.current() - out.samples[0]) <= cfg.close_tol) {
      out.traversals = circuit + 1;
      decimate(out, cfg);
      if (over_center) {
        WindingResult wr = winding_contains(out, target);
        if (!wr.inside) throw Error("OpenCurve", "traced component does not enclose the target");
      } else {
        // basepoint mode: the target sits on the curve; take an enclosed
        // preimage of the center as the interior reference
        out.center = target;
        for (const auto& z : preimage_set(f, base.center)) {
          try {
            if (winding_contains(out, z).inside) {
              out.center = z;
              break;
            }
          } catch (const Error&) {
          }
        }
      }
      return out;
    }
  }
  throw Error("OpenCurve", "trace failed to close within degree-many circuits");
}

std::vector<Complex> map_samples(const Polynomial& f, const SampledLoop& loop) {
  std::vector<Complex> out(loop.samples.size());
  kernels::poly_eval_batch(f.coefficients(), loop.samples, out);
  return out;
}

double forward_residual(const Polynomial& f, const SampledLoop& next, const SampledLoop& parent) {
  if (next.params.empty()) return 0.0;
  size_t n = next.samples.size();
  size_t m = parent.samples.size();
  std::vector<Complex> mapped = map_samples(f, next);
  std::vector<Complex> a(n), b(n);
  for (size_t i = 0; i < n; ++i) {
    size_t k = static_cast<size_t>(next.params[i]) % m;
    a[i] = parent.samples[k];
    b[i] = parent.samples[(k + 1) % m];
  }
  std::vector<double> d(n);
  kernels::segment_distance_batch(mapped, a, b, d);
  return *std::max_element(d.begin(), d.end());
}

}  // namespace plaque::pullback
