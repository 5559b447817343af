#include "plaque/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaque/error.hpp"

namespace plaque::pullback {

std::string to_string(BackwardOrbit::Generator g) {
  switch (g) {
    case BackwardOrbit::Generator::InvariantLift: return "invariant-lift";
    case BackwardOrbit::Generator::ExplicitBranches: return "explicit-branches";
    case BackwardOrbit::Generator::Greedy: return "greedy";
  }
  return "?";
}

BackwardOrbit BackwardOrbit::invariant_lift(const Cycle& cycle, int base_index, int length) {
  int n = cycle.period;
  if (base_index < 1 || base_index > n) throw Error("BadArgument", "base index must lie in 1..period");
  BackwardOrbit orbit;
  orbit.generator = Generator::InvariantLift;
  orbit.cycle_period = n;
  orbit.base_index = base_index;
  orbit.points.reserve(static_cast<size_t>(length));
  // cycle.points is already stored backward (f(points[i+1]) = points[i]), so
  // the lift just walks it cyclically from the base.
  for (int j = 0; j < length; ++j)
    orbit.points.push_back(cycle.points[static_cast<size_t>((base_index - 1 + j) % n)]);
  return orbit;
}

BackwardOrbit BackwardOrbit::from_points(const Polynomial& f, std::vector<Complex> pts, Generator gen) {
  if (pts.empty()) throw Error("BadArgument", "orbit must be nonempty");
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    double scale = std::max(1.0, std::abs(pts[i]));
    if (std::abs(f(pts[i + 1]) - pts[i]) > 1e-9 * scale)
      throw Error("BadOrbit", "orbit violates f(x_{i+1}) = x_i at index " + std::to_string(i + 1));
  }
  BackwardOrbit orbit;
  orbit.points = std::move(pts);
  orbit.generator = gen;
  return orbit;
}

namespace {

std::vector<uint8_t> containment_flags(const SampledLoop& loop, const std::vector<Complex>& criticals) {
  std::vector<uint8_t> flags(criticals.size(), 0);
  for (size_t k = 0; k < criticals.size(); ++k)
    flags[k] = winding_contains(loop, criticals[k]).inside ? 1 : 0;
  return flags;
}

}  // namespace

namespace {

double max_sample_distance(const SampledLoop& loop, Complex center) {
  double r = 0.0;
  for (const auto& s : loop.samples) r = std::max(r, std::abs(s - center));
  return r;
}

}  // namespace

PullbackChain pullback_chain(const Polynomial& f, const BackwardOrbit& orbit, double radius, int depth,
                             const TraceConfig& cfg) {
  if (radius <= 0.0) throw Error("BadArgument", "seed radius must be positive");
  if (depth < 0) throw Error("BadArgument", "depth must be >= 0");
  if (static_cast<int>(orbit.points.size()) < depth)
    throw Error("BadArgument", "orbit shorter than requested depth");

  PullbackChain chain;
  chain.orbit = orbit;
  chain.criticals = dynamics::critical_points(f);
  chain.seed_radius = radius;
  chain.requested_depth = depth;
  if (depth == 0) return chain;
  chain.seed_center = orbit.points[0];

  const int period =
      orbit.generator == BackwardOrbit::Generator::InvariantLift ? std::max(1, orbit.cycle_period) : 0;

  SampledLoop seed = circle_loop(orbit.points[0], radius, cfg.circle_samples);
  chain.levels.push_back({seed, containment_flags(seed, chain.criticals)});
  for (int i = 1; i < depth; ++i) {
    try {
      SampledLoop next = pullback_loop(f, chain.levels.back().loop, orbit.points[static_cast<size_t>(i)], cfg);
      chain.levels.push_back({next, containment_flags(next, chain.criticals)});
    } catch (const Error& e) {
      chain.error = ChainError{i + 1, e.kind(), e.what()};
      break;
    }
    // Trapped-tail certificate for invariant lifts: level i+1 strictly inside
    // level i+1-n around the same cycle point with an all-zero flag window
    // forces every deeper flag to zero (components of preimages of a subset
    // stay inside the matching components).
    if (period > 0 && i >= period) {
      const ChainLevel& deep = chain.levels.back();
      const ChainLevel& shallow = chain.levels[static_cast<size_t>(i - period)];
      bool window_zero = true;
      for (int j = i - period + 1; j <= i && window_zero; ++j)
        for (uint8_t flag : chain.levels[static_cast<size_t>(j)].contains_critical)
          if (flag) window_zero = false;
      if (window_zero) {
        Complex center = orbit.points[static_cast<size_t>(i)];
        double outer = max_sample_distance(deep.loop, center);
        double inner = min_distance_to_polyline(shallow.loop.samples, center);
        bool near_precision_floor = outer < cfg.trap_scale * (1.0 + std::abs(center));
        if (near_precision_floor && outer < inner && outer > 0.0) {
          chain.trapped_from = i + 2;  // levels after the current one
          break;
        }
      }
    }
  }
  return chain;
}

IndexBits index_bits(const PullbackChain& chain, int critical_index) {
  if (critical_index < 0 || critical_index >= static_cast<int>(chain.criticals.size()))
    throw Error("BadArgument", "critical point index out of range");
  IndexBits out;
  out.radius = chain.seed_radius;
  out.bits.reserve(static_cast<size_t>(chain.requested_depth));
  for (const auto& level : chain.levels)
    out.bits += level.contains_critical[static_cast<size_t>(critical_index)] ? '1' : '0';
  // certified zero tail past the trapping level
  if (chain.trapped_from > 0 && !chain.error)
    while (static_cast<int>(out.bits.size()) < chain.requested_depth) out.bits += '0';
  out.depth = static_cast<int>(out.bits.size());
  return out;
}

namespace {

// Seed disks for the regular-point construction: d disjoint disks away from
// every critical value and critical point.
std::vector<Complex> select_seed_centers(const Polynomial& f, double& radius_out) {
  const int d = f.degree();
  std::vector<Complex> crit = dynamics::critical_points(f);
  std::vector<Complex> values;
  for (const auto& c : crit) values.push_back(f(c));

  double big = f.escape_radius();
  double r0 = 0.1;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double ring = big * (1.0 + 0.25 * (attempt % 4));
    double phase = 0.37 + 0.17 * static_cast<double>(attempt);
    std::vector<Complex> centers;
    bool ok = true;
    for (int k = 0; k < d && ok; ++k) {
      Complex z = std::polar(ring, phase + 2.0 * std::numbers::pi * k / d);
      for (const auto& v : values)
        if (std::abs(z - v) < 4.0 * r0) ok = false;
      for (const auto& c : crit)
        if (std::abs(z - c) < 4.0 * r0) ok = false;
      for (const auto& prev : centers)
        if (std::abs(z - prev) < 4.0 * r0) ok = false;
      centers.push_back(z);
    }
    if (ok) {
      radius_out = r0;
      return centers;
    }
  }
  throw Error("SearchExhausted", "could not place disjoint seed disks away from critical values");
}

struct RegularSearch {
  const Polynomial& f;
  const std::vector<Complex>& criticals;
  const RegularPlaqueConfig& cfg;
  int nodes_used = 0;

  // Extend the chain to the requested depth, trying preimage branches in
  // lex-descending order; a branch is admissible when its pulled-back
  // component avoids every critical point.
  bool extend(std::vector<ChainLevel>& levels, std::vector<Complex>& orbit, int depth) {
    if (static_cast<int>(levels.size()) >= depth) return true;
    if (nodes_used >= cfg.node_budget) return false;
    std::vector<Complex> candidates = preimage_set(f, orbit.back());
    // lex-descending: positive-real branches first
    std::sort(candidates.begin(), candidates.end(),
              [](Complex a, Complex b) { return dynamics::lex_less_complex(b, a); });
    std::vector<Complex> tried;
    for (const auto& y : candidates) {
      bool dup = false;
      for (const auto& t : tried)
        if (std::abs(y - t) < 1e-10) dup = true;
      if (dup) continue;
      tried.push_back(y);
      ++nodes_used;
      try {
        SampledLoop next = pullback_loop(f, levels.back().loop, y, cfg.trace);
        std::vector<uint8_t> flags = containment_flags(next, criticals);
        bool regular = std::all_of(flags.begin(), flags.end(), [](uint8_t b) { return b == 0; });
        if (!regular) continue;
        levels.push_back({std::move(next), std::move(flags)});
        orbit.push_back(y);
        if (extend(levels, orbit, depth)) return true;
        levels.pop_back();
        orbit.pop_back();
      } catch (const Error&) {
        continue;  // ambiguous or open trace: treat the branch as inadmissible
      }
    }
    return false;
  }
};

}  // namespace

RegularPlaqueResult construct_regular_plaque(const Polynomial& f, int depth, const RegularPlaqueConfig& cfg) {
  RegularPlaqueResult out;
  std::vector<Complex> criticals = dynamics::critical_points(f);

  double radius = cfg.seed_radius.value_or(0.1);
  std::vector<Complex> seeds;
  if (cfg.seed_center) {
    seeds = {*cfg.seed_center};
  } else {
    double auto_radius = radius;
    seeds = select_seed_centers(f, auto_radius);
    if (!cfg.seed_radius) radius = auto_radius;
  }
  out.seed_candidates = seeds;

  if (depth == 0) {
    out.chain.criticals = criticals;
    out.chain.seed_radius = radius;
    out.orbit.generator = BackwardOrbit::Generator::ExplicitBranches;
    return out;  // empty chain, trivially regular
  }

  RegularSearch search{f, criticals, cfg, 0};
  for (const auto& seed : seeds) {
    SampledLoop seed_loop = circle_loop(seed, radius, cfg.trace.circle_samples);
    std::vector<uint8_t> flags = containment_flags(seed_loop, criticals);
    if (!std::all_of(flags.begin(), flags.end(), [](uint8_t b) { return b == 0; })) continue;
    std::vector<ChainLevel> levels{{seed_loop, flags}};
    std::vector<Complex> orbit{seed};
    if (search.extend(levels, orbit, depth)) {
      out.chain.levels = std::move(levels);
      out.chain.orbit = BackwardOrbit::from_points(f, orbit, BackwardOrbit::Generator::ExplicitBranches);
      out.chain.seed_center = seed;
      out.chain.seed_radius = radius;
      out.chain.criticals = criticals;
      out.orbit = out.chain.orbit;
      return out;
    }
  }
  throw Error("SearchExhausted", "no critical-point-free pullback chain found within budget");
}

IrregularOrbitResult construct_irregular_orbit(const Polynomial& f, Complex c, Complex x0, int depth,
                                               const IrregularOrbitConfig& cfg) {
  IrregularOrbitResult out;
  out.status = IrregularStatus::Ok;

  // Construction hypotheses, tested rather than assumed: c recurrent (so c
  // lies in its orbit closure under the exclude-c reading) and x0 on the
  // sampled orbit closure.
  dynamics::RecurrenceResult rec = dynamics::recurrence_probe(f, c, cfg.sample_steps);
  dynamics::OrbitSample sample =
      dynamics::orbit_closure_sample(f, c, cfg.sample_steps, cfg.include_start_in_sample);
  auto dist_to_sample = [&sample](Complex z) {
    double d = 1e300;
    for (const auto& p : sample.points) d = std::min(d, std::abs(z - p));
    return d;
  };

  if (rec.escaped || rec.min_distance > cfg.recurrence_eps) {
    out.status = IrregularStatus::NoPcMembership;
    out.detail = rec.escaped ? "critical orbit escaped"
                             : "critical point not recurrent at tested depth (min return distance " +
                                   std::to_string(rec.min_distance) + ")";
    return out;
  }
  if (dist_to_sample(x0) > cfg.epsilon) {
    out.status = IrregularStatus::NoPcMembership;
    out.detail = "x0 is not within epsilon of the sampled orbit closure";
    return out;
  }

  std::vector<Complex> orbit{x0};
  double radius = cfg.seed_radius;
  int nodes = 0;
  int last_engulf = 0;  // engulfing depths must increase strictly

  auto engulfs = [&c](const SampledLoop& loop) {
    try {
      return winding_contains(loop, c).inside;
    } catch (const Error&) {
      return false;  // c on the sampled curve: counted as not engulfed
    }
  };

  // Stage: pull the current seed disk back along the orbit, extending the
  // orbit greedily through preimages near the sample, until some level past
  // the previous engulfing depth contains c; then shrink the disk.
  while (static_cast<int>(orbit.size()) <= depth && out.status == IrregularStatus::Ok) {
    std::vector<SampledLoop> loops{circle_loop(x0, radius, cfg.trace.circle_samples)};
    bool failed = false;
    for (size_t i = 1; i < orbit.size() && !failed; ++i) {
      try {
        loops.push_back(pullback_loop(f, loops.back(), orbit[i], cfg.trace));
      } catch (const Error& e) {
        out.status = IrregularStatus::SearchExhausted;
        out.detail = std::string("stage replay failed: ") + e.what();
        failed = true;
      }
    }
    if (failed) break;

    int engulf_level = 0;
    for (size_t i = static_cast<size_t>(last_engulf); i < loops.size() && engulf_level == 0; ++i)
      if (engulfs(loops[i])) engulf_level = static_cast<int>(i + 1);

    while (engulf_level == 0 && static_cast<int>(orbit.size()) < depth) {
      if (++nodes > cfg.node_budget) {
        out.status = IrregularStatus::SearchExhausted;
        out.detail = "node budget exhausted";
        break;
      }
      std::vector<Complex> candidates = preimage_set(f, orbit.back());
      // Multiple-preimage roots carry sqrt-of-residual noise that compounds
      // through the levels; snap a candidate onto the sample point it
      // approximates whenever that point is an exact preimage.
      for (auto& y : candidates) {
        Complex best = y;
        double bd = 1e300;
        for (const auto& p : sample.points) {
          double d = std::abs(y - p);
          if (d < bd) {
            bd = d;
            best = p;
          }
        }
        if (bd <= 1e-5 && std::abs(f(best) - orbit.back()) <= 1e-9 * std::max(1.0, std::abs(orbit.back())))
          y = best;
      }
      std::sort(candidates.begin(), candidates.end(),
                [&](Complex a, Complex b) { return dist_to_sample(a) < dist_to_sample(b); });
      bool advanced = false;
      std::vector<Complex> tried;
      for (const auto& y : candidates) {
        if (dist_to_sample(y) > cfg.epsilon) continue;
        bool dup = false;
        for (const auto& t : tried)
          if (std::abs(y - t) < 1e-10) dup = true;
        if (dup) continue;
        tried.push_back(y);
        try {
          SampledLoop next = pullback_loop(f, loops.back(), y, cfg.trace);
          orbit.push_back(y);
          loops.push_back(std::move(next));
          advanced = true;
          break;
        } catch (const Error&) {
          continue;
        }
      }
      if (!advanced) {
        out.status = IrregularStatus::SearchExhausted;
        out.detail = "no admissible preimage within epsilon at level " + std::to_string(orbit.size() + 1);
        break;
      }
      if (engulfs(loops.back())) engulf_level = static_cast<int>(orbit.size());
    }

    if (engulf_level > 0) {
      out.engulf_depths.push_back(engulf_level);
      out.stage_radii.push_back(radius);
      last_engulf = engulf_level;
      radius *= cfg.shrink_factor;
    }
    if (static_cast<int>(orbit.size()) >= depth) break;
    if (engulf_level == 0 && out.status == IrregularStatus::Ok) break;  // depth reached without engulfment
  }

  out.orbit = BackwardOrbit::from_points(f, orbit, BackwardOrbit::Generator::Greedy);
  if (out.status == IrregularStatus::SearchExhausted && !out.engulf_depths.empty()) {
    out.status = IrregularStatus::Ok;  // partial: an orbit with engulfing depths exists
    out.detail += " (returned partial orbit)";
  }
  return out;
}

}  // namespace plaque::pullback
