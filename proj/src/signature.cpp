#include "plaque/signature.hpp"

#include <algorithm>
#include <cmath>

#include "plaque/error.hpp"

namespace plaque::engine {

using seqlat::EventuallyPeriodicSequence;
using seqlat::Signature;
using seqlat::TailClass;

std::string to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "Regular";
    case Regularity::Irregular: return "Irregular";
    case Regularity::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::Satisfied: return "satisfied";
    case ProbeStatus::Unsatisfied: return "unsatisfied";
    case ProbeStatus::Exhausted: return "exhausted";
  }
  return "?";
}

namespace {

// Eventually periodic pattern in a bit word: minimal period p <= depth/4 with
// minimal preperiod s <= depth/2, confirmed over at least two full periods.
struct InferredClass {
  std::optional<TailClass> cls;
  int preperiod = 0;
  int period = 0;
};

InferredClass infer_class(const std::string& bits, int depth) {
  InferredClass out;
  const int len = static_cast<int>(bits.size());
  for (int p = 1; p <= depth / 4; ++p) {
    for (int s = 0; s <= depth / 2; ++s) {
      if (s + 2 * p > len) break;
      bool periodic = true;
      for (int i = s; i + p < len && periodic; ++i)
        if (bits[static_cast<size_t>(i)] != bits[static_cast<size_t>(i + p)]) periodic = false;
      if (!periodic) continue;
      EventuallyPeriodicSequence seq{bits.substr(0, static_cast<size_t>(s)),
                                     bits.substr(static_cast<size_t>(s), static_cast<size_t>(p))};
      out.cls = seqlat::canonicalize(seq);
      out.preperiod = s;
      out.period = p;
      return out;
    }
  }
  return out;
}

// matrix[radius_index][critical_index]; each radius costs one chain.
std::vector<std::vector<IndexClassResult>> index_matrix(const Polynomial& f, const BackwardOrbit& orbit,
                                                        const std::vector<double>& radii, int depth,
                                                        const TraceConfig& cfg) {
  if (depth < 16) throw Error("BadArgument", "index classification needs depth >= 16");
  std::vector<std::vector<IndexClassResult>> matrix;
  for (double r : radii) {
    PullbackChain chain = pullback::pullback_chain(f, orbit, r, depth, cfg);
    std::vector<IndexClassResult> row;
    for (size_t k = 0; k < chain.criticals.size(); ++k) {
      IndexClassResult idx;
      idx.radius = r;
      idx.depth = depth;
      idx.bits = pullback::index_bits(chain, static_cast<int>(k)).bits;
      if (chain.error) {
        idx.chain_error = chain.error;
      } else {
        InferredClass inf = infer_class(idx.bits, depth);
        idx.cls = inf.cls;
        idx.preperiod = inf.preperiod;
        idx.period = inf.period;
      }
      row.push_back(std::move(idx));
    }
    matrix.push_back(std::move(row));
  }
  return matrix;
}

SignatureEstimate estimate_from_column(const std::vector<std::vector<IndexClassResult>>& matrix,
                                       int critical_index, const std::vector<double>& radii, int depth) {
  SignatureEstimate out;
  std::vector<TailClass> classes;
  bool all_resolved = true;
  for (size_t i = 0; i < matrix.size(); ++i) {
    const IndexClassResult& idx = matrix[i][static_cast<size_t>(critical_index)];
    if (idx.cls)
      classes.push_back(*idx.cls);
    else
      all_resolved = false;
    out.per_radius.push_back({radii[i], idx});
  }
  if (!all_resolved) {
    out.detail = "some radii left inconclusive at depth " + std::to_string(depth);
    return out;
  }
  seqlat::MeetChainResult meet = seqlat::meet_chain_reduce(classes, static_cast<int>(classes.size()));
  out.stabilization_depth = meet.index;
  if (meet.stabilized && classes.size() >= 2) {
    out.stable = true;
    out.value = Signature::principal(meet.value);
    out.detail = "meet stabilized at radius index " + std::to_string(meet.index) + " (depth " +
                 std::to_string(depth) + ")";
  } else {
    out.detail = "meet chain still decreasing across the radius schedule";
  }
  return out;
}

RegularityResult regularity_from(const std::vector<std::vector<IndexClassResult>>& matrix, int depth,
                                 const std::vector<double>& radii) {
  RegularityResult out{Regularity::Inconclusive, depth, radii, ""};
  bool any_regular_radius = false;
  bool all_irregular_radius = true;
  for (const auto& row : matrix) {
    bool all_zero = true, some_nonzero = false;
    for (const auto& idx : row) {
      if (!idx.cls) {
        all_zero = false;
        continue;
      }
      if (!idx.cls->is_zero()) {
        all_zero = false;
        some_nonzero = true;
      }
    }
    if (all_zero) any_regular_radius = true;
    if (!some_nonzero) all_irregular_radius = false;
  }
  if (any_regular_radius) {
    out.verdict = Regularity::Regular;
    out.detail = "an all-zero tail was reached for some tested radius";
  } else if (all_irregular_radius) {
    out.verdict = Regularity::Irregular;
    out.detail = "every tested radius shows recurring containment of a critical point";
  } else {
    out.detail = "verdict not determined at depth " + std::to_string(depth);
  }
  return out;
}

}  // namespace

IndexClassResult index_class(const Polynomial& f, const BackwardOrbit& orbit, int critical_index,
                             double radius, int depth, const TraceConfig& cfg) {
  auto matrix = index_matrix(f, orbit, {radius}, depth, cfg);
  if (critical_index < 0 || critical_index >= static_cast<int>(matrix[0].size()))
    throw Error("BadArgument", "critical point index out of range");
  return matrix[0][static_cast<size_t>(critical_index)];
}

SignatureEstimate estimate_signature(const Polynomial& f, const BackwardOrbit& orbit, int critical_index,
                                     const std::vector<double>& radii, int depth, const TraceConfig& cfg) {
  if (radii.size() < 3) throw Error("BadArgument", "estimate needs at least 3 radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1])) throw Error("BadArgument", "radius schedule must be strictly decreasing");
  auto matrix = index_matrix(f, orbit, radii, depth, cfg);
  if (critical_index < 0 || critical_index >= static_cast<int>(matrix[0].size()))
    throw Error("BadArgument", "critical point index out of range");
  return estimate_from_column(matrix, critical_index, radii, depth);
}

RegularityResult regularity_verdict(const Polynomial& f, const BackwardOrbit& orbit, int depth,
                                    const std::vector<double>& radii, const TraceConfig& cfg) {
  auto matrix = index_matrix(f, orbit, radii, depth, cfg);
  return regularity_from(matrix, depth, radii);
}

Prediction predict_signature(const Polynomial& f, const Cycle& cycle, Complex critical, int basin_steps,
                             double basin_tol) {
  switch (cycle.label.kind) {
    case dynamics::CycleKind::Repelling:
      return {true, 0, "repelling cycle: regular lift"};
    case dynamics::CycleKind::NeutralIrrational:
      return {true, 0, "Siegel-case prediction (linearizable assumed; Siegel/Cremer not distinguished)"};
    default:
      break;
  }
  // Attracting, super-attracting or parabolic: the critical point
  // participates when its forward orbit reaches the cycle.
  Complex z = critical;
  bool participates = false;
  for (int i = 0; i < basin_steps && !participates; ++i) {
    z = f(z);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) break;
    for (const auto& x : cycle.points)
      if (std::abs(z - x) <= basin_tol) {
        participates = true;
        break;
      }
  }
  if (!participates)
    return {true, 0, "critical point does not reach the cycle basin (tested forward orbit)"};
  return {false, cycle.period, "shift_k(alpha[sq(n)]), k empirical with 0 <= k < n"};
}

namespace {

std::optional<int> match_shift(const SignatureEstimate& est, int n) {
  if (!est.stable || !est.value) return std::nullopt;
  Signature base = Signature::principal(seqlat::sq_class(n));
  for (int k = 0; k < n; ++k)
    if (*est.value == seqlat::sig_shift(base, k)) return k;
  return std::nullopt;
}

}  // namespace

VerifyReport verify_cycle_theorem(const Polynomial& f, int n_max, const VerifyConfig& cfg) {
  VerifyReport report;
  report.all_match = true;
  report.unresolved = 0;
  std::vector<Complex> criticals = dynamics::critical_points(f);
  std::vector<Complex> crit_values;
  for (const auto& c : criticals) crit_values.push_back(f(c));

  for (int n = 1; n <= n_max; ++n) {
    std::vector<Cycle> cycles = dynamics::periodic_cycles(f, n, cfg.tol);
    for (size_t ci = 0; ci < cycles.size(); ++ci) {
      const Cycle& cycle = cycles[ci];
      int depth = cycle.label.kind == dynamics::CycleKind::Parabolic ? cfg.depth_parabolic : cfg.depth;
      double r0 = cfg.r0;
      if (cycle.label.kind == dynamics::CycleKind::Parabolic) {
        r0 = cfg.r0_parabolic;
      } else if (cycle.label.kind == dynamics::CycleKind::Repelling ||
                 cycle.label.kind == dynamics::CycleKind::NeutralIrrational) {
        // keep regular rows clear of critical values and critical points
        double dmin = 1e300;
        for (const auto& v : crit_values) dmin = std::min(dmin, std::abs(cycle.points[0] - v));
        for (const auto& c : criticals) dmin = std::min(dmin, std::abs(cycle.points[0] - c));
        r0 = std::min(r0, cfg.clearance_factor * dmin);
      }
      std::vector<double> radii;
      for (int j = 0; j < cfg.schedule_len; ++j) radii.push_back(r0 * std::pow(2.0, -j));

      BackwardOrbit orbit = BackwardOrbit::invariant_lift(cycle, 1, depth);
      auto matrix = index_matrix(f, orbit, radii, depth, cfg.trace);
      RegularityResult regularity = regularity_from(matrix, depth, radii);

      for (size_t k = 0; k < criticals.size(); ++k) {
        VerifyRow row;
        row.period = n;
        row.cycle_index = static_cast<int>(ci);
        row.cycle = cycle;
        row.critical_index = static_cast<int>(k);
        row.critical = criticals[k];
        row.radii = radii;
        row.depth = depth;
        row.prediction = predict_signature(f, cycle, criticals[k]);
        row.estimate = estimate_from_column(matrix, static_cast<int>(k), radii, depth);
        row.regularity = regularity;
        row.resolved = row.estimate.stable;
        if (!row.resolved) {
          ++report.unresolved;
          row.match = false;
        } else if (row.prediction.bottom) {
          row.match = row.estimate.value->is_bottom();
        } else {
          row.observed_shift = match_shift(row.estimate, row.prediction.n);
          row.match = row.observed_shift.has_value();
        }
        if (row.resolved && !row.match) report.all_match = false;
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

BranchingCount branching_count(const PullbackChain& chain) {
  int b = 0;
  for (const auto& level : chain.levels)
    if (std::any_of(level.contains_critical.begin(), level.contains_critical.end(),
                    [](uint8_t v) { return v != 0; }))
      ++b;
  unsigned long long bound = b >= 63 ? ~0ull : (1ull << b);
  return {b, bound};
}

namespace {

struct ProbeSearch {
  const Polynomial& f;
  Complex c;
  const std::vector<Complex>& sample;
  double epsilon;
  int depth;
  int budget;
  const TraceConfig& trace;
  int nodes = 0;
  int engulf_depth = 0;

  double dist_to_sample(Complex z) const {
    double d = 1e300;
    for (const auto& p : sample) d = std::min(d, std::abs(z - p));
    return d;
  }

  bool engulfs(const pullback::SampledLoop& loop) const {
    try {
      return pullback::winding_contains(loop, c).inside;
    } catch (const Error&) {
      return false;
    }
  }

  // DFS over admissible preimages; true = chain found whose pulled-back
  // component contains c after at least one pullback.
  bool dfs(const pullback::SampledLoop& loop, Complex point, int level) {
    if (level > 1 && engulfs(loop)) {
      engulf_depth = level;
      return true;
    }
    if (level >= depth) return false;
    if (nodes >= budget) return false;
    std::vector<Complex> candidates = pullback::preimage_set(f, point);
    // snap double-preimage noise onto exact sample preimages
    for (auto& y : candidates) {
      Complex best = y;
      double bd = 1e300;
      for (const auto& p : sample) {
        double d = std::abs(y - p);
        if (d < bd) {
          bd = d;
          best = p;
        }
      }
      if (bd <= 1e-5 && std::abs(f(best) - point) <= 1e-9 * std::max(1.0, std::abs(point))) y = best;
    }
    std::sort(candidates.begin(), candidates.end(),
              [this](Complex a, Complex b) { return dist_to_sample(a) < dist_to_sample(b); });
    std::vector<Complex> tried;
    for (const auto& y : candidates) {
      if (dist_to_sample(y) > epsilon) continue;
      bool dup = false;
      for (const auto& t : tried)
        if (std::abs(y - t) < 1e-10) dup = true;
      if (dup) continue;
      tried.push_back(y);
      ++nodes;
      try {
        pullback::SampledLoop next = pullback::pullback_loop(f, loop, y, trace);
        if (dfs(next, y, level + 1)) return true;
      } catch (const Error&) {
        continue;
      }
    }
    return false;
  }
};

}  // namespace

ProbeReport inverse_critical_probe(const Polynomial& f, Complex c, const std::vector<Complex>& sample,
                                   const std::vector<double>& radii, int depth, double epsilon,
                                   int node_budget, const TraceConfig& cfg, int probe_limit) {
  if (sample.empty()) throw Error("BadArgument", "probe needs a nonempty sample");
  ProbeReport report;
  int satisfied = 0;
  size_t n_probe = probe_limit > 0 ? std::min(sample.size(), static_cast<size_t>(probe_limit)) : sample.size();
  for (size_t xi = 0; xi < n_probe; ++xi) {
    const Complex& x = sample[xi];
    for (double r : radii) {
      ProbeSearch search{f, c, sample, epsilon, depth, node_budget, cfg};
      pullback::SampledLoop seed = pullback::circle_loop(x, r, cfg.circle_samples);
      bool found = search.dfs(seed, x, 1);
      ProbeEntry entry;
      entry.x = x;
      entry.radius = r;
      entry.nodes_used = search.nodes;
      if (found) {
        entry.status = ProbeStatus::Satisfied;
        entry.engulf_depth = search.engulf_depth;
        ++satisfied;
      } else {
        entry.status = search.nodes >= node_budget ? ProbeStatus::Exhausted : ProbeStatus::Unsatisfied;
      }
      report.entries.push_back(entry);
    }
  }
  report.satisfied_fraction =
      report.entries.empty() ? 0.0 : static_cast<double>(satisfied) / static_cast<double>(report.entries.size());
  return report;
}

}  // namespace plaque::engine
