#include "plaque/report.hpp"

#include <cstdio>

namespace plaque::report {

json complex_json(dynamics::Complex z) {
  // +0.0 normalization keeps documents free of signed-zero noise
  return json::array({z.real() + 0.0, z.imag() + 0.0});
}

json cycle_json(const dynamics::Cycle& c) {
  json points = json::array();
  for (const auto& z : c.points) points.push_back(complex_json(z));
  json out{{"points", points},
           {"period", c.period},
           {"multiplier", complex_json(c.multiplier)},
           {"multiplier_modulus", std::abs(c.multiplier)},
           {"label", c.label.to_string()},
           {"root_multiplicity", c.root_multiplicity}};
  if (c.separation_flagged) out["separation_flagged"] = true;
  return out;
}

json orbit_json(const pullback::BackwardOrbit& o) {
  json pts = json::array();
  for (const auto& z : o.points) pts.push_back(complex_json(z));
  json out{{"points", pts}, {"generator", pullback::to_string(o.generator)}};
  if (o.generator == pullback::BackwardOrbit::Generator::InvariantLift) {
    out["cycle_period"] = o.cycle_period;
    out["base_index"] = o.base_index;
  }
  return out;
}

json chain_json(const pullback::PullbackChain& chain) {
  json levels = json::array();
  for (size_t i = 0; i < chain.levels.size(); ++i) {
    const auto& level = chain.levels[i];
    json flags = json::array();
    for (uint8_t b : level.contains_critical) flags.push_back(b != 0);
    levels.push_back(json{{"level", i + 1},
                          {"samples", level.loop.samples.size()},
                          {"traversals", level.loop.traversals},
                          {"center", complex_json(level.loop.center)},
                          {"contains_critical", flags}});
  }
  json criticals = json::array();
  for (const auto& c : chain.criticals) criticals.push_back(complex_json(c));
  json out{{"levels", levels},
           {"depth", chain.depth()},
           {"requested_depth", chain.requested_depth},
           {"trapped_from", chain.trapped_from},
           {"seed_center", complex_json(chain.seed_center)},
           {"seed_radius", chain.seed_radius},
           {"critical_points", criticals},
           {"orbit", orbit_json(chain.orbit)}};
  if (chain.error)
    out["error"] = json{{"level", chain.error->level}, {"kind", chain.error->kind}, {"detail", chain.error->detail}};
  return out;
}

json estimate_json(const engine::SignatureEstimate& e) {
  json per_radius = json::array();
  for (const auto& pr : e.per_radius) {
    json entry{{"radius", pr.radius}, {"bits", pr.index.bits}};
    if (pr.index.cls) {
      entry["class"] = pr.index.cls->to_string();
      entry["preperiod"] = pr.index.preperiod;
      entry["period"] = pr.index.period;
    } else {
      entry["class"] = nullptr;
    }
    if (pr.index.chain_error)
      entry["chain_error"] = json{{"level", pr.index.chain_error->level}, {"kind", pr.index.chain_error->kind}};
    per_radius.push_back(entry);
  }
  json out{{"per_radius", per_radius},
           {"stable", e.stable},
           {"stabilization_depth", e.stabilization_depth},
           {"detail", e.detail}};
  out["value"] = e.value ? json(e.value->to_string()) : json(nullptr);
  return out;
}

json regularity_json(const engine::RegularityResult& r) {
  return json{{"verdict", engine::to_string(r.verdict)},
              {"depth", r.depth},
              {"radii", r.radii},
              {"detail", r.detail}};
}

json verify_json(const engine::VerifyReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json jr{{"period", row.period},
            {"cycle_index", row.cycle_index},
            {"cycle", cycle_json(row.cycle)},
            {"critical_index", row.critical_index},
            {"critical", complex_json(row.critical)},
            {"radii", row.radii},
            {"depth", row.depth},
            {"prediction",
             json{{"bottom", row.prediction.bottom}, {"n", row.prediction.n}, {"note", row.prediction.note}}},
            {"estimate", estimate_json(row.estimate)},
            {"regularity", regularity_json(row.regularity)},
            {"match", row.match},
            {"resolved", row.resolved}};
    jr["observed_shift"] = row.observed_shift ? json(*row.observed_shift) : json(nullptr);
    rows.push_back(jr);
  }
  return json{{"rows", rows}, {"all_match", r.all_match}, {"unresolved", r.unresolved}};
}

json probe_json(const engine::ProbeReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    entries.push_back(json{{"x", complex_json(e.x)},
                           {"radius", e.radius},
                           {"status", engine::to_string(e.status)},
                           {"engulf_depth", e.engulf_depth},
                           {"nodes_used", e.nodes_used}});
  }
  return json{{"entries", entries}, {"satisfied_fraction", r.satisfied_fraction}};
}

std::string chain_csv(const pullback::PullbackChain& chain) {
  std::string out = "level,sample_index,re,im,traversals\n";
  char buf[96];
  for (size_t i = 0; i < chain.levels.size(); ++i) {
    const auto& loop = chain.levels[i].loop;
    for (size_t j = 0; j < loop.samples.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%d\n", i + 1, j, loop.samples[j].real(),
                    loop.samples[j].imag(), loop.traversals);
      out += buf;
    }
  }
  return out;
}

}  // namespace plaque::report
