#include "plaque/cli.hpp"

#include <algorithm>
#include <cmath>
#include <chrono>
#include <cstdlib>
#include <sstream>

#include <CLI11.hpp>

#include "plaque/error.hpp"
#include "plaque/kernels.hpp"
#include "plaque/lattice_expr.hpp"
#include "plaque/report.hpp"

namespace plaque::cli {

namespace {

using dynamics::Complex;
using dynamics::Polynomial;
using nlohmann::json;
using pullback::BackwardOrbit;

constexpr const char* kSchema = "plaque/1";

struct Options {
  std::string map;
  std::string expr;
  int depth = 32;
  double radius = 0.25;
  std::string radii;  // comma list; empty = derived from radius by halving
  int period_max = 2;
  std::string cycle = "period:1:0";
  std::string critical = "0";
  std::string x0;
  double tol_root = 1e-9;
  double tol_band = 1e-9;
  int p_max = 64;
  int budget = 10000;
  int steps = 10000;
  double epsilon = 0.05;
  std::string kind = "recurrence";
  std::string seed_center;
  double seed_disk_radius = 0.0;
  int depth_parabolic = 64;
  double r0 = 0.4;
  double r0_parabolic = 1.2;
  std::string format = "json";
  uint64_t seed = 0;
};

dynamics::Tolerances make_tolerances(const Options& opt) {
  dynamics::Tolerances tol;
  tol.root_residual = opt.tol_root;
  tol.band = opt.tol_band;
  tol.p_max = opt.p_max;
  tol.seed = opt.seed;
  return tol;
}

std::vector<double> parse_radii(const Options& opt, int count = 6) {
  std::vector<double> out;
  if (!opt.radii.empty()) {
    std::stringstream ss(opt.radii);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  } else {
    for (int j = 0; j < count; ++j) out.push_back(opt.radius * std::pow(2.0, -j));
  }
  return out;
}

struct CycleChoice {
  dynamics::Cycle cycle;
  int base = 1;
  int period = 1;
  int index = 0;
};

CycleChoice resolve_cycle(const Polynomial& f, const Options& opt) {
  CycleChoice choice;
  int base = 1;
  std::optional<Complex> fixed_near;
  int period = 1, index = 0;

  std::stringstream ss(opt.cycle);
  std::string token;
  while (std::getline(ss, token, ';')) {
    if (token.rfind("fixed:", 0) == 0) {
      fixed_near = dynamics::parse_complex(token.substr(6));
    } else if (token.rfind("period:", 0) == 0) {
      std::string rest = token.substr(7);
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw Error("Usage", "--cycle period:<n>:<index>");
      period = std::stoi(rest.substr(0, colon));
      index = std::stoi(rest.substr(colon + 1));
    } else if (token.rfind("base:", 0) == 0) {
      base = std::stoi(token.substr(5));
    } else if (!token.empty()) {
      throw Error("Usage", "unknown --cycle selector \"" + token + "\"");
    }
  }

  dynamics::Tolerances tol = make_tolerances(opt);
  if (fixed_near) {
    std::vector<dynamics::Cycle> cycles = dynamics::periodic_cycles(f, 1, tol);
    size_t best = 0;
    double bd = 1e300;
    for (size_t i = 0; i < cycles.size(); ++i) {
      double d = std::abs(cycles[i].points[0] - *fixed_near);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    choice.cycle = cycles[best];
    choice.period = 1;
    choice.index = static_cast<int>(best);
  } else {
    std::vector<dynamics::Cycle> cycles = dynamics::periodic_cycles(f, period, tol);
    if (index < 0 || index >= static_cast<int>(cycles.size()))
      throw Error("Usage", "cycle index out of range for period " + std::to_string(period));
    choice.cycle = cycles[static_cast<size_t>(index)];
    choice.period = period;
    choice.index = index;
  }
  choice.base = base;
  return choice;
}

int resolve_critical(const Polynomial& f, const std::string& spec, std::vector<Complex>& criticals) {
  criticals = dynamics::critical_points(f);
  bool plain_index = !spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos;
  if (plain_index) {
    int idx = std::stoi(spec);
    if (idx < 0 || idx >= static_cast<int>(criticals.size()))
      throw Error("Usage", "critical index out of range");
    return idx;
  }
  Complex z = dynamics::parse_complex(spec);
  size_t best = 0;
  double bd = 1e300;
  for (size_t i = 0; i < criticals.size(); ++i) {
    double d = std::abs(criticals[i] - z);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  if (bd > 1e-6) throw Error("Usage", "no critical point near the given value");
  return static_cast<int>(best);
}

json config_echo(const Options& opt, const std::string& command) {
  json cfg{{"map", opt.map},
           {"depth", opt.depth},
           {"radius", opt.radius},
           {"radii", opt.radii},
           {"period_max", opt.period_max},
           {"cycle", opt.cycle},
           {"critical", opt.critical},
           {"tol_root", opt.tol_root},
           {"tol_band", opt.tol_band},
           {"p_max", opt.p_max},
           {"budget", opt.budget},
           {"steps", opt.steps},
           {"epsilon", opt.epsilon},
           {"format", opt.format},
           {"seed", opt.seed},
           {"kernel", kernels::backend_name()}};
  if (command == "verify") {
    cfg["depth_parabolic"] = opt.depth_parabolic;
    cfg["r0"] = opt.r0;
    cfg["r0_parabolic"] = opt.r0_parabolic;
  }
  if (command == "irregular" || command == "probe") cfg["x0"] = opt.x0;
  if (command == "regular") {
    cfg["seed_center"] = opt.seed_center;
    cfg["seed_disk_radius"] = opt.seed_disk_radius;
  }
  if (command == "probe") cfg["kind"] = opt.kind;
  return cfg;
}

std::string wrap_document(const std::string& command, const Options& opt, json payload) {
  json doc{{"schema", kSchema}, {"command", command}, {"config", config_echo(opt, command)}};
  doc.update(payload);
  return doc.dump(2) + "\n";
}

json run_lattice(const Options& opt) {
  seqlat::ExprValue v = seqlat::eval_lattice_expr(opt.expr);
  json payload;
  if (std::holds_alternative<seqlat::TailClass>(v))
    payload["result"] = std::get<seqlat::TailClass>(v).to_string();
  else
    payload["result"] = std::get<bool>(v);
  return payload;
}

json run_critpts(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  json pts = json::array();
  for (const auto& z : dynamics::critical_points(f)) pts.push_back(report::complex_json(z));
  return json{{"critical_points", pts}, {"degree", f.degree()}};
}

json run_cycles(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  dynamics::Tolerances tol = make_tolerances(opt);
  json cycles = json::array();
  for (int n = 1; n <= opt.period_max; ++n)
    for (const auto& c : dynamics::periodic_cycles(f, n, tol)) cycles.push_back(report::cycle_json(c));
  return json{{"cycles", cycles}};
}

json run_classify(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  CycleChoice choice = resolve_cycle(f, opt);
  json out = report::cycle_json(choice.cycle);
  out["tolerances"] = json{{"band", opt.tol_band}, {"root_unity", 1e-6}, {"p_max", opt.p_max}};
  return json{{"cycle", out}};
}

pullback::TraceConfig make_trace(const Options& opt) {
  pullback::TraceConfig trace;
  (void)opt;
  return trace;
}

json run_pullback(const Options& opt, std::string* csv_out) {
  Polynomial f = Polynomial::parse_map(opt.map);
  CycleChoice choice = resolve_cycle(f, opt);
  BackwardOrbit orbit = BackwardOrbit::invariant_lift(choice.cycle, choice.base, opt.depth);
  pullback::PullbackChain chain = pullback::pullback_chain(f, orbit, opt.radius, opt.depth, make_trace(opt));
  if (opt.format == "csv" && csv_out) {
    *csv_out = report::chain_csv(chain);
    return json{};
  }
  return json{{"chain", report::chain_json(chain)}};
}

json run_index(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  CycleChoice choice = resolve_cycle(f, opt);
  std::vector<Complex> criticals;
  int crit = resolve_critical(f, opt.critical, criticals);
  BackwardOrbit orbit = BackwardOrbit::invariant_lift(choice.cycle, choice.base, opt.depth);
  pullback::PullbackChain chain = pullback::pullback_chain(f, orbit, opt.radius, opt.depth, make_trace(opt));
  pullback::IndexBits bits = pullback::index_bits(chain, crit);
  json out{{"bits", bits.bits},
           {"radius", bits.radius},
           {"depth", bits.depth},
           {"critical", report::complex_json(criticals[static_cast<size_t>(crit)])},
           {"orbit_generator", pullback::to_string(orbit.generator)},
           {"cycle_period", orbit.cycle_period},
           {"base_index", orbit.base_index}};
  if (chain.error)
    out["chain_error"] = json{{"level", chain.error->level}, {"kind", chain.error->kind}};
  return out;
}

json run_signature(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  CycleChoice choice = resolve_cycle(f, opt);
  std::vector<Complex> criticals;
  int crit = resolve_critical(f, opt.critical, criticals);
  std::vector<double> radii = parse_radii(opt);
  BackwardOrbit orbit = BackwardOrbit::invariant_lift(choice.cycle, choice.base, opt.depth);
  engine::SignatureEstimate est = engine::estimate_signature(f, orbit, crit, radii, opt.depth, make_trace(opt));
  return json{{"estimate", report::estimate_json(est)},
              {"critical", report::complex_json(criticals[static_cast<size_t>(crit)])},
              {"radii", radii},
              {"orbit_generator", pullback::to_string(orbit.generator)},
              {"cycle_period", orbit.cycle_period},
              {"base_index", orbit.base_index}};
}

json run_verify(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  engine::VerifyConfig cfg;
  cfg.depth = opt.depth;
  cfg.depth_parabolic = opt.depth_parabolic;
  cfg.r0 = opt.r0;
  cfg.r0_parabolic = opt.r0_parabolic;
  cfg.tol = make_tolerances(opt);
  engine::VerifyReport rep = engine::verify_cycle_theorem(f, opt.period_max, cfg);
  return json{{"verify", report::verify_json(rep)}};
}

json run_regular(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  pullback::RegularPlaqueConfig cfg;
  cfg.node_budget = opt.budget;
  if (!opt.seed_center.empty()) cfg.seed_center = dynamics::parse_complex(opt.seed_center);
  if (opt.seed_disk_radius > 0.0) cfg.seed_radius = opt.seed_disk_radius;
  pullback::RegularPlaqueResult res = pullback::construct_regular_plaque(f, opt.depth, cfg);
  json seeds = json::array();
  for (const auto& s : res.seed_candidates) seeds.push_back(report::complex_json(s));
  return json{{"chain", report::chain_json(res.chain)}, {"seed_candidates", seeds}};
}

json run_irregular(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  std::vector<Complex> criticals;
  int crit = resolve_critical(f, opt.critical, criticals);
  Complex c = criticals[static_cast<size_t>(crit)];
  Complex x0 = opt.x0.empty() ? c : dynamics::parse_complex(opt.x0);
  pullback::IrregularOrbitConfig cfg;
  cfg.epsilon = opt.epsilon;
  cfg.node_budget = opt.budget;
  cfg.sample_steps = opt.steps;
  cfg.seed_radius = opt.radius;
  pullback::IrregularOrbitResult res = pullback::construct_irregular_orbit(f, c, x0, opt.depth, cfg);

  // "c in P(c)" under both readings of the critical orbit: including c makes
  // membership trivial; excluding it reduces to recurrence at tested depth.
  dynamics::RecurrenceResult rec = dynamics::recurrence_probe(f, c, cfg.sample_steps);
  json membership{{"include_c_reading", true},
                  {"exclude_c_reading", !rec.escaped && rec.min_distance <= cfg.recurrence_eps},
                  {"min_return_distance", rec.min_distance},
                  {"recurrence_eps", cfg.recurrence_eps},
                  {"probe_steps", rec.steps_used}};

  json out{{"status", res.status == pullback::IrregularStatus::Ok            ? "ok"
                      : res.status == pullback::IrregularStatus::NoPcMembership ? "NoPcMembership"
                                                                                : "SearchExhausted"},
           {"engulf_depths", res.engulf_depths},
           {"stage_radii", res.stage_radii},
           {"pc_membership", membership},
           {"detail", res.detail}};
  if (!res.orbit.points.empty()) out["orbit"] = report::orbit_json(res.orbit);
  return out;
}

json run_probe(const Options& opt) {
  Polynomial f = Polynomial::parse_map(opt.map);
  std::vector<Complex> criticals;
  int crit = resolve_critical(f, opt.critical, criticals);
  Complex c = criticals[static_cast<size_t>(crit)];
  if (opt.kind == "recurrence") {
    dynamics::RecurrenceResult rec = dynamics::recurrence_probe(f, c, opt.steps);
    return json{{"recurrence",
                 json{{"min_distance", rec.min_distance},
                      {"step", rec.step},
                      {"steps_used", rec.steps_used},
                      {"escaped", rec.escaped}}}};
  }
  if (opt.kind == "inverse") {
    dynamics::OrbitSample sample = dynamics::orbit_closure_sample(f, c, opt.steps);
    std::vector<double> radii = parse_radii(opt, 1);
    // admissibility uses the full sample; only the first few points are probed
    engine::ProbeReport rep =
        engine::inverse_critical_probe(f, c, sample.points, radii, opt.depth, opt.epsilon, opt.budget, {}, 4);
    json out{{"probe", report::probe_json(rep)}, {"sample_size", sample.points.size()},
             {"sample_escaped", sample.escaped}, {"probe_limit", 4}};
    return out;
  }
  throw Error("Usage", "--kind must be recurrence or inverse");
}

}  // namespace

RunResult dispatch(const std::vector<std::string>& args) {
  Options opt;
  CLI::App app{"plaque: signature calculus and pullback engine for polynomial inverse limits"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool needs_map) {
    if (needs_map)
      sub->add_option("--map", opt.map, "polynomial: coefficients \"a0,a1,...\" or quad:c=<z> or siegel:golden")
          ->required();
    sub->add_option("--depth", opt.depth);
    sub->add_option("--radius", opt.radius);
    sub->add_option("--radii", opt.radii);
    sub->add_option("--period-max", opt.period_max);
    sub->add_option("--cycle", opt.cycle);
    sub->add_option("--critical", opt.critical);
    sub->add_option("--tol-root", opt.tol_root);
    sub->add_option("--tol-band", opt.tol_band);
    sub->add_option("--p-max", opt.p_max);
    sub->add_option("--budget", opt.budget);
    sub->add_option("--steps", opt.steps);
    sub->add_option("--epsilon", opt.epsilon);
    sub->add_option("--format", opt.format);
    sub->add_option("--seed", opt.seed);
  };

  CLI::App* lattice = app.add_subcommand("lattice", "evaluate a tail-class expression");
  lattice->add_option("expr", opt.expr, "expression over sq(n), literals, ! & | <= shift(m,...)")->required();
  add_common(lattice, false);

  for (const char* name : {"critpts", "cycles", "classify", "pullback", "index", "signature", "verify"})
    add_common(app.add_subcommand(name), true);

  CLI::App* regular = app.add_subcommand("regular");
  add_common(regular, true);
  regular->add_option("--seed-center", opt.seed_center);
  regular->add_option("--seed-disk-radius", opt.seed_disk_radius);

  CLI::App* irregular = app.add_subcommand("irregular");
  add_common(irregular, true);
  irregular->add_option("--x0", opt.x0);

  CLI::App* probe = app.add_subcommand("probe");
  add_common(probe, true);
  probe->add_option("--kind", opt.kind, "recurrence | inverse");

  CLI::App* verify_sub = app.get_subcommand("verify");
  verify_sub->add_option("--depth-parabolic", opt.depth_parabolic);
  verify_sub->add_option("--r0", opt.r0);
  verify_sub->add_option("--r0-parabolic", opt.r0_parabolic);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return {0, app.help(), ""};
  } catch (const CLI::ParseError& e) {
    return {2, "", std::string(e.what()) + "\n" + app.help()};
  }

  std::string command = app.get_subcommands().front()->get_name();
  const char* log_env = std::getenv("PLAQUE_LOG");
  bool verbose = log_env && *log_env && std::string_view(log_env) != "0";
  auto started = std::chrono::steady_clock::now();
  try {
    json payload;
    std::string csv;
    if (command == "lattice") payload = run_lattice(opt);
    else if (command == "critpts") payload = run_critpts(opt);
    else if (command == "cycles") payload = run_cycles(opt);
    else if (command == "classify") payload = run_classify(opt);
    else if (command == "pullback") payload = run_pullback(opt, &csv);
    else if (command == "index") payload = run_index(opt);
    else if (command == "signature") payload = run_signature(opt);
    else if (command == "verify") payload = run_verify(opt);
    else if (command == "regular") payload = run_regular(opt);
    else if (command == "irregular") payload = run_irregular(opt);
    else if (command == "probe") payload = run_probe(opt);
    else return {2, "", "unknown subcommand\n"};

    std::string diag;
    if (verbose) {
      double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      diag = "plaque: " + command + " on \"" + opt.map + "\" finished in " + std::to_string(elapsed) +
             "s (kernel " + kernels::backend_name() + ")\n";
    }
    if (!csv.empty()) return {0, csv, diag};
    return {0, wrap_document(command, opt, payload), diag};
  } catch (const Error& e) {
    json doc{{"schema", kSchema}, {"command", command}, {"error", json{{"kind", e.kind()}, {"message", e.what()}}}};
    return {1, doc.dump(2) + "\n", std::string(e.what()) + "\n"};
  } catch (const std::exception& e) {
    json doc{{"schema", kSchema}, {"command", command}, {"error", json{{"kind", "Internal"}, {"message", e.what()}}}};
    return {1, doc.dump(2) + "\n", std::string(e.what()) + "\n"};
  }
}

}  // namespace plaque::cli
