#include "plaque/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plaque/error.hpp"

namespace plaque::dynamics {

namespace {

// Horner evaluation of p and p' in one pass.
std::pair<Complex, Complex> eval_with_derivative(const std::vector<Complex>& c, Complex z) {
  Complex p = c.back();
  Complex dp{0.0, 0.0};
  for (size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
  }
  return {p, dp};
}

}  // namespace

std::vector<Complex> aberth_roots(const std::vector<Complex>& coeffs, const RootConfig& cfg) {
  std::vector<Complex> c = coeffs;
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
  int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) throw Error("BadArgument", "aberth_roots needs degree >= 1");
  if (deg == 1) return {-c[0] / c[1]};

  // Cauchy bound for the root radius.
  double radius = 0.0;
  for (int i = 0; i < deg; ++i) radius = std::max(radius, std::abs(c[static_cast<size_t>(i)] / c.back()));
  radius = 1.0 + radius;

  // Initial guesses on a circle; the seed rotates the phase so reruns with the
  // same seed are identical.
  std::vector<Complex> z(static_cast<size_t>(deg));
  const double phase0 = 0.3899171 + 1e-3 * static_cast<double>(cfg.seed % 1024);
  for (int i = 0; i < deg; ++i) {
    double angle = 2.0 * std::numbers::pi * (static_cast<double>(i) / deg) + phase0;
    z[static_cast<size_t>(i)] = std::polar(0.85 * radius + 0.1 * (i % 3), angle);
  }

  // A point counts as settled when its residual is below the floating-point
  // noise floor of the evaluation; step size alone stalls on multiple roots.
  auto residual_bound = [&c](Complex zi) {
    double b = 0.0;
    double zp = 1.0;
    double az = std::abs(zi);
    for (const auto& ck : c) {
      b += std::abs(ck) * zp;
      zp *= az;
    }
    return b;
  };

  for (int iter = 0; iter < cfg.max_iter; ++iter) {
    double max_step = 0.0;
    int settled = 0;
    for (int i = 0; i < deg; ++i) {
      auto [p, dp] = eval_with_derivative(c, z[static_cast<size_t>(i)]);
      if (std::abs(p) <= 1e-14 * residual_bound(z[static_cast<size_t>(i)])) {
        ++settled;
        continue;
      }
      Complex ratio = dp == Complex{0.0, 0.0} ? Complex{0.0, 0.0} : p / dp;
      Complex sum{0.0, 0.0};
      for (int j = 0; j < deg; ++j)
        if (j != i) sum += 1.0 / (z[static_cast<size_t>(i)] - z[static_cast<size_t>(j)]);
      Complex denom = 1.0 - ratio * sum;
      Complex step = denom == Complex{0.0, 0.0} ? ratio : ratio / denom;
      z[static_cast<size_t>(i)] -= step;
      max_step = std::max(max_step, std::abs(step));
    }
    if (settled == deg || max_step < cfg.tol * std::max(1.0, radius)) break;
    if (iter == cfg.max_iter - 1) {
      for (int i = 0; i < deg; ++i) {
        auto [p, dp] = eval_with_derivative(c, z[static_cast<size_t>(i)]);
        (void)dp;
        if (std::abs(p) > 1e-7 * residual_bound(z[static_cast<size_t>(i)]))
          throw Error("RootsNotConverged", "simultaneous iteration did not settle");
      }
    }
  }
  return z;
}

Complex newton_preimage(const Polynomial& f, Complex w, Complex start, double tol, int max_iter) {
  const auto dcoeffs = f.derivative_coeffs();
  Complex z = start;
  double scale = std::max(1.0, std::abs(w));
  for (int i = 0; i < max_iter; ++i) {
    Complex r = f(z) - w;
    if (std::abs(r) <= tol * scale) return z;
    Complex d = eval_poly(dcoeffs, z);
    if (std::abs(d) < 1e-300) throw Error("RootsNotConverged", "vanishing derivative in Newton step");
    z -= r / d;
  }
  if (std::abs(f(z) - w) <= 10 * tol * scale) return z;
  throw Error("RootsNotConverged", "Newton preimage iteration did not converge");
}

Complex polish_periodic_root(const Polynomial& f, int n, Complex start, int multiplicity, double tol,
                             int max_iter) {
  int m = std::max(1, multiplicity);
  Complex z = start;
  for (int i = 0; i < max_iter; ++i) {
    Jet jet = iterate_jet(f, z, n, m + 1);
    // F(z) = f^n(z) - z; iterate on F^(m-1), which has a simple root there.
    Complex g = jet.derivative(m - 1);
    Complex dg = jet.derivative(m);
    if (m == 1) {
      g -= z;
      dg -= 1.0;
    } else if (m == 2) {
      g -= 1.0;  // identity contributes only to the first derivative
    }
    if (std::abs(dg) < 1e-300) break;
    Complex step = g / dg;
    z -= step;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

std::vector<PeriodicRoot> periodic_points(const Polynomial& f, int n, const RootConfig& cfg) {
  double dn = std::pow(static_cast<double>(f.degree()), n);
  if (dn > 128.0) throw Error("BadArgument", "period too large: d^n must stay <= 128");

  std::vector<Complex> coeffs = compose_power_coeffs(f, n);
  if (coeffs.size() >= 2)
    coeffs[1] -= 1.0;  // f^n(z) - z
  std::vector<Complex> raw = aberth_roots(coeffs, cfg);

  // First polish assuming simple roots; stalls near multiple roots are fixed
  // by cluster polishing below.
  for (auto& z : raw) z = polish_periodic_root(f, n, z, 1);

  std::sort(raw.begin(), raw.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  std::vector<PeriodicRoot> out;
  std::vector<bool> used(raw.size(), false);
  for (size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    std::vector<size_t> cluster{i};
    for (size_t j = i + 1; j < raw.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(raw[j] - raw[i]) < cfg.cluster_radius) cluster.push_back(j);
    }
    Complex center{0.0, 0.0};
    for (size_t k : cluster) {
      center += raw[k];
      used[k] = true;
    }
    center /= static_cast<double>(cluster.size());
    int mult = static_cast<int>(cluster.size());
    Complex z = mult > 1 ? polish_periodic_root(f, n, center, mult) : raw[i];
    out.push_back({z, mult});
  }
  std::sort(out.begin(), out.end(), [](const PeriodicRoot& a, const PeriodicRoot& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    return a.z.imag() < b.z.imag();
  });
  return out;
}

}  // namespace plaque::dynamics
