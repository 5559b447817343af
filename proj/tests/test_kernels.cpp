#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "plaque/kernels.hpp"

namespace k = plaque::kernels;
using C = std::complex<double>;

namespace {

std::vector<C> circle(C center, double r, int n, int turns = 1) {
  std::vector<C> out;
  for (int i = 0; i < n * turns; ++i) {
    double a = 2.0 * std::numbers::pi * turns * static_cast<double>(i) / (n * turns);
    out.push_back(center + std::polar(r, a));
  }
  return out;
}

// star-shaped loop with random radial wobble; winding 1 around the center
std::vector<C> wobbly_loop(std::mt19937_64& rng, C center, int n) {
  std::uniform_real_distribution<double> amp(-0.1, 0.1);
  double a1 = amp(rng), a2 = amp(rng), a3 = amp(rng);
  std::vector<C> out;
  for (int i = 0; i < n; ++i) {
    double t = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    double r = 1.0 + a1 * std::sin(t) + a2 * std::cos(2 * t) + a3 * std::sin(3 * t);
    out.push_back(center + std::polar(r, t));
  }
  return out;
}

// independent oracle: summed signed angle increments
int winding_angle_sum(const std::vector<C>& s, C z) {
  double total = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    C a = s[i] - z;
    C b = s[(i + 1) % s.size()] - z;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

}  // namespace

TEST_CASE("winding number basics") {
  auto unit = circle({0, 0}, 1.0, 128);
  CHECK(k::winding_number(unit, {0.0, 0.0}) == 1);
  CHECK(k::winding_number(unit, {5.0, 0.0}) == 0);
  auto twice = circle({0, 0}, 1.0, 128, 2);
  CHECK(k::winding_number(twice, {0.0, 0.0}) == 2);
  CHECK(k::winding_number(twice, {3.0, 0.0}) == 0);
  // clockwise orientation flips the sign
  std::vector<C> cw(unit.rbegin(), unit.rend());
  CHECK(k::winding_number(cw, {0.0, 0.0}) == -1);
}

TEST_CASE("crossing count agrees with the angle-sum oracle") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (int iter = 0; iter < 200; ++iter) {
    auto loop = wobbly_loop(rng, {coord(rng), coord(rng)}, 257);
    for (int q = 0; q < 10; ++q) {
      C z{coord(rng), coord(rng)};
      double dmin = 1e300;
      for (const auto& s : loop) dmin = std::min(dmin, std::abs(s - z));
      if (dmin < 1e-3) continue;  // stay off the curve where rounding decides
      CHECK(k::winding_number(loop, z) == winding_angle_sum(loop, z));
    }
  }
}

TEST_CASE("batched polynomial evaluation matches direct Horner") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::vector<C> coeffs{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, {1.0, 0.0}};
  std::vector<C> in;
  for (int i = 0; i < 1001; ++i) in.push_back({coord(rng), coord(rng)});
  std::vector<C> out(in.size());
  k::poly_eval_batch(coeffs, in, out);
  for (size_t i = 0; i < in.size(); ++i) {
    C acc = coeffs.back();
    for (size_t j = coeffs.size() - 1; j-- > 0;) acc = acc * in[i] + coeffs[j];
    CHECK(std::abs(out[i] - acc) <= 1e-12 * std::max(1.0, std::abs(acc)));
  }
}

TEST_CASE("segment distances") {
  std::vector<C> p{{0.0, 1.0}, {2.0, 0.0}, {-1.0, 0.0}, {0.5, 0.0}};
  std::vector<C> a{{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  std::vector<C> b{{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
  std::vector<double> d(4);
  k::segment_distance_batch(p, a, b, d);
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(1.0));
  CHECK(d[2] == doctest::Approx(1.0));
  CHECK(d[3] == doctest::Approx(0.5));  // degenerate segment
}

TEST_CASE("scalar and AVX2 paths agree exactly") {
  if (!k::avx2::compiled_in() || k::active_backend() != k::Backend::Avx2) {
    MESSAGE("AVX2 path not active on this host; equivalence covered by dispatch fallback");
    return;
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);

  for (int iter = 0; iter < 50; ++iter) {
    int n = 129 + iter;  // odd sizes exercise the tails
    std::vector<C> loop = wobbly_loop(rng, {coord(rng), coord(rng)}, n);
    C z{coord(rng), coord(rng)};
    CHECK(k::scalar::winding_number(loop.data(), loop.size(), z) ==
          k::avx2::winding_number(loop.data(), loop.size(), z));

    std::vector<C> coeffs;
    for (int j = 0; j < 5; ++j) coeffs.push_back({coord(rng), coord(rng)});
    std::vector<C> out_s(loop.size()), out_v(loop.size());
    k::scalar::poly_eval_batch(coeffs.data(), coeffs.size(), loop.data(), out_s.data(), loop.size());
    k::avx2::poly_eval_batch(coeffs.data(), coeffs.size(), loop.data(), out_v.data(), loop.size());
    for (size_t i = 0; i < loop.size(); ++i) {
      CHECK(out_s[i].real() == out_v[i].real());
      CHECK(out_s[i].imag() == out_v[i].imag());
    }

    std::vector<C> pa(loop.size()), pb(loop.size());
    for (size_t i = 0; i < loop.size(); ++i) {
      pa[i] = loop[(i + 1) % loop.size()];
      pb[i] = loop[(i + 2) % loop.size()];
    }
    std::vector<double> ds(loop.size()), dv(loop.size());
    k::scalar::segment_distance_batch(loop.data(), pa.data(), pb.data(), ds.data(), loop.size());
    k::avx2::segment_distance_batch(loop.data(), pa.data(), pb.data(), dv.data(), loop.size());
    for (size_t i = 0; i < loop.size(); ++i) CHECK(ds[i] == dv[i]);
  }
}
