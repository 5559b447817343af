#include "plaque/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string_view>

namespace plaque::kernels {

namespace scalar {

int winding_number(const std::complex<double>* s, size_t n, std::complex<double> z) {
  // Signed crossing rule: each upward edge crossing the horizontal ray from z
  // with z strictly left of it adds one turn, downward edges subtract.
  const double zx = z.real(), zy = z.imag();
  long long wn = 0;
  for (size_t i = 0; i < n; ++i) {
    const std::complex<double>& a = s[i];
    const std::complex<double>& b = s[(i + 1) % n];
    const double ax = a.real(), ay = a.imag();
    const double bx = b.real(), by = b.imag();
    const double is_left = (bx - ax) * (zy - ay) - (zx - ax) * (by - ay);
    if (ay <= zy) {
      if (by > zy && is_left > 0.0) ++wn;
    } else {
      if (by <= zy && is_left < 0.0) --wn;
    }
  }
  return static_cast<int>(wn);
}

void poly_eval_batch(const std::complex<double>* coeffs, size_t ncoeff, const std::complex<double>* in,
                     std::complex<double>* out, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double zr = in[i].real(), zi = in[i].imag();
    double ar = coeffs[ncoeff - 1].real(), ai = coeffs[ncoeff - 1].imag();
    for (size_t k = ncoeff - 1; k-- > 0;) {
      const double tr = (ar * zr - ai * zi) + coeffs[k].real();
      const double ti = (ar * zi + ai * zr) + coeffs[k].imag();
      ar = tr;
      ai = ti;
    }
    out[i] = {ar, ai};
  }
}

void segment_distance_batch(const std::complex<double>* p, const std::complex<double>* a,
                            const std::complex<double>* b, double* dist, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    const double dx = b[i].real() - a[i].real();
    const double dy = b[i].imag() - a[i].imag();
    const double px = p[i].real() - a[i].real();
    const double py = p[i].imag() - a[i].imag();
    const double len2 = dx * dx + dy * dy;
    double t = (px * dx + py * dy) / len2;
    if (!(len2 > 0.0)) t = 0.0;
    t = t < 0.0 ? 0.0 : t;
    t = t > 1.0 ? 1.0 : t;
    const double ex = px - t * dx;
    const double ey = py - t * dy;
    dist[i] = std::sqrt(ex * ex + ey * ey);
  }
}

}  // namespace scalar

namespace {

Backend detect() {
  const char* env = std::getenv("PLAQUE_KERNEL");
  std::string_view want = env ? std::string_view(env) : std::string_view{};
  if (want == "scalar") return Backend::Scalar;
#if defined(__x86_64__)
  if (avx2::compiled_in() && __builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = detect();
  return b;
}

const char* backend_name() { return active_backend() == Backend::Avx2 ? "avx2" : "scalar"; }

int winding_number(std::span<const std::complex<double>> samples, std::complex<double> z) {
  if (active_backend() == Backend::Avx2) return avx2::winding_number(samples.data(), samples.size(), z);
  return scalar::winding_number(samples.data(), samples.size(), z);
}

void poly_eval_batch(std::span<const std::complex<double>> coeffs,
                     std::span<const std::complex<double>> in, std::span<std::complex<double>> out) {
  if (active_backend() == Backend::Avx2) {
    avx2::poly_eval_batch(coeffs.data(), coeffs.size(), in.data(), out.data(), in.size());
    return;
  }
  scalar::poly_eval_batch(coeffs.data(), coeffs.size(), in.data(), out.data(), in.size());
}

void segment_distance_batch(std::span<const std::complex<double>> p,
                            std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b, std::span<double> dist) {
  if (active_backend() == Backend::Avx2) {
    avx2::segment_distance_batch(p.data(), a.data(), b.data(), dist.data(), p.size());
    return;
  }
  scalar::segment_distance_batch(p.data(), a.data(), b.data(), dist.data(), p.size());
}

#if !defined(PLAQUE_HAVE_AVX2_TU)
namespace avx2 {
bool compiled_in() { return false; }
int winding_number(const std::complex<double>* s, size_t n, std::complex<double> z) {
  return scalar::winding_number(s, n, z);
}
void poly_eval_batch(const std::complex<double>* coeffs, size_t ncoeff, const std::complex<double>* in,
                     std::complex<double>* out, size_t n) {
  scalar::poly_eval_batch(coeffs, ncoeff, in, out, n);
}
void segment_distance_batch(const std::complex<double>* p, const std::complex<double>* a,
                            const std::complex<double>* b, double* dist, size_t n) {
  scalar::segment_distance_batch(p, a, b, dist, n);
}
}  // namespace avx2
#endif

}  // namespace plaque::kernels
