// AVX2 variants of the sampled-curve kernels. Compiled with -mavx2 in its own
// translation unit; only reached after a runtime cpuid check. Arithmetic per
// lane mirrors the scalar reference exactly (no FMA), so results match the
// scalar path bit for bit.

#include "plaque/kernels.hpp"

#if defined(PLAQUE_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cmath>

namespace plaque::kernels::avx2 {

bool compiled_in() { return true; }

namespace {

// Deinterleave 4 complex doubles starting at p into re/im vectors.
inline void load4(const std::complex<double>* p, __m256d& re, __m256d& im) {
  __m256d lo = _mm256_loadu_pd(reinterpret_cast<const double*>(p));      // r0 i0 r1 i1
  __m256d hi = _mm256_loadu_pd(reinterpret_cast<const double*>(p) + 4);  // r2 i2 r3 i3
  __m256d r = _mm256_unpacklo_pd(lo, hi);  // r0 r2 r1 r3
  __m256d i = _mm256_unpackhi_pd(lo, hi);  // i0 i2 i1 i3
  re = _mm256_permute4x64_pd(r, 0b11011000);
  im = _mm256_permute4x64_pd(i, 0b11011000);
}

inline void store4(std::complex<double>* p, __m256d re, __m256d im) {
  __m256d r = _mm256_permute4x64_pd(re, 0b11011000);  // r0 r2 r1 r3
  __m256d i = _mm256_permute4x64_pd(im, 0b11011000);
  _mm256_storeu_pd(reinterpret_cast<double*>(p), _mm256_unpacklo_pd(r, i));
  _mm256_storeu_pd(reinterpret_cast<double*>(p) + 4, _mm256_unpackhi_pd(r, i));
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

int winding_number(const std::complex<double>* s, size_t n, std::complex<double> z) {
  const __m256d zx = _mm256_set1_pd(z.real());
  const __m256d zy = _mm256_set1_pd(z.imag());
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();

  size_t i = 0;
  for (; i + 4 < n; i += 4) {  // edge i -> i+1 needs sample i+4 for the last lane
    __m256d ax, ay, bx, by;
    load4(s + i, ax, ay);
    load4(s + i + 1, bx, by);
    __m256d is_left = _mm256_sub_pd(_mm256_mul_pd(_mm256_sub_pd(bx, ax), _mm256_sub_pd(zy, ay)),
                                    _mm256_mul_pd(_mm256_sub_pd(zx, ax), _mm256_sub_pd(by, ay)));
    __m256d a_le = _mm256_cmp_pd(ay, zy, _CMP_LE_OQ);
    __m256d b_gt = _mm256_cmp_pd(by, zy, _CMP_GT_OQ);
    __m256d b_le = _mm256_cmp_pd(by, zy, _CMP_LE_OQ);
    __m256d l_gt = _mm256_cmp_pd(is_left, zero, _CMP_GT_OQ);
    __m256d l_lt = _mm256_cmp_pd(is_left, zero, _CMP_LT_OQ);
    __m256d up = _mm256_and_pd(_mm256_and_pd(a_le, b_gt), l_gt);
    __m256d down = _mm256_andnot_pd(a_le, _mm256_and_pd(b_le, l_lt));
    acc = _mm256_add_pd(acc, _mm256_and_pd(up, one));
    acc = _mm256_sub_pd(acc, _mm256_and_pd(down, one));
  }
  long long wn = static_cast<long long>(hsum(acc));
  // tail edges, including the wraparound
  for (; i < n; ++i) {
    const std::complex<double>& a = s[i];
    const std::complex<double>& b = s[(i + 1) % n];
    const double is_left =
        (b.real() - a.real()) * (z.imag() - a.imag()) - (z.real() - a.real()) * (b.imag() - a.imag());
    if (a.imag() <= z.imag()) {
      if (b.imag() > z.imag() && is_left > 0.0) ++wn;
    } else {
      if (b.imag() <= z.imag() && is_left < 0.0) --wn;
    }
  }
  return static_cast<int>(wn);
}

void poly_eval_batch(const std::complex<double>* coeffs, size_t ncoeff, const std::complex<double>* in,
                     std::complex<double>* out, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d zr, zi;
    load4(in + i, zr, zi);
    __m256d ar = _mm256_set1_pd(coeffs[ncoeff - 1].real());
    __m256d ai = _mm256_set1_pd(coeffs[ncoeff - 1].imag());
    for (size_t k = ncoeff - 1; k-- > 0;) {
      __m256d tr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(ar, zr), _mm256_mul_pd(ai, zi)),
                                 _mm256_set1_pd(coeffs[k].real()));
      __m256d ti = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(ar, zi), _mm256_mul_pd(ai, zr)),
                                 _mm256_set1_pd(coeffs[k].imag()));
      ar = tr;
      ai = ti;
    }
    store4(out + i, ar, ai);
  }
  if (i < n) scalar::poly_eval_batch(coeffs, ncoeff, in + i, out + i, n - i);
}

void segment_distance_batch(const std::complex<double>* p, const std::complex<double>* a,
                            const std::complex<double>* b, double* dist, size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d px, py, ax, ay, bx, by;
    load4(p + i, px, py);
    load4(a + i, ax, ay);
    load4(b + i, bx, by);
    __m256d dx = _mm256_sub_pd(bx, ax);
    __m256d dy = _mm256_sub_pd(by, ay);
    __m256d rx = _mm256_sub_pd(px, ax);
    __m256d ry = _mm256_sub_pd(py, ay);
    __m256d len2 = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
    __m256d t = _mm256_div_pd(_mm256_add_pd(_mm256_mul_pd(rx, dx), _mm256_mul_pd(ry, dy)), len2);
    t = _mm256_and_pd(t, _mm256_cmp_pd(len2, zero, _CMP_GT_OQ));  // degenerate segment -> t = 0
    t = _mm256_max_pd(t, zero);
    t = _mm256_min_pd(t, one);
    __m256d ex = _mm256_sub_pd(rx, _mm256_mul_pd(t, dx));
    __m256d ey = _mm256_sub_pd(ry, _mm256_mul_pd(t, dy));
    _mm256_storeu_pd(dist + i, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(ex, ex), _mm256_mul_pd(ey, ey))));
  }
  if (i < n) scalar::segment_distance_batch(p + i, a + i, b + i, dist + i, n - i);
}

}  // namespace plaque::kernels::avx2

#endif  // PLAQUE_HAVE_AVX2_TU
