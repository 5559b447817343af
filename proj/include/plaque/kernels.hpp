#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace plaque::kernels {

// Data-parallel inner loops of the curve machinery: winding counts, batched
// polynomial evaluation and point-segment distances over sampled loops.
// A scalar reference implementation always exists; an AVX2 variant is chosen
// at runtime when the CPU supports it. The two compute identical results
// (same per-element operation order, no fused contraction), which the test
// suite checks exactly.

enum class Backend { Scalar, Avx2 };

Backend active_backend();
const char* backend_name();

// Winding number of the closed polyline (wraparound edge implied) around z,
// by signed horizontal-ray crossings.
int winding_number(std::span<const std::complex<double>> samples, std::complex<double> z);

// out[i] = p(in[i]) with ascending coefficients, Horner.
void poly_eval_batch(std::span<const std::complex<double>> coeffs,
                     std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

// dist[i] = euclidean distance from p[i] to the segment [a[i], b[i]].
void segment_distance_batch(std::span<const std::complex<double>> p,
                            std::span<const std::complex<double>> a,
                            std::span<const std::complex<double>> b, std::span<double> dist);

namespace scalar {
int winding_number(const std::complex<double>* samples, size_t n, std::complex<double> z);
void poly_eval_batch(const std::complex<double>* coeffs, size_t ncoeff, const std::complex<double>* in,
                     std::complex<double>* out, size_t n);
void segment_distance_batch(const std::complex<double>* p, const std::complex<double>* a,
                            const std::complex<double>* b, double* dist, size_t n);
}  // namespace scalar

namespace avx2 {
bool compiled_in();
int winding_number(const std::complex<double>* samples, size_t n, std::complex<double> z);
void poly_eval_batch(const std::complex<double>* coeffs, size_t ncoeff, const std::complex<double>* in,
                     std::complex<double>* out, size_t n);
void segment_distance_batch(const std::complex<double>* p, const std::complex<double>* a,
                            const std::complex<double>* b, double* dist, size_t n);
}  // namespace avx2

}  // namespace plaque::kernels
