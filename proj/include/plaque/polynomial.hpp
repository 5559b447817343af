#pragma once

#include <complex>
#include <string>
#include <vector>

namespace plaque::dynamics {

using Complex = std::complex<double>;

// Complex polynomial in ascending coefficient order, degree 2 <= d < inf.
class Polynomial {
 public:
  explicit Polynomial(std::vector<Complex> coefficients);

  static Polynomial quad(Complex c);       // z^2 + c
  static Polynomial siegel_golden();       // z^2 + e^{2 pi i (sqrt5-1)/2} z
  // Map spec: "quad:c=<complex>", "siegel:golden", or ascending coefficient
  // list "a0,a1,...,ad" with entries like "-1" or "0.5+0.25i".
  static Polynomial parse_map(const std::string& spec);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }

  Complex operator()(Complex z) const;  // Horner
  Complex dfdz(Complex z) const;        // f'(z)
  std::vector<Complex> derivative_coeffs() const;
  // max(4, 2 * max |coeff|); orbits beyond this radius diverge.
  double escape_radius() const;

  std::string to_string() const;

 private:
  std::vector<Complex> coeffs_;
};

Complex eval_poly(const std::vector<Complex>& coeffs, Complex z);

Complex parse_complex(const std::string& text);
std::string format_complex(Complex z);

// Truncated Taylor expansion at a point: coeffs[k] = f^(k)(z) / k!.
// Propagating jets through repeated application of f yields derivatives of
// iterates without expanding the composition.
class Jet {
 public:
  Jet(int order, Complex value, bool is_variable);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  Complex value() const { return c_[0]; }
  Complex taylor(int k) const { return c_[static_cast<size_t>(k)]; }
  Complex derivative(int k) const;  // k! * taylor(k)

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet& operator+=(Complex s);

 private:
  explicit Jet(std::vector<Complex> c) : c_(std::move(c)) {}
  std::vector<Complex> c_;
};

// f applied to a jet (Horner over jets).
Jet eval_jet(const Polynomial& f, const Jet& z);
// Jet of f^n at z, to the given derivative order.
Jet iterate_jet(const Polynomial& f, Complex z, int n, int order);

// Coefficients of the n-fold composition f^n, ascending order.
std::vector<Complex> compose_power_coeffs(const Polynomial& f, int n);

}  // namespace plaque::dynamics
