#include "plaque/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "plaque/error.hpp"

namespace plaque::dynamics {

Polynomial::Polynomial(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex{0.0, 0.0}) coeffs_.pop_back();
  if (coeffs_.size() < 3) throw Error("BadPolynomial", "degree must be at least 2");
}

Polynomial Polynomial::quad(Complex c) { return Polynomial({c, {0.0, 0.0}, {1.0, 0.0}}); }

Polynomial Polynomial::siegel_golden() {
  const double theta = (std::sqrt(5.0) - 1.0) / 2.0;
  Complex lambda = std::polar(1.0, 2.0 * std::numbers::pi * theta);
  return Polynomial({{0.0, 0.0}, lambda, {1.0, 0.0}});
}

Complex eval_poly(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc = coeffs.back();
  for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * z + coeffs[i];
  return acc;
}

Complex Polynomial::operator()(Complex z) const { return eval_poly(coeffs_, z); }

Complex Polynomial::dfdz(Complex z) const { return eval_poly(derivative_coeffs(), z); }

std::vector<Complex> Polynomial::derivative_coeffs() const {
  std::vector<Complex> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
  return d;
}

double Polynomial::escape_radius() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return std::max(4.0, 2.0 * m);
}

std::string Polynomial::to_string() const {
  std::string out;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ",";
    out += format_complex(coeffs_[i]);
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  // Accepts "a", "bi", "a+bi", "a-bi"; also "i" / "-i" for unit imaginary.
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error("ParseError", "empty complex literal");

  auto parse_double = [](const std::string& t) {
    size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw Error("ParseError", "bad number \"" + t + "\"");
    return v;
  };

  // Split at the last +/- that is not an exponent sign and not leading.
  size_t split = std::string::npos;
  for (size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (s.back() == 'i') {
      std::string imag_part = s.substr(split == std::string::npos ? 0 : split, std::string::npos);
      imag_part.pop_back();  // drop 'i'
      if (imag_part.empty() || imag_part == "+") imag_part = "1";
      if (imag_part == "-") imag_part = "-1";
      double im = parse_double(imag_part);
      double re = split == std::string::npos ? 0.0 : parse_double(s.substr(0, split));
      return {re, im};
    }
    return {parse_double(s), 0.0};
  } catch (const std::exception&) {
    throw Error("ParseError", "bad complex literal \"" + text + "\"");
  }
}

std::string format_complex(Complex z) {
  std::ostringstream out;
  out.precision(17);
  out << z.real();
  if (z.imag() != 0.0) {
    out << (z.imag() >= 0.0 ? "+" : "");
    out << z.imag() << "i";
  }
  return out.str();
}

Polynomial Polynomial::parse_map(const std::string& spec) {
  if (spec.rfind("quad:c=", 0) == 0) return quad(parse_complex(spec.substr(7)));
  if (spec == "siegel:golden") return siegel_golden();
  std::vector<Complex> coeffs;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) coeffs.push_back(parse_complex(item));
  if (coeffs.size() < 3) throw Error("ParseError", "map \"" + spec + "\" has degree < 2");
  return Polynomial(std::move(coeffs));
}

Jet::Jet(int order, Complex value, bool is_variable) : c_(static_cast<size_t>(order) + 1, {0.0, 0.0}) {
  c_[0] = value;
  if (is_variable && order >= 1) c_[1] = {1.0, 0.0};
}

Complex Jet::derivative(int k) const {
  double fact = 1.0;
  for (int i = 2; i <= k; ++i) fact *= i;
  return c_[static_cast<size_t>(k)] * fact;
}

Jet operator+(const Jet& a, const Jet& b) {
  std::vector<Complex> c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
  return Jet(std::move(c));
}

Jet operator-(const Jet& a, const Jet& b) {
  std::vector<Complex> c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] - b.c_[i];
  return Jet(std::move(c));
}

Jet operator*(const Jet& a, const Jet& b) {
  std::vector<Complex> c(a.c_.size(), Complex{0.0, 0.0});
  for (size_t i = 0; i < c.size(); ++i)
    for (size_t j = 0; j + i < c.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Jet(std::move(c));
}

Jet& Jet::operator+=(Complex s) {
  c_[0] += s;
  return *this;
}

Jet eval_jet(const Polynomial& f, const Jet& z) {
  const auto& coeffs = f.coefficients();
  Jet acc(z.order(), coeffs.back(), false);
  for (size_t i = coeffs.size() - 1; i-- > 0;) {
    acc = acc * z;
    acc += coeffs[i];
  }
  return acc;
}

Jet iterate_jet(const Polynomial& f, Complex z, int n, int order) {
  Jet acc(order, z, true);
  for (int i = 0; i < n; ++i) acc = eval_jet(f, acc);
  return acc;
}

std::vector<Complex> compose_power_coeffs(const Polynomial& f, int n) {
  std::vector<Complex> acc{{0.0, 0.0}, {1.0, 0.0}};  // identity
  auto mul = [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<Complex> c(a.size() + b.size() - 1, Complex{0.0, 0.0});
    for (size_t i = 0; i < a.size(); ++i)
      for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  const auto& fc = f.coefficients();
  for (int step = 0; step < n; ++step) {
    // acc <- f(acc) by Horner over polynomials.
    std::vector<Complex> out{fc.back()};
    for (size_t i = fc.size() - 1; i-- > 0;) {
      out = mul(out, acc);
      out[0] += fc[i];
    }
    acc = std::move(out);
  }
  return acc;
}

}  // namespace plaque::dynamics
