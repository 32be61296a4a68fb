#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace amoeba {

using Complex = std::complex<double>;
using Exponent = std::array<std::int64_t, 2>;

/// Raised when an input lies on a coordinate hyperplane or produces a
/// polynomial that vanishes identically along a fiber.
class DegenerateInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sparse bivariate Laurent polynomial: exponent -> nonzero complex coefficient.
class LaurentPolynomial {
 public:
  struct Term {
    Exponent exponent;
    Complex coefficient;
  };

  /// Zero coefficients are dropped, repeated exponents are summed.
  /// Throws std::invalid_argument when no nonzero term remains.
  LaurentPolynomial(std::initializer_list<Term> terms);
  explicit LaurentPolynomial(const std::vector<Term>& terms);

  const std::map<Exponent, Complex>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  std::vector<Exponent> support() const;

  /// Componentwise minimum of the support.
  Exponent min_exponent() const;
  Exponent max_exponent() const;

  /// Sum of |coefficient| * |z^a| over all terms, the natural scale for residuals.
  double term_magnitude(const std::array<Complex, 2>& z) const;

  LaurentPolynomial scaled(Complex factor) const;
  /// Multiplication by the monomial z^shift.
  LaurentPolynomial shifted(const Exponent& shift) const;

  bool is_monomial() const { return terms_.size() == 1; }
  bool operator==(const LaurentPolynomial& other) const = default;

 private:
  LaurentPolynomial() = default;
  void insert(const Exponent& e, Complex c);
  void check_nonempty() const;

  std::map<Exponent, Complex> terms_;
};

/// Dense univariate polynomial c[0] + c[1] w + ... together with the
/// monomial factor w^shift that was split off so that c[0] != 0.
struct UnivariatePoly {
  std::vector<Complex> coefficients;
  std::int64_t shift = 0;

  int degree() const { return static_cast<int>(coefficients.size()) - 1; }
  /// Value of w^shift * p(w).
  Complex operator()(Complex w) const;
};

/// f evaluated on the torus. Throws DegenerateInput if a coordinate is zero.
Complex evaluate(const LaurentPolynomial& f, const std::array<Complex, 2>& z);

/// Restrict f to the fiber where the variable other than `free_axis`
/// (0 or 1) equals `fixed_value`.
UnivariatePoly fiber_restrict(const LaurentPolynomial& f, int free_axis, Complex fixed_value);

/// Total degree after clearing negative exponents by the componentwise-minimal monomial.
std::int64_t total_degree(const LaurentPolynomial& f);

/// Real polynomial in (x1, x2, y1, y2).
struct RealPolynomial {
  std::map<std::array<int, 4>, double> terms;
  double evaluate(const std::array<double, 4>& v) const;
};

/// Real and imaginary parts of f(x + iy).
struct RealPair {
  RealPolynomial re_part;
  RealPolynomial im_part;
};

/// Throws std::invalid_argument when f has a negative exponent.
RealPair realify(const LaurentPolynomial& f);

nlohmann::json to_json(const LaurentPolynomial& f);
/// Accepts {"terms":[{"exp":[a1,a2],"coef":[re,im]}, ...]}.
LaurentPolynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace amoeba
