#include "amoeba/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amoeba {

LaurentPolynomial::LaurentPolynomial(std::initializer_list<Term> terms) {
  for (const auto& t : terms) insert(t.exponent, t.coefficient);
  check_nonempty();
}

LaurentPolynomial::LaurentPolynomial(const std::vector<Term>& terms) {
  for (const auto& t : terms) insert(t.exponent, t.coefficient);
  check_nonempty();
}

void LaurentPolynomial::insert(const Exponent& e, Complex c) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw std::invalid_argument("non-finite coefficient");
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) it->second += c;
  if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
}

void LaurentPolynomial::check_nonempty() const {
  if (terms_.empty()) throw std::invalid_argument("polynomial has no nonzero term");
}

std::vector<Exponent> LaurentPolynomial::support() const {
  std::vector<Exponent> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back(e);
  return out;
}

Exponent LaurentPolynomial::min_exponent() const {
  Exponent m{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max()};
  for (const auto& [e, c] : terms_) {
    m[0] = std::min(m[0], e[0]);
    m[1] = std::min(m[1], e[1]);
  }
  return m;
}

Exponent LaurentPolynomial::max_exponent() const {
  Exponent m{std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min()};
  for (const auto& [e, c] : terms_) {
    m[0] = std::max(m[0], e[0]);
    m[1] = std::max(m[1], e[1]);
  }
  return m;
}

double LaurentPolynomial::term_magnitude(const std::array<Complex, 2>& z) const {
  const double l1 = std::log(std::abs(z[0]));
  const double l2 = std::log(std::abs(z[1]));
  double s = 0.0;
  for (const auto& [e, c] : terms_)
    s += std::abs(c) * std::exp(static_cast<double>(e[0]) * l1 + static_cast<double>(e[1]) * l2);
  return s;
}

LaurentPolynomial LaurentPolynomial::scaled(Complex factor) const {
  if (factor == Complex(0.0, 0.0)) throw std::invalid_argument("scaling by zero");
  LaurentPolynomial out;
  for (const auto& [e, c] : terms_) out.insert(e, c * factor);
  out.check_nonempty();
  return out;
}

LaurentPolynomial LaurentPolynomial::shifted(const Exponent& shift) const {
  LaurentPolynomial out;
  for (const auto& [e, c] : terms_) out.insert({e[0] + shift[0], e[1] + shift[1]}, c);
  return out;
}

Complex UnivariatePoly::operator()(Complex w) const {
  Complex acc(0.0, 0.0);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * w + *it;
  return acc * std::pow(w, static_cast<double>(shift));
}

namespace {

Complex integer_power(Complex z, std::int64_t k) {
  if (k == 0) return {1.0, 0.0};
  Complex base = k > 0 ? z : Complex(1.0, 0.0) / z;
  std::uint64_t n = k > 0 ? static_cast<std::uint64_t>(k) : static_cast<std::uint64_t>(-k);
  Complex acc(1.0, 0.0);
  while (n) {
    if (n & 1u) acc *= base;
    base *= base;
    n >>= 1u;
  }
  return acc;
}

}  // namespace

Complex evaluate(const LaurentPolynomial& f, const std::array<Complex, 2>& z) {
  if (z[0] == Complex(0.0, 0.0) || z[1] == Complex(0.0, 0.0))
    throw DegenerateInput("evaluation point must lie in the torus (nonzero coordinates)");
  Complex acc(0.0, 0.0);
  for (const auto& [e, c] : f.terms()) acc += c * integer_power(z[0], e[0]) * integer_power(z[1], e[1]);
  return acc;
}

UnivariatePoly fiber_restrict(const LaurentPolynomial& f, int free_axis, Complex fixed_value) {
  if (free_axis != 0 && free_axis != 1) throw std::invalid_argument("free_axis must be 0 or 1");
  if (fixed_value == Complex(0.0, 0.0)) throw DegenerateInput("fixed fiber value must be nonzero");
  const int other = 1 - free_axis;
  const Exponent lo = f.min_exponent();
  const Exponent hi = f.max_exponent();
  std::vector<Complex> dense(static_cast<std::size_t>(hi[free_axis] - lo[free_axis] + 1));
  double scale = 0.0;
  for (const auto& [e, c] : f.terms()) {
    const Complex term = c * integer_power(fixed_value, e[other]);
    dense[static_cast<std::size_t>(e[free_axis] - lo[free_axis])] += term;
    scale = std::max(scale, std::abs(term));
  }
  // Cancellation below rounding level counts as an exact zero.
  const double zero_tol = scale * 64.0 * std::numeric_limits<double>::epsilon();
  std::size_t first = 0;
  std::size_t last = dense.size();
  while (first < last && std::abs(dense[first]) <= zero_tol) ++first;
  while (last > first && std::abs(dense[last - 1]) <= zero_tol) --last;
  if (first == last) throw DegenerateInput("fiber polynomial vanishes identically");
  UnivariatePoly p;
  p.coefficients.assign(dense.begin() + static_cast<std::ptrdiff_t>(first),
                        dense.begin() + static_cast<std::ptrdiff_t>(last));
  p.shift = lo[free_axis] + static_cast<std::int64_t>(first);
  return p;
}

std::int64_t total_degree(const LaurentPolynomial& f) {
  const Exponent lo = f.min_exponent();
  const std::int64_t clear = std::min<std::int64_t>(lo[0], 0) + std::min<std::int64_t>(lo[1], 0);
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  for (const auto& [e, c] : f.terms()) best = std::max(best, e[0] + e[1]);
  return best - clear;
}

double RealPolynomial::evaluate(const std::array<double, 4>& v) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms) {
    double m = c;
    for (int k = 0; k < 4; ++k) m *= std::pow(v[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]);
    acc += m;
  }
  return acc;
}

RealPair realify(const LaurentPolynomial& f) {
  using Monomial = std::array<int, 4>;  // powers of x1, x2, y1, y2
  std::map<Monomial, Complex> acc;
  for (const auto& [e, c] : f.terms()) {
    if (e[0] < 0 || e[1] < 0)
      throw std::invalid_argument("realify needs nonnegative exponents; clear denominators first");
    std::map<Monomial, Complex> prod{{Monomial{0, 0, 0, 0}, c}};
    for (int axis = 0; axis < 2; ++axis) {
      for (std::int64_t k = 0; k < e[static_cast<std::size_t>(axis)]; ++k) {
        // multiply by (x_axis + i y_axis)
        std::map<Monomial, Complex> next;
        for (const auto& [m, v] : prod) {
          Monomial mx = m;
          ++mx[static_cast<std::size_t>(axis)];
          next[mx] += v;
          Monomial my = m;
          ++my[static_cast<std::size_t>(axis + 2)];
          next[my] += v * Complex(0.0, 1.0);
        }
        prod = std::move(next);
      }
    }
    for (const auto& [m, v] : prod) acc[m] += v;
  }
  RealPair out;
  for (const auto& [m, v] : acc) {
    if (v.real() != 0.0) out.re_part.terms[m] = v.real();
    if (v.imag() != 0.0) out.im_part.terms[m] = v.imag();
  }
  return out;
}

nlohmann::json to_json(const LaurentPolynomial& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : f.terms())
    terms.push_back({{"exp", {e[0], e[1]}}, {"coef", {c.real(), c.imag()}}});
  return {{"terms", terms}};
}

LaurentPolynomial polynomial_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
    throw std::invalid_argument("polynomial JSON needs a \"terms\" array");
  std::vector<LaurentPolynomial::Term> terms;
  for (const auto& t : j.at("terms")) {
    const auto& e = t.at("exp");
    if (!e.is_array() || e.size() != 2) throw std::invalid_argument("\"exp\" must be a pair of integers");
    Complex c;
    const auto& cj = t.at("coef");
    if (cj.is_number()) {
      c = {cj.get<double>(), 0.0};
    } else if (cj.is_array() && cj.size() == 2) {
      c = {cj[0].get<double>(), cj[1].get<double>()};
    } else {
      throw std::invalid_argument("\"coef\" must be a number or [re, im]");
    }
    terms.push_back({{e[0].get<std::int64_t>(), e[1].get<std::int64_t>()}, c});
  }
  return LaurentPolynomial(terms);
}

}  // namespace amoeba
