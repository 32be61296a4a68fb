#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "amoeba/laurent.hpp"
#include "amoeba/roots.hpp"

using namespace amoeba;

namespace {

const Complex I(0.0, 1.0);

LaurentPolynomial line() { return {{{1, 0}, 1.0}, {{0, 1}, 1.0}, {{0, 0}, 1.0}}; }
LaurentPolynomial cubic() { return {{{2, 1}, 1.0}, {{1, 2}, 1.0}, {{1, 1}, 5.0}, {{0, 0}, 1.0}}; }

Complex naive_eval(const std::vector<std::pair<Exponent, Complex>>& terms, Complex z1, Complex z2) {
  Complex s = 0;
  for (const auto& [e, c] : terms) s += c * std::pow(z1, static_cast<double>(e[0])) * std::pow(z2, static_cast<double>(e[1]));
  return s;
}

}  // namespace

TEST_CASE("construction drops zeros and merges repeats") {
  LaurentPolynomial f{{{1, 0}, 2.0}, {{1, 0}, -2.0}, {{0, 1}, 3.0}, {{0, 0}, 0.0}};
  CHECK(f.size() == 1);
  CHECK(f.terms().at({0, 1}) == Complex(3.0));
  CHECK_THROWS_AS(LaurentPolynomial({{{0, 0}, 0.0}}), std::invalid_argument);
}

TEST_CASE("evaluate") {
  CHECK(std::abs(evaluate(line(), {1.0, 1.0}) - 3.0) < 1e-15);
  const Complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  CHECK(std::abs(evaluate(line(), {w, w * w})) < 1e-14);
  LaurentPolynomial m{{{1, -1}, 2.0}};
  CHECK(std::abs(evaluate(m, {3.0, 2.0}) - 3.0) < 1e-15);
  CHECK_THROWS_AS(evaluate(line(), {0.0, 1.0}), DegenerateInput);
}

TEST_CASE("fiber_restrict") {
  auto p = fiber_restrict(line(), 0, 1.0);
  REQUIRE(p.coefficients.size() == 2);
  CHECK(p.shift == 0);
  CHECK(p.coefficients[0] == Complex(2.0));
  CHECK(p.coefficients[1] == Complex(1.0));

  auto q = fiber_restrict(cubic(), 0, 1.0);
  REQUIRE(q.coefficients.size() == 3);
  CHECK(q.coefficients[0] == Complex(1.0));
  CHECK(q.coefficients[1] == Complex(6.0));
  CHECK(q.coefficients[2] == Complex(1.0));

  LaurentPolynomial mono{{{1, 1}, 1.0}};
  auto r = fiber_restrict(mono, 0, Complex(0.3, 0.7));
  CHECK(r.coefficients.size() == 1);
  CHECK(r.shift == 1);
  CHECK(r.degree() == 0);

  // z1 z2 + z1 vanishes on the whole fiber z2 = -1.
  LaurentPolynomial g{{{1, 1}, 1.0}, {{1, 0}, 1.0}};
  CHECK_THROWS_AS(fiber_restrict(g, 0, -1.0), DegenerateInput);
  CHECK_THROWS_AS(fiber_restrict(line(), 0, 0.0), DegenerateInput);
}

TEST_CASE("total_degree") {
  CHECK(total_degree(cubic()) == 3);
  CHECK(total_degree(LaurentPolynomial{{{1, 0}, 2.0}, {{0, 1}, 1.0}, {{0, 0}, 1.0}}) == 1);
  CHECK(total_degree(LaurentPolynomial{{{-1, 0}, 1.0}, {{0, 1}, 1.0}}) == 2);
}

TEST_CASE("realify examples") {
  auto z1 = realify(LaurentPolynomial{{{1, 0}, 1.0}});
  const std::array<double, 4> v{0.3, -1.1, 0.7, 2.5};  // x1, x2, y1, y2
  CHECK(z1.re_part.evaluate(v) == doctest::Approx(0.3));
  CHECK(z1.im_part.evaluate(v) == doctest::Approx(0.7));

  auto sq = realify(LaurentPolynomial{{{2, 0}, 1.0}});
  CHECK(sq.re_part.evaluate(v) == doctest::Approx(0.3 * 0.3 - 0.7 * 0.7));
  CHECK(sq.im_part.evaluate(v) == doctest::Approx(2 * 0.3 * 0.7));

  auto iz = realify(LaurentPolynomial{{{1, 1}, I}});
  CHECK(iz.re_part.evaluate(v) == doctest::Approx(-0.3 * 2.5 - (-1.1) * 0.7));
  CHECK(iz.im_part.evaluate(v) == doctest::Approx(0.3 * -1.1 - 0.7 * 2.5));

  CHECK_THROWS_AS(realify(LaurentPolynomial{{{-1, 0}, 1.0}, {{0, 0}, 1.0}}), std::invalid_argument);
}

TEST_CASE("realify matches evaluation at random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_int_distribution<int> e(0, 4);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<LaurentPolynomial::Term> terms;
    std::vector<std::pair<Exponent, Complex>> plain;
    for (int k = 0; k < 6; ++k) {
      const Exponent a{e(rng), e(rng)};
      const Complex c(u(rng), u(rng));
      terms.push_back({a, c});
      plain.push_back({a, c});
    }
    const LaurentPolynomial f(terms);
    const auto rp = realify(f);
    for (int k = 0; k < 100; ++k) {
      const double x1 = u(rng), x2 = u(rng), y1 = u(rng), y2 = u(rng);
      const Complex direct = naive_eval(plain, {x1, y1}, {x2, y2});
      const Complex split(rp.re_part.evaluate({x1, x2, y1, y2}), rp.im_part.evaluate({x1, x2, y1, y2}));
      CHECK(std::abs(direct - split) < 1e-10 * (1 + std::abs(direct)));
    }
  }
}

TEST_CASE("fiber roots reassemble to zeros of f") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi), rad(-2.0, 2.0);
  const LaurentPolynomial fs[] = {line(), cubic(), LaurentPolynomial{{{3, 0}, 1.0}, {{0, 3}, 1.0}, {{1, 1}, 2.0}, {{0, 0}, 1.0}},
                                  LaurentPolynomial{{{-1, 2}, Complex(1, 1)}, {{2, -1}, 0.5}, {{0, 0}, -3.0}, {{1, 1}, 2.0}}};
  for (const auto& f : fs) {
    for (int axis = 0; axis < 2; ++axis) {
      for (int k = 0; k < 25; ++k) {
        const Complex fixed = std::polar(std::exp(rad(rng)), ang(rng));
        const auto p = fiber_restrict(f, axis, fixed);
        if (p.degree() < 1) continue;
        for (const Complex w : polynomial_roots(p.coefficients)) {
          if (w == Complex(0.0)) continue;
          std::array<Complex, 2> z;
          z[axis] = w;
          z[1 - axis] = fixed;
          CHECK(std::abs(evaluate(f, z)) < 1e-8 * f.term_magnitude(z));
        }
      }
    }
  }
}

TEST_CASE("root solvers agree with the companion matrix") {
  const std::vector<Complex> c{1.0, Complex(0.0, 2.0), -3.0, 0.5, 1.0, Complex(2.0, -1.0)};
  auto a = polynomial_roots(c), b = companion_roots(c);
  REQUIRE(a.size() == 5);
  REQUIRE(b.size() == 5);
  for (const auto& r : a) {
    double best = 1e9;
    for (const auto& s : b) best = std::min(best, std::abs(r - s));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("json round trip") {
  const auto f = cubic();
  CHECK(polynomial_from_json(to_json(f)) == f);
  CHECK_THROWS(polynomial_from_json(nlohmann::json::parse(R"({"terms":[{"exp":[1],"coef":1}]})")));
}
