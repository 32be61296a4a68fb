#include "amoeba/roots.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace amoeba {

namespace {

using Complex = std::complex<double>;

constexpr int kMaxSweeps = 200;
constexpr double kTolerance = 1e-12;

void require_leading(std::span<const Complex> c) {
  if (c.empty() || c.back() == Complex(0.0, 0.0))
    throw std::invalid_argument("polynomial_roots: leading coefficient must be nonzero");
}

Complex horner(std::span<const Complex> c, Complex w) {
  Complex acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * w + *it;
  return acc;
}

bool durand_kerner(std::span<const Complex> c, std::vector<Complex>& roots) {
  const std::size_t d = c.size() - 1;
  const Complex lead = c.back();
  // Fujiwara-style radius bound for the starting circle.
  double radius = 0.0;
  for (std::size_t k = 0; k < d; ++k)
    radius = std::max(radius, std::pow(std::abs(c[k] / lead), 1.0 / static_cast<double>(d - k)));
  radius = std::max(radius, 1e-3);
  roots.resize(d);
  const Complex seed(0.4, 0.9);
  Complex p = radius * seed / std::abs(seed);
  for (std::size_t k = 0; k < d; ++k) {
    roots[k] = p;
    p *= seed / std::abs(seed);
  }
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      Complex denom = lead;
      for (std::size_t j = 0; j < d; ++j)
        if (j != i) denom *= roots[i] - roots[j];
      if (denom == Complex(0.0, 0.0)) return false;
      const Complex step = horner(c, roots[i]) / denom;
      roots[i] -= step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(roots[i])));
    }
    if (!std::isfinite(worst)) return false;
    if (worst < kTolerance) return true;
  }
  return false;
}

}  // namespace

std::vector<Complex> companion_roots(std::span<const Complex> c) {
  require_leading(c);
  const auto d = static_cast<Eigen::Index>(c.size() - 1);
  if (d == 0) return {};
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index k = 1; k < d; ++k) m(k, k - 1) = 1.0;
  for (Eigen::Index k = 0; k < d; ++k) m(k, d - 1) = -c[static_cast<std::size_t>(k)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solve failed");
  std::vector<Complex> out(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) out[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
  return out;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> c) {
  require_leading(c);
  const std::size_t d = c.size() - 1;
  if (d == 0) return {};
  if (d == 1) return {-c[0] / c[1]};
  if (d == 2) {
    const Complex disc = std::sqrt(c[1] * c[1] - 4.0 * c[2] * c[0]);
    // pick the sign that avoids cancellation
    const Complex q = std::real(std::conj(c[1]) * disc) >= 0.0 ? -0.5 * (c[1] + disc) : -0.5 * (c[1] - disc);
    if (q == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
    return {q / c[2], c[0] / q};
  }
  std::vector<Complex> roots;
  if (durand_kerner(c, roots)) return roots;
  return companion_roots(c);
}

}  // namespace amoeba
