#pragma once

#include <complex>
#include <span>
#include <vector>

namespace amoeba {

/// All complex roots of c[0] + c[1] w + ... + c[d] w^d (c[d] != 0).
///
/// Degrees 1 and 2 are solved in closed form. Higher degrees run
/// Durand-Kerner (200 sweeps, relative step tolerance 1e-12) and fall back
/// to the eigenvalues of the companion matrix when the iteration stalls.
std::vector<std::complex<double>> polynomial_roots(std::span<const std::complex<double>> coefficients);

/// Same as polynomial_roots but always uses the companion matrix.
std::vector<std::complex<double>> companion_roots(std::span<const std::complex<double>> coefficients);

}  // namespace amoeba
