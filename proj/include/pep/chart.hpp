#pragma once

#include <cstddef>

#include "pep/linalg.hpp"
#include "pep/matpoly.hpp"

namespace pep {

// L(x) = a_1 x_1 + ... + a_n x_n + a_0, no conjugation.
struct AffineChart {
  ComplexVector coefficients;
  cplx constant = -1.0;

  cplx operator()(std::span<const cplx> x) const { return dot(coefficients, x) + constant; }
  // Degree-1 Bombieri norm squared: sum |a_i|^2 + |a_0|^2.
  double norm_squared() const;
};

// Gaussian a_1..a_n with a_0 = -1, so the origin never lies on the chart.
AffineChart make_chart(std::size_t n, Rng& rng);

// z = (x, lambda) in C^{n+1}.
struct SolutionPoint {
  ComplexVector x;
  cplx lambda;

  double norm() const;  // (||x||^2 + |lambda|^2)^{1/2}
};

// Target system f(z) = (P(lambda) x, L(x)) and its Jacobian
// [P(lambda)  P'(lambda) x; a^T  0].
ComplexVector target_residual(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z);
ComplexMatrix target_jacobian(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z);

// Newton correction -Df(z)^{-1} f(z) for the target system, returned as
// (dx, dlambda). Throws SingularJacobian when the LU pivot floor is hit.
SolutionPoint newton_correction(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z);

// Rescales x so that L(x) = 0. Throws ZeroDenominator when a.x = 0.
SolutionPoint project_to_chart(const AffineChart& chart, std::span<const cplx> x, cplx lambda);

}  // namespace pep
