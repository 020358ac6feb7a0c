#pragma once

#include <cstddef>
#include <vector>

#include "pep/linalg.hpp"
#include "pep/matpoly.hpp"

namespace pep {

enum class WeightMode { Absolute, Relative };
enum class NormKind { Frobenius, Spectral };

// Tolerances ||E_k|| in the backward error denominator.
struct BackwardErrorWeights {
  std::vector<double> alpha;

  static BackwardErrorWeights absolute(std::size_t degree);
  // alpha_k = ||A_k|| (Frobenius by default, 2-norm estimate on request).
  static BackwardErrorWeights relative(const MatrixPolynomial& p, NormKind norm = NormKind::Frobenius);
  static BackwardErrorWeights make(const MatrixPolynomial& p, WeightMode mode);
};

// eta(x, lambda) = ||P(lambda) x|| / ((sum_k |lambda|^k alpha_k) ||x||).
// Throws ZeroVector for x = 0 and ZeroDenominator when the weighted sum vanishes.
double backward_error(const MatrixPolynomial& p, std::span<const cplx> x, cplx lambda,
                      const BackwardErrorWeights& weights);

// Unit y with y^* P(lambda) ~ 0 from two guarded inverse-iteration steps on
// P(lambda)^*. Throws NotAnEigenvalue when ||y^* P|| > 1e-6 ||P||_F.
ComplexVector left_eigenvector(const MatrixPolynomial& p, cplx lambda);

struct ConditionWeights {
  std::vector<double> omega;

  static ConditionWeights unit(std::size_t degree);
  // omega_i = ||A_i||_F
  static ConditionWeights coefficient_norms(const MatrixPolynomial& p);
  static ConditionWeights make(const MatrixPolynomial& p, WeightMode mode);
};

// Homogeneous eigenvalue condition number
//   (sum_i |l0|^2i |l1|^2(m-i) w_i^2)^{1/2} ||y|| ||x|| / |y^* (conj(l1) d0P - conj(l0) d1P) x|
// Throws ZeroDenominator if the denominator is below 1e-12 ||y|| ||x|| ||conj(l1) d0P - conj(l0) d1P||_F.
double condition_number(const MatrixPolynomial& p, const HomogeneousPoint& eigenvalue, std::span<const cplx> x,
                        std::span<const cplx> y, const ConditionWeights& weights);

// Condition number of an eigenvalue of the pencil A - lambda B, viewed as
// the degree-1 polynomial with coefficients (A, -B) and w = (||A||_F, ||B||_F).
double gep_condition_number(const GepPencil& pencil, cplx lambda, std::span<const cplx> right,
                            std::span<const cplx> left);
// Same, with both eigenvectors from inverse iteration at lambda.
double gep_condition_number(const GepPencil& pencil, cplx lambda);

// The pencil as a degree-1 matrix polynomial A + lambda (-B).
MatrixPolynomial pencil_polynomial(const GepPencil& pencil);

// max_i ||A_i||_2 / min(||A_0||_2, ||A_m||_2), 2-norms by 20 power steps.
double rho(const MatrixPolynomial& p);

}  // namespace pep
