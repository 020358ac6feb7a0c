#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pep/linalg.hpp"

namespace pep {

// P(lambda) = sum_k lambda^k A_k, coefficients stored A_0 first.
//
// Invariants: degree m >= 1, every A_k is n x n with n >= 1, and A_m is not
// the zero matrix. A zero leading coefficient is rejected rather than
// silently lowering the degree.
class MatrixPolynomial {
 public:
  explicit MatrixPolynomial(std::vector<ComplexMatrix> coefficients);

  std::size_t dim() const noexcept { return coefficients_.front().rows(); }
  std::size_t degree() const noexcept { return coefficients_.size() - 1; }
  std::size_t eigenvalue_count() const noexcept { return dim() * degree(); }

  const ComplexMatrix& coefficient(std::size_t k) const { return coefficients_.at(k); }
  std::span<const ComplexMatrix> coefficients() const noexcept { return coefficients_; }

  // Frobenius norms ||A_0||_F .. ||A_m||_F.
  std::vector<double> coefficient_norms() const;

  friend bool operator==(const MatrixPolynomial&, const MatrixPolynomial&) = default;

 private:
  std::vector<ComplexMatrix> coefficients_;
};

// Representative of a point of P^1, stored with unit 2-norm.
struct HomogeneousPoint {
  cplx lambda0;
  cplx lambda1;

  static HomogeneousPoint make(cplx lambda0, cplx lambda1);
  // (lambda, 1), normalized.
  static HomogeneousPoint from_affine(cplx lambda);
};

ComplexMatrix eval(const MatrixPolynomial& p, cplx lambda);
ComplexMatrix eval_derivative(const MatrixPolynomial& p, cplx lambda);
// sum_i lambda0^i lambda1^(m-i) A_i; the point is used as given, not renormalized.
ComplexMatrix eval_homogeneous(const MatrixPolynomial& p, cplx lambda0, cplx lambda1);
ComplexMatrix eval_homogeneous(const MatrixPolynomial& p, const HomogeneousPoint& point);

// P(lambda) x and P'(lambda) x without forming the matrices.
ComplexVector apply(const MatrixPolynomial& p, cplx lambda, std::span<const cplx> x);
ComplexVector apply_derivative(const MatrixPolynomial& p, cplx lambda, std::span<const cplx> x);

// Linear pencil A - lambda B. Eigenpairs satisfy A v = lambda B v.
struct GepPencil {
  ComplexMatrix a;
  ComplexMatrix b;
};

// Companion linearization of size mn:
//   A = blockdiag(A_0, I, ..., I)
//   B = [-A_1 -A_2 ... -A_m; I 0 ... 0; 0 I 0 ... 0; ...; 0 ... I 0]
// With this layout A v = lambda B v holds for v = (x, lambda x, ..., lambda^(m-1) x)
// whenever P(lambda) x = 0.
GepPencil companion_gep(const MatrixPolynomial& p);

enum class CompanionForm { L1, L2 };

// First (L1) and second (L2) companion forms of a quadratic
// Q(lambda) = lambda^2 M + lambda C + K with a nonsingular N:
//   L1: [0 N; -K -C] - lambda [N 0; 0 M]
//   L2: [-K 0; 0 N] - lambda [C M; N 0]
GepPencil companion_forms_qep(const MatrixPolynomial& q, const ComplexMatrix& n_matrix, CompanionForm form);

// Coefficients (ascending) of det P(lambda), recovered from LU determinants
// at the (mn+1)-st roots of unity. Reference oracle for mn <= 64 only.
std::vector<cplx> det_interpolation_oracle(const MatrixPolynomial& p);

// Roots of det_interpolation_oracle(p), each polished by Newton's method on
// det P using d/dlambda log det P = tr(P^{-1} P').
std::vector<cplx> det_interpolation_roots(const MatrixPolynomial& p, bool polish = true);

}  // namespace pep
