#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pep/error.hpp"

namespace pep {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;
using Rng = std::mt19937_64;

// Dense row-major complex matrix. Entries are checked finite when supplied
// in bulk; element access is unchecked.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const cplx> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> entries() const noexcept { return data_; }
  std::span<cplx> entries() noexcept { return data_; }

  double frobenius_norm() const;
  // Largest Euclidean norm over the rows.
  double max_row_norm() const;
  bool is_zero() const;

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;

  // Copies `block` into this matrix with its (0,0) entry at (row, col).
  void set_block(std::size_t row, std::size_t col, const ComplexMatrix& block);
  ComplexMatrix block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cplx s);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cplx s, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x);

// Vector helpers.
double norm2(std::span<const cplx> v);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // sum a_i b_i, no conjugation
cplx inner(std::span<const cplx> a, std::span<const cplx> b);  // a^* b
ComplexVector scaled(std::span<const cplx> v, cplx s);
bool all_finite(std::span<const cplx> v);

// Partial-pivoting LU, P A = L U. `singular` is set when a pivot falls below
// `pivot_floor` (1e2 * eps * max row norm); the factors are still usable for
// determinants and guarded solves.
struct LuFactorization {
  ComplexMatrix lu;
  std::vector<std::size_t> permutation;  // row i of PA is row permutation[i] of A
  bool singular = false;
  double pivot_floor = 0.0;
  int sign = 1;

  std::size_t size() const noexcept { return lu.rows(); }

  // A x = b. Throws SingularMatrix when `singular`.
  ComplexVector solve(std::span<const cplx> b) const;
  // A^* x = b. Throws SingularMatrix when `singular`.
  ComplexVector solve_adjoint(std::span<const cplx> b) const;
  // Like solve/solve_adjoint, but pivots below the floor are replaced by the
  // floor (inverse-iteration style) instead of failing.
  ComplexVector solve_guarded(std::span<const cplx> b) const;
  ComplexVector solve_adjoint_guarded(std::span<const cplx> b) const;

  cplx determinant() const;
};

LuFactorization lu_factor(const ComplexMatrix& a);
ComplexVector lu_solve(const ComplexMatrix& a, std::span<const cplx> b);

// Eigenvalues (with multiplicity) of a general complex matrix by Householder
// Hessenberg reduction and single-shift QR with Wilkinson shifts.
std::vector<cplx> eigenvalues_dense(const ComplexMatrix& a);

// Roots of sum_k c_k z^k (ascending coefficients, leading coefficient
// nonzero) as eigenvalues of the companion matrix.
std::vector<cplx> polynomial_roots(std::span<const cplx> coefficients);

// ||A^{-1}||_2 by power iteration on A^{-*} A^{-1} with one LU factorization,
// stopped when the estimate changes by <= 1e-14 relative (at most 2000 steps).
double inverse_operator_norm(const ComplexMatrix& a);
// ||A||_2 estimate by `iterations` power steps on A^* A.
double spectral_norm_estimate(const ComplexMatrix& a, int iterations = 20);

// Unit vector approximately spanning the (right, or left when `adjoint`)
// null space of a nearly singular square matrix: `steps` rounds of guarded
// inverse iteration from a start vector drawn from `seed`.
ComplexVector inverse_iteration(const ComplexMatrix& a, bool adjoint, int steps, std::uint64_t seed);

// Independent real and imaginary parts N(0, 1/2), so E|z|^2 = 1.
ComplexMatrix gaussian_complex(Rng& rng, std::size_t rows, std::size_t cols);
ComplexMatrix gaussian_real(Rng& rng, std::size_t rows, std::size_t cols);
ComplexVector gaussian_complex_vector(Rng& rng, std::size_t n);

}  // namespace pep
