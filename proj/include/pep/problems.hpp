#pragma once

#include <cstddef>
#include <cstdint>

#include "pep/matpoly.hpp"

namespace pep {

enum class Field { Complex, Real };

// m+1 coefficient matrices with i.i.d. standard Gaussian entries
// (N_C(0,1) or N_R(0,1)), deterministic per seed.
MatrixPolynomial random_pep(std::size_t degree, std::size_t dim, std::uint64_t seed, Field field = Field::Complex);

// lambda^2 M + lambda (2^k C) + K
MatrixPolynomial damped_qep(const ComplexMatrix& m, const ComplexMatrix& c, const ComplexMatrix& k, int scale_exponent);

// Damped family member from real Gaussian M, C, K drawn from `seed`; the same
// seed gives the same M, C, K for every k.
MatrixPolynomial damped_family(std::size_t dim, int scale_exponent, std::uint64_t seed);

// One-dimensional acoustic wave QEP (finite elements on [0,1], Dirichlet
// left, impedance right):
//   M = -4 pi^2 / n (I - e_n e_n^T / 2),  C = 2 pi i / zeta e_n e_n^T,
//   K = n tridiag(-1, 2, -1) with K_nn = n.
MatrixPolynomial acoustic_wave_qep(std::size_t dim, cplx zeta = 1.0);

}  // namespace pep
