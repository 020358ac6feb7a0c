#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pep/diagnostics.hpp"
#include "pep/matpoly.hpp"
#include "pep/solution.hpp"

namespace pep {

struct LinearizationOptions {
  // Weights of the backward error used to pick the recovery block.
  WeightMode block_weights = WeightMode::Relative;
  int threads = 1;
  // Seeds the Moebius shifts used when A_m is singular.
  std::uint64_t seed = 0;
};

// Standard-form block companion matrix of size mn acting on
// v = (x, lambda x, ..., lambda^(m-1) x): identity blocks on the first block
// superdiagonal and last block row (-A_m^{-1} A_0, ..., -A_m^{-1} A_{m-1}).
// It equals B^{-1} A of the companion pencil. Throws SingularLeadingCoefficient.
ComplexMatrix companion_matrix(const MatrixPolynomial& p);

struct BlockRecovery {
  ComplexVector x;                  // unit norm, phase fixed
  std::size_t block = 0;            // selected n-block of the companion vector
  std::vector<double> block_errors; // backward error of every block
};

// Splits a companion eigenvector into its m blocks and keeps the one with the
// smallest backward error for P at lambda.
BlockRecovery recover_from_companion_vector(const MatrixPolynomial& p, std::span<const cplx> v, cplx lambda,
                                            const BackwardErrorWeights& weights);

// Unit x minimizing ||P(lambda) x|| from two guarded inverse-iteration steps.
// Throws NotAnEigenvalue when ||P(lambda) x|| > 1e-6 ||P(lambda)||_F.
ComplexVector recover_eigenvector(const MatrixPolynomial& p, cplx lambda);

// Companion linearization solved as a standard eigenproblem (Hessenberg QR),
// eigenvectors by inverse iteration on the companion matrix and best-block
// recovery. When A_m is singular, solves nu^m P(sigma + 1/nu) instead
// (sigma = 0 first, then two random unit shifts); eigenvalues with nu ~ 0 lie
// at infinity and are dropped. Throws SingularLeadingCoefficient if every
// attempt has a singular leading coefficient.
SolveResult solve_linearization(const MatrixPolynomial& p, const LinearizationOptions& options = {});

// nu^m P(sigma + 1/nu), whose leading coefficient is P(sigma).
MatrixPolynomial moebius_transform(const MatrixPolynomial& p, cplx sigma);

}  // namespace pep
