#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pep/chart.hpp"
#include "pep/matpoly.hpp"
#include "pep/solution.hpp"

namespace pep {

// Start system S(z) = ((sum_k lambda^k D_k) x, L(x)) with diagonal D_k.
struct StartSystem {
  std::size_t degree = 0;
  std::size_t dim = 0;
  // diagonals[k][i] = d_{k,i}, k = 0..m
  std::vector<ComplexVector> diagonals;
  // roots[j][i] = r_{j,i}, j = 0..m-1: the m roots of sum_k lambda^k d_{k,i}
  std::vector<ComplexVector> roots;
  AffineChart chart;

  // sum_k lambda^k d_{k,i} and its derivative.
  cplx diagonal_value(std::size_t i, cplx lambda) const;
  cplx diagonal_derivative(std::size_t i, cplx lambda) const;

  // The start system viewed as a matrix polynomial with diagonal coefficients.
  MatrixPolynomial as_polynomial() const;
};

// Draws the chart, then Gaussian diagonals whose roots come from companion
// eigenvalues. Resamples (at most 10 attempts) until every chart coefficient
// is nonzero and all mn roots are pairwise distinct; throws StartDegenerate
// when that fails.
StartSystem make_start_system(std::size_t degree, std::size_t dim, Rng& rng);

// Diagonals given explicitly (roots computed, no resampling); used for
// hand-built start systems. Throws StartDegenerate on a zero leading entry.
StartSystem make_start_system(std::vector<ComplexVector> diagonals, AffineChart chart);

struct StartPoint {
  std::size_t root_index;  // j
  std::size_t coordinate;  // i
  SolutionPoint z;
};

// The mn closed-form start solutions: lambda = r_{j,i}, x = e_i / a_i.
// Throws StartDegenerate if some chart coefficient a_i is zero.
std::vector<StartPoint> enumerate_start_solutions(const StartSystem& s);

struct HomotopyEvaluation {
  ComplexVector residual;   // length n+1
  ComplexMatrix jacobian;   // (n+1) x (n+1), derivative in z = (x, lambda)
};

// H(z,t) = (1-t) gamma S(z) + t T(z) on the first n rows; the chart row L(x)
// is shared by S and T and stays unweighted.
HomotopyEvaluation homotopy_residual_and_jacobian(const MatrixPolynomial& p, const StartSystem& s,
                                                  const SolutionPoint& z, double t, cplx gamma);

struct RefineResult {
  SolutionPoint z;
  double residual = 0.0;  // ||f(z')||_2 for f = (P(lambda) x, L(x))
  int iterations = 0;
};

// Newton on the target system until the step is <= 1e-14 (1 + ||z||) or
// max_iters is reached. Throws SingularJacobian if a Jacobian is singular.
RefineResult newton_refine(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                           int max_iters);

// Scaled target residual ||T(z)|| / (1 + sum_k |lambda|^k ||A_k||_F).
double scaled_target_residual(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z);

// Predictor (RK4 on the Davidenko equation) / corrector (Newton) tracking
// from t = 0 to t = 1, then endpoint refinement. Never throws on path
// failure; the status records it.
PathOutcome track_path(const MatrixPolynomial& p, const StartSystem& s, const StartPoint& start,
                       const TrackerConfig& config);

// Path kernels over all start points. The serial version is the reference
// implementation; the OpenMP version must produce identical outcomes.
std::vector<PathOutcome> track_paths_serial(const MatrixPolynomial& p, const StartSystem& s,
                                            const std::vector<StartPoint>& starts, const TrackerConfig& config);
std::vector<PathOutcome> track_paths_parallel(const MatrixPolynomial& p, const StartSystem& s,
                                              const std::vector<StartPoint>& starts, const TrackerConfig& config,
                                              int threads);

// Full solver. threads == 1 uses the serial kernel, 0 means all cores.
// Draws chart, start system and gamma from `seed`.
SolveResult solve_homotopy(const MatrixPolynomial& p, std::uint64_t seed, const TrackerConfig& config = {},
                           int threads = 1);

// Rng stream for one purpose derived from a user seed.
Rng seeded_stream(std::uint64_t seed, std::uint64_t stream);

}  // namespace pep
