#pragma once

#include <cmath>
#include <string_view>
#include <vector>

#include "pep/chart.hpp"
#include "pep/matpoly.hpp"

namespace pep {

// Smale alpha-theory test for the system f(x, lambda) = (P(lambda) x, L(x)).

inline const double kAlphaThreshold = (13.0 - 3.0 * std::sqrt(17.0)) / 4.0;  // ~0.157671

// Which matrix mu inverts.
//   Corollary:      [P/s  P'x; a^T/s  0]      first n columns scaled (default)
//   DegreeWeighted: [P/s  P'x/s; a^T  0]      Delta_(d)^{-1} Df, rows scaled by
//                                             per-equation degree (chart has degree 1)
// with s = sqrt(m+1) (1 + ||z||^2)^{m/2}. The two agree only up to row/column
// scaling; see README.
enum class MuVariant { Corollary, DegreeWeighted };

struct CertificationReport {
  double beta = 0.0;
  double mu = 1.0;
  double gamma_upper = 0.0;
  double alpha_upper = 0.0;
  bool certified = false;
  // Jacobian singular at z; the bounds are meaningless and certified is false.
  bool degenerate = false;
  double threshold = kAlphaThreshold;
  MuVariant variant = MuVariant::Corollary;

  // No interval arithmetic anywhere; the bound is a floating-point estimate.
  static constexpr std::string_view disclaimer =
      "alpha bound in floating point without directed rounding (beta with an extended-precision residual)";
};

// [ ||L||^2 + sum_k k!(m-k)!/(m+1)! ||A_k||_F^2 ]^{1/2}
double system_norm(const MatrixPolynomial& p, const AffineChart& chart);

// max{1, ||f|| * ||M^{-1}||_2} with M chosen by `variant`.
double mu(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
          MuVariant variant = MuVariant::Corollary);

// mu (m+1)^{3/2} / (2 (1 + ||z||^2)^{1/2}); d_max = m + 1 dominates the chart's degree 1.
double gamma_upper_from_mu(double mu_value, std::size_t degree, double z_norm);
double gamma_upper(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                   MuVariant variant = MuVariant::Corollary);

// ||Df(z)^{-1} f(z)||_2 with f(z) evaluated in extended precision (the
// residual at a refined point is pure cancellation). Zero when f(z) is
// exactly zero.
double beta(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z);

// beta(z), beta(N(z)), ..., beta(N^k(z)) with the Newton iterates kept in
// extended precision, so the sequence reflects Newton's method rather than
// rounding of the iterates back to double.
std::vector<double> newton_beta_sequence(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                                         int iterations);

CertificationReport certify(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                            MuVariant variant = MuVariant::Corollary);

}  // namespace pep
