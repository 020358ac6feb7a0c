#include "pep/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace pep {

namespace {

constexpr std::uint64_t kLeftSeed = 0x1ef7ULL;

std::vector<cplx> powers(cplx z, std::size_t m) {
  std::vector<cplx> r(m + 1);
  r[0] = 1.0;
  for (std::size_t k = 1; k <= m; ++k) r[k] = r[k - 1] * z;
  return r;
}

}  // namespace

BackwardErrorWeights BackwardErrorWeights::absolute(std::size_t degree) { return {std::vector<double>(degree + 1, 1.0)}; }

BackwardErrorWeights BackwardErrorWeights::relative(const MatrixPolynomial& p, NormKind norm) {
  BackwardErrorWeights w;
  for (const auto& a : p.coefficients()) {
    w.alpha.push_back(norm == NormKind::Frobenius ? a.frobenius_norm() : spectral_norm_estimate(a));
  }
  return w;
}

BackwardErrorWeights BackwardErrorWeights::make(const MatrixPolynomial& p, WeightMode mode) {
  return mode == WeightMode::Absolute ? absolute(p.degree()) : relative(p);
}

double backward_error(const MatrixPolynomial& p, std::span<const cplx> x, cplx lambda,
                      const BackwardErrorWeights& weights) {
  if (weights.alpha.size() != p.degree() + 1) throw Error(ErrorKind::DimensionMismatch, "backward error weights");
  if (x.size() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "backward error vector length");
  const double nx = norm2(x);
  if (nx == 0.0) throw Error(ErrorKind::ZeroVector, "backward error of a zero vector");
  double denom = 0.0;
  double lp = 1.0;
  for (std::size_t k = 0; k <= p.degree(); ++k, lp *= std::abs(lambda)) denom += lp * weights.alpha[k];
  if (!(denom > 0.0)) throw Error(ErrorKind::ZeroDenominator, "backward error denominator vanishes");
  return norm2(apply(p, lambda, x)) / (denom * nx);
}

ComplexVector left_eigenvector(const MatrixPolynomial& p, cplx lambda) {
  const ComplexMatrix pl = eval(p, lambda);
  ComplexVector y = inverse_iteration(pl, true, 2, kLeftSeed);
  const double res = norm2(pl.adjoint() * std::span<const cplx>(y));
  if (res > 1e-6 * pl.frobenius_norm()) {
    throw Error(ErrorKind::NotAnEigenvalue, "left residual " + std::to_string(res) + " too large");
  }
  return y;
}

ConditionWeights ConditionWeights::unit(std::size_t degree) { return {std::vector<double>(degree + 1, 1.0)}; }

ConditionWeights ConditionWeights::coefficient_norms(const MatrixPolynomial& p) { return {p.coefficient_norms()}; }

ConditionWeights ConditionWeights::make(const MatrixPolynomial& p, WeightMode mode) {
  return mode == WeightMode::Absolute ? unit(p.degree()) : coefficient_norms(p);
}

double condition_number(const MatrixPolynomial& p, const HomogeneousPoint& eigenvalue, std::span<const cplx> x,
                        std::span<const cplx> y, const ConditionWeights& weights) {
  const std::size_t m = p.degree();
  const std::size_t n = p.dim();
  if (weights.omega.size() != m + 1) throw Error(ErrorKind::DimensionMismatch, "condition weights");
  if (x.size() != n || y.size() != n) throw Error(ErrorKind::DimensionMismatch, "condition vectors");
  if (std::any_of(weights.omega.begin(), weights.omega.end(), [](double w) { return !(w > 0.0); })) {
    throw Error(ErrorKind::InvariantViolation, "condition weights must be positive");
  }
  const cplx l0 = eigenvalue.lambda0;
  const cplx l1 = eigenvalue.lambda1;
  const std::vector<cplx> p0 = powers(l0, m);
  const std::vector<cplx> p1 = powers(l1, m);

  double num2 = 0.0;
  for (std::size_t i = 0; i <= m; ++i) {
    num2 += std::norm(p0[i]) * std::norm(p1[m - i]) * weights.omega[i] * weights.omega[i];
  }

  // D = conj(l1) d/dl0 P - conj(l0) d/dl1 P
  ComplexMatrix d(n, n);
  for (std::size_t i = 0; i <= m; ++i) {
    cplx c = 0.0;
    if (i >= 1) c += std::conj(l1) * static_cast<double>(i) * p0[i - 1] * p1[m - i];
    if (i < m) c -= std::conj(l0) * static_cast<double>(m - i) * p0[i] * p1[m - i - 1];
    if (c != cplx(0.0, 0.0)) d += c * p.coefficient(i);
  }
  const cplx den = inner(y, d * x);
  const double nx = norm2(x);
  const double ny = norm2(y);
  if (std::abs(den) <= 1e-12 * nx * ny * d.frobenius_norm()) {
    throw Error(ErrorKind::ZeroDenominator, "eigenvalue is not simple (vanishing denominator)");
  }
  return std::sqrt(num2) * nx * ny / std::abs(den);
}

MatrixPolynomial pencil_polynomial(const GepPencil& pencil) {
  return MatrixPolynomial({pencil.a, -1.0 * pencil.b});
}

double gep_condition_number(const GepPencil& pencil, cplx lambda, std::span<const cplx> right,
                            std::span<const cplx> left) {
  const MatrixPolynomial lin = pencil_polynomial(pencil);
  const ConditionWeights w{{pencil.a.frobenius_norm(), pencil.b.frobenius_norm()}};
  return condition_number(lin, HomogeneousPoint::from_affine(lambda), right, left, w);
}

double gep_condition_number(const GepPencil& pencil, cplx lambda) {
  const MatrixPolynomial lin = pencil_polynomial(pencil);
  const ComplexMatrix pl = eval(lin, lambda);
  const ComplexVector right = inverse_iteration(pl, false, 2, kLeftSeed + 1);
  const ComplexVector left = left_eigenvector(lin, lambda);
  if (norm2(pl * std::span<const cplx>(right)) > 1e-6 * pl.frobenius_norm()) {
    throw Error(ErrorKind::NotAnEigenvalue, "pencil right residual too large");
  }
  return gep_condition_number(pencil, lambda, right, left);
}

double rho(const MatrixPolynomial& p) {
  double top = 0.0;
  std::vector<double> norms;
  for (const auto& a : p.coefficients()) {
    norms.push_back(spectral_norm_estimate(a, 20));
    top = std::max(top, norms.back());
  }
  const double low = std::min(norms.front(), norms.back());
  if (!(low > 0.0)) throw Error(ErrorKind::ZeroDenominator, "rho: A_0 or A_m is zero");
  return top / low;
}

}  // namespace pep
