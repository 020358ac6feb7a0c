#include "pep/chart.hpp"

#include <cmath>

namespace pep {

double AffineChart::norm_squared() const {
  const double a = norm2(coefficients);
  return a * a + std::norm(constant);
}

AffineChart make_chart(std::size_t n, Rng& rng) {
  AffineChart c;
  c.coefficients = gaussian_complex_vector(rng, n);
  c.constant = -1.0;
  return c;
}

double SolutionPoint::norm() const {
  const double nx = norm2(x);
  return std::hypot(nx, std::abs(lambda));
}

ComplexVector target_residual(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z) {
  ComplexVector r = apply(p, z.lambda, z.x);
  r.push_back(chart(z.x));
  return r;
}

ComplexMatrix target_jacobian(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z) {
  const std::size_t n = p.dim();
  ComplexMatrix j(n + 1, n + 1);
  j.set_block(0, 0, eval(p, z.lambda));
  const ComplexVector dpx = apply_derivative(p, z.lambda, z.x);
  for (std::size_t i = 0; i < n; ++i) {
    j(i, n) = dpx[i];
    j(n, i) = chart.coefficients[i];
  }
  return j;
}

SolutionPoint newton_correction(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z) {
  const std::size_t n = p.dim();
  ComplexVector f = target_residual(p, chart, z);
  const LuFactorization lu = lu_factor(target_jacobian(p, chart, z));
  if (lu.singular) throw Error(ErrorKind::SingularJacobian, "target Jacobian is singular at z");
  for (auto& v : f) v = -v;
  ComplexVector d = lu.solve(f);
  const cplx dl = d[n];
  d.pop_back();
  return {std::move(d), dl};
}

SolutionPoint project_to_chart(const AffineChart& chart, std::span<const cplx> x, cplx lambda) {
  const cplx ax = dot(chart.coefficients, x);
  if (ax == cplx(0.0, 0.0)) throw Error(ErrorKind::ZeroDenominator, "vector lies on the chart's hyperplane at infinity");
  // a.(s x) + a_0 = 0  ->  s = -a_0 / (a.x)
  return {scaled(x, -chart.constant / ax), lambda};
}

}  // namespace pep
