#include "pep/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pep {

namespace {

double factorial(std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 2; i <= k; ++i) r *= static_cast<double>(i);
  return r;
}

bool exactly_zero(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(), [](cplx c) { return c == cplx(0.0, 0.0); });
}

using xcplx = std::complex<long double>;

struct ExtendedPoint {
  std::vector<xcplx> x;
  xcplx lambda;
};

ExtendedPoint extend(const SolutionPoint& z) {
  ExtendedPoint e;
  e.x.assign(z.x.begin(), z.x.end());
  e.lambda = xcplx(z.lambda);
  return e;
}

SolutionPoint round_to_double(const ExtendedPoint& e) {
  SolutionPoint z;
  z.x.reserve(e.x.size());
  for (const auto& v : e.x) z.x.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  z.lambda = cplx(static_cast<double>(e.lambda.real()), static_cast<double>(e.lambda.imag()));
  return z;
}

// f(z) = (P(lambda) x, L(x)) accumulated in long double.
ComplexVector extended_residual(const MatrixPolynomial& p, const AffineChart& chart, const ExtendedPoint& z) {
  const std::size_t n = p.dim();
  const std::size_t m = p.degree();
  std::vector<xcplx> acc(n, xcplx(0.0L, 0.0L));
  for (std::size_t k = m + 1; k-- > 0;) {
    const ComplexMatrix& a = p.coefficient(k);
    for (std::size_t i = 0; i < n; ++i) {
      xcplx s(0.0L, 0.0L);
      for (std::size_t j = 0; j < n; ++j) s += xcplx(a(i, j)) * z.x[j];
      acc[i] = acc[i] * z.lambda + s;
    }
  }
  xcplx l(chart.constant);
  for (std::size_t j = 0; j < n; ++j) l += xcplx(chart.coefficients[j]) * z.x[j];
  ComplexVector f;
  f.reserve(n + 1);
  for (const auto& v : acc) f.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  f.emplace_back(static_cast<double>(l.real()), static_cast<double>(l.imag()));
  return f;
}

// Newton step -Df^{-1} f at an extended point; Jacobian in double.
ComplexVector extended_step(const MatrixPolynomial& p, const AffineChart& chart, const ExtendedPoint& z) {
  ComplexVector f = extended_residual(p, chart, z);
  if (exactly_zero(f)) return ComplexVector(f.size(), 0.0);
  const LuFactorization lu = lu_factor(target_jacobian(p, chart, round_to_double(z)));
  if (lu.singular) throw Error(ErrorKind::SingularJacobian, "target Jacobian is singular at z");
  for (auto& v : f) v = -v;
  return lu.solve(f);
}

}  // namespace

double system_norm(const MatrixPolynomial& p, const AffineChart& chart) {
  const std::size_t m = p.degree();
  const double denom = factorial(m + 1);
  double s = chart.norm_squared();
  for (std::size_t k = 0; k <= m; ++k) {
    const double fa = p.coefficient(k).frobenius_norm();
    s += factorial(k) * factorial(m - k) / denom * fa * fa;
  }
  return std::sqrt(s);
}

double mu(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z, MuVariant variant) {
  const std::size_t n = p.dim();
  const std::size_t m = p.degree();
  const double zn = z.norm();
  const double s = std::sqrt(static_cast<double>(m + 1)) * std::pow(1.0 + zn * zn, 0.5 * static_cast<double>(m));

  ComplexMatrix mat = target_jacobian(p, chart, z);
  if (variant == MuVariant::Corollary) {
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) mat(i, j) /= s;
  } else {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= n; ++j) mat(i, j) /= s;
  }
  double inv_norm = 0.0;
  try {
    inv_norm = inverse_operator_norm(mat);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SingularMatrix) throw Error(ErrorKind::SingularJacobian, "mu: matrix is singular");
    throw;
  }
  return std::max(1.0, system_norm(p, chart) * inv_norm);
}

double gamma_upper_from_mu(double mu_value, std::size_t degree, double z_norm) {
  const double dmax = static_cast<double>(degree + 1);
  return mu_value * std::pow(dmax, 1.5) / (2.0 * std::sqrt(1.0 + z_norm * z_norm));
}

double gamma_upper(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z, MuVariant variant) {
  return gamma_upper_from_mu(mu(p, chart, z, variant), p.degree(), z.norm());
}

double beta(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z) {
  return norm2(extended_step(p, chart, extend(z)));
}

std::vector<double> newton_beta_sequence(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                                         int iterations) {
  ExtendedPoint e = extend(z);
  std::vector<double> betas;
  for (int k = 0; k <= iterations; ++k) {
    const ComplexVector d = extended_step(p, chart, e);
    betas.push_back(norm2(d));
    for (std::size_t i = 0; i < e.x.size(); ++i) e.x[i] += xcplx(d[i]);
    e.lambda += xcplx(d.back());
  }
  return betas;
}

CertificationReport certify(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                            MuVariant variant) {
  CertificationReport r;
  r.variant = variant;
  try {
    r.beta = beta(p, chart, z);
    r.mu = mu(p, chart, z, variant);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularJacobian) throw;
    r.degenerate = true;
    r.certified = false;
    r.mu = std::max(r.mu, 1.0);
    r.gamma_upper = std::numeric_limits<double>::infinity();
    r.alpha_upper = std::numeric_limits<double>::infinity();
    return r;
  }
  r.gamma_upper = gamma_upper_from_mu(r.mu, p.degree(), z.norm());
  r.alpha_upper = r.beta * r.gamma_upper;
  r.certified = r.alpha_upper < r.threshold;
  return r;
}

}  // namespace pep
