#include "pep/matpoly.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pep {

MatrixPolynomial::MatrixPolynomial(std::vector<ComplexMatrix> coefficients) : coefficients_(std::move(coefficients)) {
  if (coefficients_.size() < 2) {
    throw Error(ErrorKind::InvariantViolation, "matrix polynomial needs degree >= 1 (at least two coefficients)");
  }
  const std::size_t n = coefficients_.front().rows();
  if (n == 0) throw Error(ErrorKind::InvariantViolation, "matrix polynomial dimension must be >= 1");
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    const auto& a = coefficients_[k];
    if (a.rows() != n || a.cols() != n) {
      throw Error(ErrorKind::InvariantViolation, "coefficient A_" + std::to_string(k) + " is " +
                                                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                                     ", expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (!all_finite(a.entries())) {
      throw Error(ErrorKind::InvariantViolation, "coefficient A_" + std::to_string(k) + " has non-finite entries");
    }
  }
  if (coefficients_.back().is_zero()) {
    throw Error(ErrorKind::InvariantViolation, "leading coefficient A_m is the zero matrix");
  }
}

std::vector<double> MatrixPolynomial::coefficient_norms() const {
  std::vector<double> r;
  r.reserve(coefficients_.size());
  for (const auto& a : coefficients_) r.push_back(a.frobenius_norm());
  return r;
}

HomogeneousPoint HomogeneousPoint::make(cplx lambda0, cplx lambda1) {
  const double s = std::hypot(std::abs(lambda0), std::abs(lambda1));
  if (s == 0.0) throw Error(ErrorKind::InvariantViolation, "homogeneous point (0, 0)");
  return {lambda0 / s, lambda1 / s};
}

HomogeneousPoint HomogeneousPoint::from_affine(cplx lambda) { return make(lambda, 1.0); }

ComplexMatrix eval(const MatrixPolynomial& p, cplx lambda) {
  const std::size_t m = p.degree();
  ComplexMatrix r = p.coefficient(m);
  for (std::size_t k = m; k-- > 0;) {
    r *= lambda;
    r += p.coefficient(k);
  }
  return r;
}

ComplexMatrix eval_derivative(const MatrixPolynomial& p, cplx lambda) {
  const std::size_t m = p.degree();
  ComplexMatrix r = static_cast<double>(m) * p.coefficient(m);
  for (std::size_t k = m - 1; k >= 1; --k) {
    r *= lambda;
    r += static_cast<double>(k) * p.coefficient(k);
  }
  return r;
}

ComplexMatrix eval_homogeneous(const MatrixPolynomial& p, cplx lambda0, cplx lambda1) {
  const std::size_t m = p.degree();
  // Horner in lambda0 with lambda1 powers attached: sum_i l0^i l1^(m-i) A_i
  ComplexMatrix r = p.coefficient(m);
  cplx l1pow = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    l1pow *= lambda1;
    r *= lambda0;
    r += l1pow * p.coefficient(k);
  }
  return r;
}

ComplexMatrix eval_homogeneous(const MatrixPolynomial& p, const HomogeneousPoint& point) {
  return eval_homogeneous(p, point.lambda0, point.lambda1);
}

ComplexVector apply(const MatrixPolynomial& p, cplx lambda, std::span<const cplx> x) {
  const std::size_t m = p.degree();
  ComplexVector r = p.coefficient(m) * x;
  for (std::size_t k = m; k-- > 0;) {
    const ComplexVector ak = p.coefficient(k) * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] * lambda + ak[i];
  }
  return r;
}

ComplexVector apply_derivative(const MatrixPolynomial& p, cplx lambda, std::span<const cplx> x) {
  const std::size_t m = p.degree();
  ComplexVector r = scaled(p.coefficient(m) * x, static_cast<double>(m));
  for (std::size_t k = m - 1; k >= 1; --k) {
    const ComplexVector ak = p.coefficient(k) * x;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = r[i] * lambda + static_cast<double>(k) * ak[i];
  }
  return r;
}

GepPencil companion_gep(const MatrixPolynomial& p) {
  const std::size_t n = p.dim();
  const std::size_t m = p.degree();
  const std::size_t big = m * n;
  GepPencil g{ComplexMatrix(big, big), ComplexMatrix(big, big)};
  g.a.set_block(0, 0, p.coefficient(0));
  for (std::size_t i = n; i < big; ++i) g.a(i, i) = 1.0;
  for (std::size_t k = 1; k <= m; ++k) g.b.set_block(0, (k - 1) * n, -1.0 * p.coefficient(k));
  for (std::size_t blk = 1; blk < m; ++blk) {
    for (std::size_t i = 0; i < n; ++i) g.b(blk * n + i, (blk - 1) * n + i) = 1.0;
  }
  return g;
}

GepPencil companion_forms_qep(const MatrixPolynomial& q, const ComplexMatrix& n_matrix, CompanionForm form) {
  if (q.degree() != 2) throw Error(ErrorKind::InvariantViolation, "companion forms require a quadratic");
  const std::size_t n = q.dim();
  if (n_matrix.rows() != n || n_matrix.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "companion forms: N must be n x n");
  }
  if (lu_factor(n_matrix).singular) throw Error(ErrorKind::SingularMatrix, "companion forms: N is singular");
  const ComplexMatrix& k = q.coefficient(0);
  const ComplexMatrix& c = q.coefficient(1);
  const ComplexMatrix& m = q.coefficient(2);
  GepPencil g{ComplexMatrix(2 * n, 2 * n), ComplexMatrix(2 * n, 2 * n)};
  if (form == CompanionForm::L1) {
    g.a.set_block(0, n, n_matrix);
    g.a.set_block(n, 0, -1.0 * k);
    g.a.set_block(n, n, -1.0 * c);
    g.b.set_block(0, 0, n_matrix);
    g.b.set_block(n, n, m);
  } else {
    g.a.set_block(0, 0, -1.0 * k);
    g.a.set_block(n, n, n_matrix);
    g.b.set_block(0, 0, c);
    g.b.set_block(0, n, m);
    g.b.set_block(n, 0, n_matrix);
  }
  return g;
}

std::vector<cplx> det_interpolation_oracle(const MatrixPolynomial& p) {
  const std::size_t deg = p.eigenvalue_count();
  if (deg > 64) {
    throw Error(ErrorKind::OracleScaleExceeded, "det oracle limited to mn <= 64, got " + std::to_string(deg));
  }
  const std::size_t nodes = deg + 1;
  std::vector<cplx> values(nodes);
  std::vector<cplx> w(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    w[j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(nodes));
    values[j] = lu_factor(eval(p, w[j])).determinant();
  }
  // Vandermonde on roots of unity: V^{-1} = V^* / N, so c_k = (1/N) sum_j d_j w_j^{-k}.
  std::vector<cplx> coeffs(nodes);
  for (std::size_t k = 0; k < nodes; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < nodes; ++j) s += values[j] * std::conj(w[(j * k) % nodes]);
    coeffs[k] = s / static_cast<double>(nodes);
  }
  return coeffs;
}

std::vector<cplx> det_interpolation_roots(const MatrixPolynomial& p, bool polish) {
  std::vector<cplx> coeffs = det_interpolation_oracle(p);
  std::vector<cplx> roots = polynomial_roots(coeffs);
  if (!polish) return roots;
  const std::size_t n = p.dim();
  for (auto& r : roots) {
    for (int it = 0; it < 4; ++it) {
      const LuFactorization f = lu_factor(eval(p, r));
      if (f.singular) break;
      const ComplexMatrix dp = eval_derivative(p, r);
      // tr(P^{-1} P') column by column
      cplx tr = 0.0;
      ComplexVector col(n);
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = dp(i, j);
        tr += f.solve(col)[j];
      }
      if (tr == cplx(0.0, 0.0)) break;
      const cplx step = 1.0 / tr;
      if (std::abs(step) > 1e-3 * (1.0 + std::abs(r))) break;
      r -= step;
      if (std::abs(step) <= 1e-15 * (1.0 + std::abs(r))) break;
    }
  }
  return roots;
}

}  // namespace pep
