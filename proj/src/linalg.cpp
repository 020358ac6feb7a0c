#include "pep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace pep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& a, const char* what) {
  if (!a.is_square()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// Pivot used by guarded solves: tiny pivots are pushed out to the floor,
// keeping their phase.
cplx guarded_pivot(cplx p, double floor) {
  const double mag = std::abs(p);
  if (mag >= floor && mag > 0.0) return p;
  const double f = floor > 0.0 ? floor : std::numeric_limits<double>::min();
  return mag > 0.0 ? p * (f / mag) : cplx(f, 0.0);
}

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::OracleScaleExceeded: return "OracleScaleExceeded";
    case ErrorKind::StartDegenerate: return "StartDegenerate";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::ZeroDenominator: return "ZeroDenominator";
    case ErrorKind::SingularLeadingCoefficient: return "SingularLeadingCoefficient";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::DimensionMismatch, "matrix entry count " + std::to_string(data_.size()) +
                                                  " does not match shape " + std::to_string(rows_) + "x" +
                                                  std::to_string(cols_));
  }
  if (!all_finite(data_)) throw Error(ErrorKind::NonFinite, "matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

double ComplexMatrix::max_row_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    best = std::max(best, norm2(std::span<const cplx>(data_).subspan(i * cols_, cols_)));
  }
  return best;
}

bool ComplexMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](cplx z) { return z == cplx(0.0, 0.0); });
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

void ComplexMatrix::set_block(std::size_t row, std::size_t col, const ComplexMatrix& block) {
  if (row + block.rows() > rows_ || col + block.cols() > cols_) {
    throw Error(ErrorKind::DimensionMismatch, "set_block out of range");
  }
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) (*this)(row + i, col + j) = block(i, j);
}

ComplexMatrix ComplexMatrix::block(std::size_t row, std::size_t col, std::size_t rows, std::size_t cols) const {
  if (row + rows > rows_ || col + cols > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of range");
  ComplexMatrix r(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) r(i, j) = (*this)(row + i, col + j);
  return r;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) throw Error(ErrorKind::DimensionMismatch, "matrix -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator*(cplx s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

ComplexVector operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  if (a.cols() != x.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double norm2(std::span<const cplx> v) {
  // Scaled accumulation, safe against overflow for large residuals.
  double scale = 0.0;
  double ssq = 1.0;
  for (const cplx& z : v) {
    for (double part : {z.real(), z.imag()}) {
      if (part == 0.0) continue;
      const double a = std::abs(part);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexVector scaled(std::span<const cplx> v, cplx s) {
  ComplexVector r(v.begin(), v.end());
  for (auto& z : r) z *= s;
  return r;
}

bool all_finite(std::span<const cplx> v) {
  return std::all_of(v.begin(), v.end(),
                     [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

// ---------------------------------------------------------------------------
// LU

LuFactorization lu_factor(const ComplexMatrix& a) {
  require_square(a, "lu_factor");
  const std::size_t n = a.rows();
  LuFactorization f;
  f.lu = a;
  f.permutation.resize(n);
  std::iota(f.permutation.begin(), f.permutation.end(), std::size_t{0});
  f.pivot_floor = 1e2 * kEps * a.max_row_norm();

  ComplexMatrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(m(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(m(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      std::swap(f.permutation[k], f.permutation[p]);
      f.sign = -f.sign;
    }
    if (best < f.pivot_floor || best == 0.0) {
      f.singular = true;
      if (best == 0.0) continue;  // column already eliminated
    }
    const cplx inv = 1.0 / m(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx l = m(i, k) * inv;
      m(i, k) = l;
      if (l == cplx(0.0, 0.0)) continue;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= l * m(k, j);
    }
  }
  return f;
}

namespace {

ComplexVector lu_forward_backward(const LuFactorization& f, std::span<const cplx> b, bool guarded) {
  const std::size_t n = f.size();
  if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "lu solve: rhs length");
  const ComplexMatrix& m = f.lu;
  ComplexVector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = b[f.permutation[i]];
    for (std::size_t j = 0; j < i; ++j) s -= m(i, j) * y[j];
    y[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = y[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * y[j];
    const cplx piv = guarded ? guarded_pivot(m(ii, ii), f.pivot_floor) : m(ii, ii);
    y[ii] = s / piv;
  }
  return y;
}

// Solves A^* x = b with P A = L U, i.e. U^* L^* P x = b.
ComplexVector lu_adjoint_solve(const LuFactorization& f, std::span<const cplx> b, bool guarded) {
  const std::size_t n = f.size();
  if (b.size() != n) throw Error(ErrorKind::DimensionMismatch, "lu adjoint solve: rhs length");
  const ComplexMatrix& m = f.lu;
  ComplexVector w(b.begin(), b.end());
  // U^* w' = b (lower triangular with conj(U)^T)
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = w[i];
    for (std::size_t j = 0; j < i; ++j) s -= std::conj(m(j, i)) * w[j];
    const cplx piv = guarded ? guarded_pivot(m(i, i), f.pivot_floor) : m(i, i);
    w[i] = s / std::conj(piv);
  }
  // L^* v = w' (unit upper triangular)
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = w[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= std::conj(m(j, ii)) * w[j];
    w[ii] = s;
  }
  ComplexVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.permutation[i]] = w[i];
  return x;
}

}  // namespace

ComplexVector LuFactorization::solve(std::span<const cplx> b) const {
  if (singular) throw Error(ErrorKind::SingularMatrix, "pivot below floor");
  return lu_forward_backward(*this, b, false);
}

ComplexVector LuFactorization::solve_adjoint(std::span<const cplx> b) const {
  if (singular) throw Error(ErrorKind::SingularMatrix, "pivot below floor");
  return lu_adjoint_solve(*this, b, false);
}

ComplexVector LuFactorization::solve_guarded(std::span<const cplx> b) const {
  return lu_forward_backward(*this, b, true);
}

ComplexVector LuFactorization::solve_adjoint_guarded(std::span<const cplx> b) const {
  return lu_adjoint_solve(*this, b, true);
}

cplx LuFactorization::determinant() const {
  cplx d = static_cast<double>(sign);
  for (std::size_t i = 0; i < size(); ++i) d *= lu(i, i);
  return d;
}

ComplexVector lu_solve(const ComplexMatrix& a, std::span<const cplx> b) {
  require_square(a, "lu_solve");
  if (b.size() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "lu_solve: rhs length");
  return lu_factor(a).solve(b);
}

// ---------------------------------------------------------------------------
// Eigenvalues

namespace {

// Reduces h to upper Hessenberg form in place by Householder reflections.
void hessenberg_reduce(ComplexMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  ComplexVector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t len = n - k - 1;
    double alpha_norm = 0.0;
    for (std::size_t i = 0; i < len; ++i) v[i] = h(k + 1 + i, k);
    alpha_norm = norm2(std::span<const cplx>(v.data(), len));
    if (alpha_norm == 0.0) continue;
    const cplx x0 = v[0];
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    const cplx alpha = -phase * alpha_norm;
    v[0] -= alpha;
    const double vnorm = norm2(std::span<const cplx>(v.data(), len));
    if (vnorm == 0.0) continue;
    for (std::size_t i = 0; i < len; ++i) v[i] /= vnorm;

    // h <- (I - 2 v v^*) h on rows k+1..n-1
    for (std::size_t j = k; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * h(k + 1 + i, j);
      s *= 2.0;
      for (std::size_t i = 0; i < len; ++i) h(k + 1 + i, j) -= v[i] * s;
    }
    // h <- h (I - 2 v v^*) on columns k+1..n-1
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < len; ++j) s += h(i, k + 1 + j) * v[j];
      s *= 2.0;
      for (std::size_t j = 0; j < len; ++j) h(i, k + 1 + j) -= s * std::conj(v[j]);
    }
    h(k + 1, k) = alpha;
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

// Complex Givens rotation G = [c s; -conj(s) c] with G [x; y] = [r; 0].
struct Givens {
  double c;
  cplx s;
};

Givens make_givens(cplx x, cplx y) {
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ay == 0.0) return {1.0, 0.0};
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double r = std::hypot(ax, ay);
  return {ax / r, (x / ax) * std::conj(y) / r};
}

cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  // eigenvalue of [a b; c d] closest to d
  const cplx half_tr = 0.5 * (a + d);
  const cplx disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  const cplx l1 = half_tr + disc;
  const cplx l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<cplx> eigenvalues_dense(const ComplexMatrix& a) {
  require_square(a, "eigenvalues_dense");
  const std::size_t n = a.rows();
  if (n == 0) return {};
  if (!all_finite(a.entries())) throw Error(ErrorKind::NonFinite, "eigenvalues_dense: non-finite input");
  if (n == 1) return {a(0, 0)};

  ComplexMatrix h = a;
  hessenberg_reduce(h);

  const std::size_t budget = 30 * n;
  std::size_t total = 0;
  std::size_t iter = 0;
  std::size_t iu = n - 1;
  const double tiny = std::numeric_limits<double>::min() / kEps;

  while (iu > 0) {
    std::size_t il = iu;
    while (il > 0) {
      const double sub = std::abs(h(il, il - 1));
      const double diag = std::abs(h(il - 1, il - 1)) + std::abs(h(il, il));
      if (sub <= kEps * diag || sub <= tiny) {
        h(il, il - 1) = 0.0;
        break;
      }
      --il;
    }
    if (il == iu) {
      --iu;
      iter = 0;
      continue;
    }
    if (++total > budget) {
      throw Error(ErrorKind::NoConvergence, "QR iteration exceeded " + std::to_string(budget) + " sweeps");
    }
    ++iter;

    cplx shift;
    if (iter == 10 || iter == 20) {
      // exceptional shift to break cycles
      shift = std::abs(h(iu, iu - 1).real()) + (iu >= 2 ? std::abs(h(iu - 1, iu - 2).real()) : 0.0);
      shift += h(iu, iu);
    } else {
      shift = wilkinson_shift(h(iu - 1, iu - 1), h(iu - 1, iu), h(iu, iu - 1), h(iu, iu));
    }

    // Implicit single-shift QR sweep on the active window il..iu.
    cplx x = h(il, il) - shift;
    cplx y = h(il + 1, il);
    for (std::size_t k = il; k < iu; ++k) {
      if (k > il) {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const Givens g = make_givens(x, y);
      const std::size_t jstart = k > il ? k - 1 : il;
      for (std::size_t j = jstart; j <= iu; ++j) {
        const cplx hk = h(k, j);
        const cplx hk1 = h(k + 1, j);
        h(k, j) = g.c * hk + g.s * hk1;
        h(k + 1, j) = -std::conj(g.s) * hk + g.c * hk1;
      }
      const std::size_t iend = std::min(k + 2, iu);
      for (std::size_t i = il; i <= iend; ++i) {
        const cplx hk = h(i, k);
        const cplx hk1 = h(i, k + 1);
        h(i, k) = g.c * hk + std::conj(g.s) * hk1;
        h(i, k + 1) = -g.s * hk + g.c * hk1;
      }
      if (k > il) h(k + 1, k - 1) = 0.0;
    }
  }

  std::vector<cplx> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = h(i, i);
  return eig;
}

std::vector<cplx> polynomial_roots(std::span<const cplx> coefficients) {
  if (coefficients.empty()) throw Error(ErrorKind::InvariantViolation, "polynomial_roots: no coefficients");
  const std::size_t deg = coefficients.size() - 1;
  const cplx lead = coefficients[deg];
  if (lead == cplx(0.0, 0.0)) throw Error(ErrorKind::InvariantViolation, "polynomial_roots: zero leading coefficient");
  if (deg == 0) return {};
  // companion: ones on the subdiagonal, last column -c_k / c_deg
  ComplexMatrix c(deg, deg);
  for (std::size_t i = 1; i < deg; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) c(i, deg - 1) = -coefficients[i] / lead;
  return eigenvalues_dense(c);
}

// ---------------------------------------------------------------------------
// Norm estimates

namespace {

ComplexVector deterministic_start(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVector v = gaussian_complex_vector(rng, n);
  const double nv = norm2(v);
  for (auto& z : v) z /= nv;
  return v;
}

}  // namespace

double inverse_operator_norm(const ComplexMatrix& a) {
  require_square(a, "inverse_operator_norm");
  const std::size_t n = a.rows();
  if (n == 0) throw Error(ErrorKind::DimensionMismatch, "inverse_operator_norm: empty matrix");
  const LuFactorization f = lu_factor(a);
  if (f.singular) throw Error(ErrorKind::SingularMatrix, "inverse_operator_norm: pivot below floor");

  ComplexVector v = deterministic_start(n, 0x5eedULL);
  double estimate = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const ComplexVector u = f.solve(v);  // A^{-1} v
    const double next = norm2(u);        // sqrt of Rayleigh quotient of A^{-*}A^{-1}
    ComplexVector w = f.solve_adjoint(u);
    const double nw = norm2(w);
    if (nw == 0.0 || !std::isfinite(nw)) break;
    for (auto& z : w) z /= nw;
    v = std::move(w);
    if (it > 0 && std::abs(next - estimate) <= 1e-14 * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  return estimate;
}

double spectral_norm_estimate(const ComplexMatrix& a, int iterations) {
  if (a.empty()) return 0.0;
  ComplexVector v = deterministic_start(a.cols(), 0x2a0ULL);
  const ComplexMatrix ah = a.adjoint();
  for (int it = 0; it < iterations; ++it) {
    const ComplexVector u = a * std::span<const cplx>(v);
    ComplexVector w = ah * std::span<const cplx>(u);
    const double nw = norm2(w);
    if (nw == 0.0) return 0.0;
    for (auto& z : w) z /= nw;
    v = std::move(w);
  }
  return norm2(a * std::span<const cplx>(v));
}

ComplexVector inverse_iteration(const ComplexMatrix& a, bool adjoint, int steps, std::uint64_t seed) {
  require_square(a, "inverse_iteration");
  const LuFactorization f = lu_factor(a);
  ComplexVector v = deterministic_start(a.rows(), seed);
  for (int s = 0; s < steps; ++s) {
    ComplexVector w = adjoint ? f.solve_adjoint_guarded(v) : f.solve_guarded(v);
    double nw = norm2(w);
    if (!std::isfinite(nw) || nw == 0.0) break;
    for (auto& z : w) z /= nw;
    v = std::move(w);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Sampling

ComplexMatrix gaussian_complex(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) {
    const double re = nd(rng);
    const double im = nd(rng);
    z = cplx(re, im);
  }
  return m;
}

ComplexMatrix gaussian_real(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (auto& z : m.entries()) z = cplx(nd(rng), 0.0);
  return m;
}

ComplexVector gaussian_complex_vector(Rng& rng, std::size_t n) {
  std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
  ComplexVector v(n);
  for (auto& z : v) {
    const double re = nd(rng);
    const double im = nd(rng);
    z = cplx(re, im);
  }
  return v;
}

}  // namespace pep
