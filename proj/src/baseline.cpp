#include "pep/baseline.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pep/homotopy.hpp"

namespace pep {

namespace {

constexpr std::uint64_t kRightSeed = 0xb10cULL;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

ComplexMatrix companion_from_factor(const MatrixPolynomial& p, const LuFactorization& lead) {
  const std::size_t n = p.dim();
  const std::size_t m = p.degree();
  ComplexMatrix c(m * n, m * n);
  for (std::size_t blk = 0; blk + 1 < m; ++blk) {
    for (std::size_t i = 0; i < n; ++i) c(blk * n + i, (blk + 1) * n + i) = 1.0;
  }
  ComplexVector col(n);
  for (std::size_t k = 0; k < m; ++k) {
    const ComplexMatrix& a = p.coefficient(k);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) col[i] = a(i, j);
      const ComplexVector s = lead.solve(col);
      for (std::size_t i = 0; i < n; ++i) c((m - 1) * n + i, k * n + j) = -s[i];
    }
  }
  return c;
}

}  // namespace

ComplexMatrix companion_matrix(const MatrixPolynomial& p) {
  const LuFactorization lead = lu_factor(p.coefficient(p.degree()));
  if (lead.singular) throw Error(ErrorKind::SingularLeadingCoefficient, "A_m is singular");
  return companion_from_factor(p, lead);
}

MatrixPolynomial moebius_transform(const MatrixPolynomial& p, cplx sigma) {
  const std::size_t m = p.degree();
  const std::size_t n = p.dim();
  std::vector<ComplexMatrix> q(m + 1, ComplexMatrix(n, n));
  // A_k (1 + sigma nu)^k nu^(m-k): coefficient of nu^j is C(k, j-m+k) sigma^(j-m+k)
  for (std::size_t k = 0; k <= m; ++k) {
    for (std::size_t r = 0; r <= k; ++r) {
      const cplx c = binomial(k, r) * std::pow(sigma, static_cast<int>(r));
      if (c == cplx(0.0, 0.0)) continue;
      q[m - k + r] += c * p.coefficient(k);
    }
  }
  return MatrixPolynomial(std::move(q));
}

BlockRecovery recover_from_companion_vector(const MatrixPolynomial& p, std::span<const cplx> v, cplx lambda,
                                            const BackwardErrorWeights& weights) {
  const std::size_t n = p.dim();
  const std::size_t blocks = v.size() / n;
  if (blocks * n != v.size() || blocks == 0) throw Error(ErrorKind::DimensionMismatch, "companion vector length");
  BlockRecovery best;
  double best_err = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::span<const cplx> xb = v.subspan(b * n, n);
    double err = std::numeric_limits<double>::infinity();
    if (norm2(xb) > 0.0) err = backward_error(p, xb, lambda, weights);
    best.block_errors.push_back(err);
    if (err < best_err) {
      best_err = err;
      best.block = b;
    }
  }
  if (!std::isfinite(best_err)) throw Error(ErrorKind::ZeroVector, "companion vector has no usable block");
  best.x = normalize_eigenvector(v.subspan(best.block * n, n));
  return best;
}

ComplexVector recover_eigenvector(const MatrixPolynomial& p, cplx lambda) {
  const ComplexMatrix pl = eval(p, lambda);
  ComplexVector x = inverse_iteration(pl, false, 2, kRightSeed);
  const double res = norm2(pl * std::span<const cplx>(x));
  if (res > 1e-6 * pl.frobenius_norm()) {
    throw Error(ErrorKind::NotAnEigenvalue, "right residual " + std::to_string(res) + " too large");
  }
  return normalize_eigenvector(x);
}

SolveResult solve_linearization(const MatrixPolynomial& p, const LinearizationOptions& options) {
  const std::size_t n = p.dim();
  const std::size_t m = p.degree();

  // Pick the polynomial actually linearized and how to map its eigenvalues back.
  std::optional<MatrixPolynomial> work;
  cplx sigma = 0.0;
  bool transformed = false;
  {
    const LuFactorization lead = lu_factor(p.coefficient(m));
    if (!lead.singular) {
      work = p;
    } else {
      Rng rng = seeded_stream(options.seed, 7);
      std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
      for (int attempt = 0; attempt < 3 && !work; ++attempt) {
        const cplx s = attempt == 0 ? cplx(0.0, 0.0) : std::polar(1.0, angle(rng));
        if (lu_factor(eval(p, s)).singular) continue;
        work = moebius_transform(p, s);
        sigma = s;
        transformed = true;
      }
      if (!work) throw Error(ErrorKind::SingularLeadingCoefficient, "A_m singular and no Moebius shift helped");
    }
  }

  const ComplexMatrix c = companion_matrix(*work);
  const std::vector<cplx> mu = eigenvalues_dense(c);
  const BackwardErrorWeights weights = BackwardErrorWeights::make(p, options.block_weights);
  const std::size_t big = m * n;

  std::vector<std::optional<Eigenpair>> slots(mu.size());
  const auto count = static_cast<std::ptrdiff_t>(mu.size());
#ifdef _OPENMP
  const int nt = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt) if (options.threads != 1)
#endif
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const cplx nu = mu[static_cast<std::size_t>(idx)];
    cplx lambda = nu;
    if (transformed) {
      if (std::abs(nu) <= 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + c.frobenius_norm())) continue;
      lambda = sigma + 1.0 / nu;
    }
    // One LU of (C - (nu + delta) I), delta keeps the shift off the exact eigenvalue.
    ComplexMatrix shifted = c;
    const cplx shift = nu + 1e-12 * std::max(1.0, std::abs(nu));
    for (std::size_t i = 0; i < big; ++i) shifted(i, i) -= shift;
    const ComplexVector v = inverse_iteration(shifted, false, 2, kRightSeed + static_cast<std::uint64_t>(idx));
    const BlockRecovery rec = recover_from_companion_vector(p, v, lambda, weights);
    Eigenpair e;
    e.lambda = lambda;
    e.x = rec.x;
    e.method = Method::Linearization;
    slots[static_cast<std::size_t>(idx)] = std::move(e);
  }

  SolveResult result;
  result.seed = options.seed;
  Rng chart_rng = seeded_stream(options.seed, 1);
  result.chart = make_chart(n, chart_rng);
  for (auto& s : slots) {
    if (s) result.eigenpairs.push_back(std::move(*s));
  }
  sort_eigenpairs(result.eigenpairs);
  return result;
}

}  // namespace pep
