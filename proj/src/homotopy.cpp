#include "pep/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pep {

Rng seeded_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffULL), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x7e57u};
  return Rng(seq);
}

// ---------------------------------------------------------------------------
// Start system

cplx StartSystem::diagonal_value(std::size_t i, cplx lambda) const {
  cplx r = diagonals[degree][i];
  for (std::size_t k = degree; k-- > 0;) r = r * lambda + diagonals[k][i];
  return r;
}

cplx StartSystem::diagonal_derivative(std::size_t i, cplx lambda) const {
  cplx r = static_cast<double>(degree) * diagonals[degree][i];
  for (std::size_t k = degree - 1; k >= 1; --k) r = r * lambda + static_cast<double>(k) * diagonals[k][i];
  return r;
}

MatrixPolynomial StartSystem::as_polynomial() const {
  std::vector<ComplexMatrix> coeffs;
  coeffs.reserve(degree + 1);
  for (const auto& d : diagonals) coeffs.push_back(ComplexMatrix::diagonal(d));
  return MatrixPolynomial(std::move(coeffs));
}

namespace {

// Roots of one diagonal polynomial, polished by scalar Newton.
ComplexVector diagonal_roots(std::span<const cplx> coeffs) {
  ComplexVector roots = polynomial_roots(coeffs);
  for (auto& r : roots) {
    for (int it = 0; it < 3; ++it) {
      cplx f = coeffs.back();
      cplx df = 0.0;
      for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
        df = df * r + f;
        f = f * r + coeffs[k];
      }
      if (df == cplx(0.0, 0.0)) break;
      const cplx step = f / df;
      if (!(std::abs(step) <= 1e-6 * (1.0 + std::abs(r)))) break;
      r -= step;
    }
  }
  return roots;
}

void fill_roots(StartSystem& s) {
  s.roots.assign(s.degree, ComplexVector(s.dim));
  ComplexVector c(s.degree + 1);
  for (std::size_t i = 0; i < s.dim; ++i) {
    if (s.diagonals[s.degree][i] == cplx(0.0, 0.0)) {
      throw Error(ErrorKind::StartDegenerate, "zero leading diagonal entry d_{m," + std::to_string(i) + "}");
    }
    for (std::size_t k = 0; k <= s.degree; ++k) c[k] = s.diagonals[k][i];
    const ComplexVector r = diagonal_roots(c);
    for (std::size_t j = 0; j < s.degree; ++j) s.roots[j][i] = r[j];
  }
}

bool roots_distinct(const StartSystem& s) {
  std::vector<cplx> all;
  for (const auto& row : s.roots) all.insert(all.end(), row.begin(), row.end());
  for (std::size_t a = 0; a < all.size(); ++a)
    for (std::size_t b = a + 1; b < all.size(); ++b) {
      if (std::abs(all[a] - all[b]) <= 1e-8 * (1.0 + std::abs(all[a]))) return false;
    }
  return true;
}

bool roots_accurate(const StartSystem& s) {
  for (std::size_t i = 0; i < s.dim; ++i) {
    double dmax = 0.0;
    for (std::size_t k = 0; k <= s.degree; ++k) dmax = std::max(dmax, std::abs(s.diagonals[k][i]));
    for (std::size_t j = 0; j < s.degree; ++j) {
      const cplx r = s.roots[j][i];
      double scale = 0.0;
      double rp = 1.0;
      for (std::size_t k = 0; k <= s.degree; ++k, rp *= std::abs(r)) scale += rp;
      if (std::abs(s.diagonal_value(i, r)) > 1e-10 * dmax * scale) return false;
    }
  }
  return true;
}

bool chart_usable(const AffineChart& c) {
  return std::none_of(c.coefficients.begin(), c.coefficients.end(), [](cplx a) { return a == cplx(0.0, 0.0); });
}

}  // namespace

StartSystem make_start_system(std::size_t degree, std::size_t dim, Rng& rng) {
  if (degree < 1 || dim < 1) throw Error(ErrorKind::InvariantViolation, "start system needs m, n >= 1");
  for (int attempt = 0; attempt < 10; ++attempt) {
    StartSystem s;
    s.degree = degree;
    s.dim = dim;
    s.chart = make_chart(dim, rng);
    s.diagonals.clear();
    for (std::size_t k = 0; k <= degree; ++k) s.diagonals.push_back(gaussian_complex_vector(rng, dim));
    if (!chart_usable(s.chart)) continue;
    try {
      fill_roots(s);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::StartDegenerate || e.kind() == ErrorKind::NoConvergence) continue;
      throw;
    }
    if (roots_distinct(s) && roots_accurate(s)) return s;
  }
  throw Error(ErrorKind::StartDegenerate, "could not draw a start system with distinct roots in 10 attempts");
}

StartSystem make_start_system(std::vector<ComplexVector> diagonals, AffineChart chart) {
  if (diagonals.size() < 2) throw Error(ErrorKind::InvariantViolation, "start system needs degree >= 1");
  StartSystem s;
  s.degree = diagonals.size() - 1;
  s.dim = diagonals.front().size();
  for (const auto& d : diagonals) {
    if (d.size() != s.dim) throw Error(ErrorKind::DimensionMismatch, "start diagonals differ in length");
  }
  if (chart.coefficients.size() != s.dim) throw Error(ErrorKind::DimensionMismatch, "chart length");
  s.diagonals = std::move(diagonals);
  s.chart = std::move(chart);
  fill_roots(s);
  return s;
}

std::vector<StartPoint> enumerate_start_solutions(const StartSystem& s) {
  if (!chart_usable(s.chart)) throw Error(ErrorKind::StartDegenerate, "chart has a zero coefficient");
  std::vector<StartPoint> pts;
  pts.reserve(s.degree * s.dim);
  for (std::size_t i = 0; i < s.dim; ++i) {
    for (std::size_t j = 0; j < s.degree; ++j) {
      StartPoint p{j, i, {ComplexVector(s.dim), s.roots[j][i]}};
      // a_i x_i + a_0 = 0 with a_0 = chart.constant
      p.z.x[i] = -s.chart.constant / s.chart.coefficients[i];
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

// ---------------------------------------------------------------------------
// Homotopy evaluation

namespace {

struct Evaluation {
  ComplexVector residual;
  ComplexMatrix jacobian;
  ComplexVector dt;  // dH/dt
};

Evaluation evaluate(const MatrixPolynomial& p, const StartSystem& s, const SolutionPoint& z, double t, cplx gamma,
                    bool want_dt) {
  const std::size_t n = p.dim();
  const cplx ws = (1.0 - t) * gamma;
  Evaluation e;
  e.jacobian = ComplexMatrix(n + 1, n + 1);
  ComplexMatrix pl = eval(p, z.lambda);
  const ComplexVector px = apply(p, z.lambda, z.x);
  const ComplexVector dpx = apply_derivative(p, z.lambda, z.x);

  e.residual.resize(n + 1);
  if (want_dt) e.dt.assign(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx di = s.diagonal_value(i, z.lambda);
    const cplx ddi = s.diagonal_derivative(i, z.lambda);
    const cplx sx = di * z.x[i];
    e.residual[i] = ws * sx + t * px[i];
    for (std::size_t j = 0; j < n; ++j) e.jacobian(i, j) = t * pl(i, j);
    e.jacobian(i, i) += ws * di;
    e.jacobian(i, n) = ws * ddi * z.x[i] + t * dpx[i];
    e.jacobian(n, i) = s.chart.coefficients[i];
    if (want_dt) e.dt[i] = px[i] - gamma * sx;
  }
  e.residual[n] = s.chart(z.x);
  return e;
}

// z + h * dz
SolutionPoint axpy(const SolutionPoint& z, double h, const ComplexVector& dz) {
  SolutionPoint r = z;
  for (std::size_t i = 0; i < r.x.size(); ++i) r.x[i] += h * dz[i];
  r.lambda += h * dz.back();
  return r;
}

bool finite_point(const SolutionPoint& z) {
  return all_finite(z.x) && std::isfinite(z.lambda.real()) && std::isfinite(z.lambda.imag());
}

// dz/dt = -J^{-1} dH/dt, empty on failure.
ComplexVector tangent(const MatrixPolynomial& p, const StartSystem& s, const SolutionPoint& z, double t, cplx gamma) {
  const Evaluation e = evaluate(p, s, z, t, gamma, true);
  const LuFactorization lu = lu_factor(e.jacobian);
  ComplexVector rhs = e.dt;
  for (auto& v : rhs) v = -v;
  ComplexVector d = lu.solve_guarded(rhs);
  if (!all_finite(d)) return {};
  return d;
}

}  // namespace

HomotopyEvaluation homotopy_residual_and_jacobian(const MatrixPolynomial& p, const StartSystem& s,
                                                  const SolutionPoint& z, double t, cplx gamma) {
  if (z.x.size() != p.dim() || s.dim != p.dim()) throw Error(ErrorKind::DimensionMismatch, "homotopy evaluation");
  Evaluation e = evaluate(p, s, z, t, gamma, false);
  return {std::move(e.residual), std::move(e.jacobian)};
}

// ---------------------------------------------------------------------------
// Refinement

double scaled_target_residual(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z) {
  const double r = norm2(target_residual(p, chart, z));
  double scale = 1.0;
  double lp = 1.0;
  const double al = std::abs(z.lambda);
  for (std::size_t k = 0; k <= p.degree(); ++k, lp *= al) scale += lp * p.coefficient(k).frobenius_norm();
  return r / scale;
}

RefineResult newton_refine(const MatrixPolynomial& p, const AffineChart& chart, const SolutionPoint& z,
                           int max_iters) {
  RefineResult r{z, 0.0, 0};
  for (int it = 0; it < max_iters; ++it) {
    const ComplexVector f = target_residual(p, chart, r.z);
    if (std::all_of(f.begin(), f.end(), [](cplx v) { return v == cplx(0.0, 0.0); })) break;
    const SolutionPoint d = newton_correction(p, chart, r.z);
    for (std::size_t i = 0; i < r.z.x.size(); ++i) r.z.x[i] += d.x[i];
    r.z.lambda += d.lambda;
    r.iterations = it + 1;
    if (d.norm() <= 1e-14 * (1.0 + r.z.norm())) break;
  }
  r.residual = norm2(target_residual(p, chart, r.z));
  return r;
}

// ---------------------------------------------------------------------------
// Tracking

PathOutcome track_path(const MatrixPolynomial& p, const StartSystem& s, const StartPoint& start,
                       const TrackerConfig& config) {
  PathOutcome out;
  out.root_index = start.root_index;
  out.coordinate = start.coordinate;

  const cplx gamma = config.gamma;
  SolutionPoint z = start.z;
  double t = 0.0;
  double h = config.initial_step;
  int successes = 0;

  auto finish = [&](PathStatus status) {
    out.terminal = z;
    out.status = status;
    out.final_residual = scaled_target_residual(p, s.chart, z);
    return out;
  };

  while (t < 1.0) {
    if (out.steps + out.rejected_steps >= config.max_steps) return finish(PathStatus::Truncated);
    h = std::min(h, config.max_step);
    const bool last = h >= 1.0 - t;
    const double step = last ? 1.0 - t : h;
    const double t_next = last ? 1.0 : t + step;
    const double tol = t >= config.endgame_start ? config.endgame_tolerance : config.tracking_tolerance;

    bool ok = false;
    SolutionPoint zn;
    // RK4 predictor
    const ComplexVector k1 = tangent(p, s, z, t, gamma);
    if (!k1.empty()) {
      const ComplexVector k2 = tangent(p, s, axpy(z, 0.5 * step, k1), t + 0.5 * step, gamma);
      if (!k2.empty()) {
        const ComplexVector k3 = tangent(p, s, axpy(z, 0.5 * step, k2), t + 0.5 * step, gamma);
        if (!k3.empty()) {
          const ComplexVector k4 = tangent(p, s, axpy(z, step, k3), t_next, gamma);
          if (!k4.empty()) {
            ComplexVector incr(k1.size());
            for (std::size_t i = 0; i < incr.size(); ++i) incr[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
            zn = axpy(z, step, incr);
            ok = finite_point(zn);
          }
        }
      }
    }
    // Newton corrector at t_next; step norms must decrease.
    if (ok) {
      ok = false;
      double prev = std::numeric_limits<double>::infinity();
      for (int c = 0; c < config.max_corrections; ++c) {
        const Evaluation e = evaluate(p, s, zn, t_next, gamma, false);
        const LuFactorization lu = lu_factor(e.jacobian);
        ComplexVector rhs = e.residual;
        for (auto& v : rhs) v = -v;
        const ComplexVector d = lu.solve_guarded(rhs);
        if (!all_finite(d)) break;
        zn = axpy(zn, 1.0, d);
        const double nd = norm2(d);
        if (nd >= prev && nd > 0.0) break;
        prev = nd;
        if (nd <= tol * (1.0 + zn.norm())) {
          ok = true;
          break;
        }
      }
    }

    if (ok) {
      z = std::move(zn);
      t = t_next;
      ++out.steps;
      if (z.norm() > config.divergence_bound) return finish(PathStatus::Diverged);
      if (++successes >= 5) {
        h *= 2.0;
        successes = 0;
      }
    } else {
      ++out.rejected_steps;
      successes = 0;
      h = 0.5 * step;
      if (h < config.min_step) return finish(PathStatus::Stalled);
    }
  }

  // Endgame refinement on the target system.
  try {
    RefineResult r = newton_refine(p, s.chart, z, config.refine_iterations);
    if (finite_point(r.z) &&
        scaled_target_residual(p, s.chart, r.z) <= scaled_target_residual(p, s.chart, z)) {
      z = std::move(r.z);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularJacobian) throw;
    // singular endpoint: keep the tracked point and judge it by residual
  }
  if (z.norm() > config.divergence_bound) return finish(PathStatus::Diverged);
  finish(PathStatus::Stalled);
  if (out.final_residual <= config.final_tolerance) out.status = PathStatus::Converged;
  return out;
}

std::vector<PathOutcome> track_paths_serial(const MatrixPolynomial& p, const StartSystem& s,
                                            const std::vector<StartPoint>& starts, const TrackerConfig& config) {
  std::vector<PathOutcome> out;
  out.reserve(starts.size());
  for (const auto& st : starts) out.push_back(track_path(p, s, st, config));
  return out;
}

std::vector<PathOutcome> track_paths_parallel(const MatrixPolynomial& p, const StartSystem& s,
                                              const std::vector<StartPoint>& starts, const TrackerConfig& config,
                                              int threads) {
  std::vector<PathOutcome> out(starts.size());
  const auto count = static_cast<std::ptrdiff_t>(starts.size());
#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#else
  (void)threads;
#endif
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    out[static_cast<std::size_t>(k)] = track_path(p, s, starts[static_cast<std::size_t>(k)], config);
  }
  return out;
}

SolveResult solve_homotopy(const MatrixPolynomial& p, std::uint64_t seed, const TrackerConfig& config, int threads) {
  TrackerConfig cfg = config;
  Rng rng = seeded_stream(seed, 1);
  const StartSystem s = make_start_system(p.degree(), p.dim(), rng);
  if (cfg.gamma_trick) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    cfg.gamma = std::polar(1.0, angle(rng));
  } else {
    cfg.gamma = 1.0;
  }
  cfg.validate();

  const std::vector<StartPoint> starts = enumerate_start_solutions(s);
  SolveResult result;
  result.seed = seed;
  result.config = cfg;
  result.chart = s.chart;
  result.paths = threads == 1 ? track_paths_serial(p, s, starts, cfg) : track_paths_parallel(p, s, starts, cfg, threads);

  for (std::size_t k = 0; k < result.paths.size(); ++k) {
    const PathOutcome& o = result.paths[k];
    if (o.status != PathStatus::Converged) continue;
    Eigenpair e;
    e.lambda = o.terminal.lambda;
    e.x = normalize_eigenvector(o.terminal.x);
    e.method = Method::Homotopy;
    e.path_index = k;
    result.eigenpairs.push_back(std::move(e));
  }
  sort_eigenpairs(result.eigenpairs);
  flag_duplicates(result.eigenpairs, cfg.dedup_tolerance);
  return result;
}

}  // namespace pep
