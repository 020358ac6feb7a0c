#include "pep/solution.hpp"

#include <algorithm>
#include <cmath>

namespace pep {

std::string_view to_string(Method method) {
  return method == Method::Homotopy ? "homotopy" : "linearization";
}

std::string_view to_string(PathStatus status) {
  switch (status) {
    case PathStatus::Converged: return "converged";
    case PathStatus::Diverged: return "diverged";
    case PathStatus::Stalled: return "stalled";
    case PathStatus::Truncated: return "truncated";
  }
  return "unknown";
}

void TrackerConfig::validate() const {
  auto fail = [](const char* what) { throw Error(ErrorKind::InvariantViolation, what); };
  if (!(min_step > 0.0)) fail("tracker: min_step must be positive");
  if (!(min_step <= initial_step)) fail("tracker: min_step must not exceed initial_step");
  if (!(initial_step < 1.0)) fail("tracker: initial_step must be < 1");
  if (!(max_step >= initial_step)) fail("tracker: max_step must be >= initial_step");
  if (!(endgame_start > 0.0 && endgame_start < 1.0)) fail("tracker: endgame_start must lie in (0, 1)");
  if (max_corrections < 1) fail("tracker: max_corrections must be >= 1");
  if (!(tracking_tolerance > 0.0 && endgame_tolerance > 0.0 && final_tolerance > 0.0)) {
    fail("tracker: tolerances must be positive");
  }
  if (max_steps == 0) fail("tracker: max_steps must be >= 1");
  if (std::abs(std::abs(gamma) - 1.0) > 1e-12) fail("tracker: gamma must have unit modulus");
}

std::size_t SolveResult::converged_count() const {
  return static_cast<std::size_t>(
      std::count_if(paths.begin(), paths.end(), [](const PathOutcome& o) { return o.status == PathStatus::Converged; }));
}

std::size_t SolveResult::duplicate_count() const {
  return static_cast<std::size_t>(
      std::count_if(eigenpairs.begin(), eigenpairs.end(), [](const Eigenpair& e) { return e.duplicate; }));
}

ComplexVector normalize_eigenvector(std::span<const cplx> x) {
  const double nx = norm2(x);
  if (nx == 0.0) throw Error(ErrorKind::ZeroVector, "cannot normalize a zero eigenvector");
  std::size_t big = 0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[big])) big = i;
  }
  const cplx phase = std::conj(x[big]) / std::abs(x[big]);
  ComplexVector r(x.begin(), x.end());
  for (auto& v : r) v = v * phase / nx;
  r[big] = cplx(std::abs(r[big]), 0.0);
  return r;
}

void sort_eigenpairs(std::vector<Eigenpair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const Eigenpair& a, const Eigenpair& b) {
    const double ma = std::abs(a.lambda);
    const double mb = std::abs(b.lambda);
    if (ma != mb) return ma < mb;
    return std::arg(a.lambda) < std::arg(b.lambda);
  });
}

void flag_duplicates(std::vector<Eigenpair>& pairs, double tolerance) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (std::size_t j = i + 1; j < pairs.size(); ++j) {
      const double dl = std::abs(pairs[i].lambda - pairs[j].lambda);
      const double scale = 1.0 + std::max(std::abs(pairs[i].lambda), std::abs(pairs[j].lambda));
      if (dl > tolerance * scale) continue;
      double dx2 = 0.0;
      for (std::size_t k = 0; k < pairs[i].x.size(); ++k) dx2 += std::norm(pairs[i].x[k] - pairs[j].x[k]);
      if (std::sqrt(dl * dl + dx2) <= tolerance * scale) {
        pairs[i].duplicate = true;
        pairs[j].duplicate = true;
      }
    }
  }
}

}  // namespace pep
