#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "pep/certify.hpp"
#include "pep/chart.hpp"

namespace pep {

enum class Method { Homotopy, Linearization };
std::string_view to_string(Method method);

enum class PathStatus { Converged, Diverged, Stalled, Truncated };
std::string_view to_string(PathStatus status);

// Unit-norm eigenvector with its largest-modulus entry real and positive.
struct Eigenpair {
  cplx lambda;
  ComplexVector x;
  Method method = Method::Homotopy;
  std::optional<CertificationReport> certification;
  // Index into SolveResult::paths for homotopy pairs.
  std::optional<std::size_t> path_index;
  // Set when another eigenpair lies within the dedup tolerance.
  bool duplicate = false;
};

struct TrackerConfig {
  // Random unit constant multiplying the start system; drawn from the seed
  // unless gamma_trick is false, in which case gamma = 1.
  bool gamma_trick = true;
  cplx gamma = 1.0;
  double initial_step = 0.1;
  double min_step = 1e-14;
  double max_step = 1.0;
  int max_corrections = 3;
  double tracking_tolerance = 1e-7;
  double endgame_start = 0.9;
  double endgame_tolerance = 1e-10;
  double final_tolerance = 1e-12;
  int refine_iterations = 10;
  std::size_t max_steps = 10000;
  double divergence_bound = 1e10;
  double dedup_tolerance = 1e-6;

  // Throws InvariantViolation on inconsistent settings.
  void validate() const;
};

struct PathOutcome {
  std::size_t root_index = 0;   // j, which root of the i-th diagonal polynomial
  std::size_t coordinate = 0;   // i, the nonzero entry of the start vector
  SolutionPoint terminal;       // on the chart, not unit-normalized
  PathStatus status = PathStatus::Truncated;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  // ||T(z)|| / (1 + sum_k |lambda|^k ||A_k||_F)
  double final_residual = 0.0;
};

struct SolveResult {
  std::vector<Eigenpair> eigenpairs;
  std::vector<PathOutcome> paths;
  std::uint64_t seed = 0;
  TrackerConfig config;
  // Chart used by the homotopy (also used to certify linearization pairs).
  AffineChart chart;

  std::size_t converged_count() const;
  std::size_t duplicate_count() const;
};

// Scales x to unit norm and rotates it so the largest-modulus entry is real positive.
ComplexVector normalize_eigenvector(std::span<const cplx> x);

// Stable sort by (|lambda|, arg lambda).
void sort_eigenpairs(std::vector<Eigenpair>& pairs);

// Flags pairs closer than `tolerance * (1 + |lambda|)` in (lambda, x).
void flag_duplicates(std::vector<Eigenpair>& pairs, double tolerance);

}  // namespace pep
