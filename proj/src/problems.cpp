#include "pep/problems.hpp"

#include <cmath>
#include <numbers>

#include "pep/homotopy.hpp"

namespace pep {

namespace {
constexpr std::uint64_t kProblemStream = 101;
}

MatrixPolynomial random_pep(std::size_t degree, std::size_t dim, std::uint64_t seed, Field field) {
  if (degree < 1 || dim < 1) throw Error(ErrorKind::InvariantViolation, "random_pep needs m, n >= 1");
  Rng rng = seeded_stream(seed, kProblemStream);
  std::vector<ComplexMatrix> coeffs;
  for (std::size_t k = 0; k <= degree; ++k) {
    coeffs.push_back(field == Field::Complex ? gaussian_complex(rng, dim, dim) : gaussian_real(rng, dim, dim));
  }
  return MatrixPolynomial(std::move(coeffs));
}

MatrixPolynomial damped_qep(const ComplexMatrix& m, const ComplexMatrix& c, const ComplexMatrix& k, int scale_exponent) {
  const std::size_t n = m.rows();
  for (const ComplexMatrix* a : {&m, &c, &k}) {
    if (a->rows() != n || a->cols() != n) throw Error(ErrorKind::DimensionMismatch, "damped_qep: M, C, K shapes differ");
  }
  return MatrixPolynomial({k, std::ldexp(1.0, scale_exponent) * c, m});
}

MatrixPolynomial damped_family(std::size_t dim, int scale_exponent, std::uint64_t seed) {
  Rng rng = seeded_stream(seed, kProblemStream + 1);
  const ComplexMatrix m = gaussian_real(rng, dim, dim);
  const ComplexMatrix c = gaussian_real(rng, dim, dim);
  const ComplexMatrix k = gaussian_real(rng, dim, dim);
  return damped_qep(m, c, k, scale_exponent);
}

MatrixPolynomial acoustic_wave_qep(std::size_t dim, cplx zeta) {
  if (dim < 2) throw Error(ErrorKind::InvariantViolation, "acoustic wave problem needs n >= 2");
  if (zeta == cplx(0.0, 0.0)) throw Error(ErrorKind::InvariantViolation, "impedance zeta must be nonzero");
  const double pi = std::numbers::pi;
  const double n = static_cast<double>(dim);
  const std::size_t last = dim - 1;

  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = -4.0 * pi * pi / n;
  m(last, last) = -2.0 * pi * pi / n;

  ComplexMatrix c(dim, dim);
  c(last, last) = cplx(0.0, 2.0 * pi) / zeta;

  ComplexMatrix k(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    k(i, i) = 2.0 * n;
    if (i + 1 < dim) {
      k(i, i + 1) = -n;
      k(i + 1, i) = -n;
    }
  }
  k(last, last) = n;

  return MatrixPolynomial({k, c, m});
}

}  // namespace pep
