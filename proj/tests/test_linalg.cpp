#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "pep/homotopy.hpp"
#include "pep/linalg.hpp"

using namespace pep;
using cd = std::complex<double>;

namespace {

ComplexMatrix from_rows(std::size_t r, std::size_t c, std::vector<cplx> v) { return ComplexMatrix(r, c, std::move(v)); }

double max_diff(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST_CASE("matrix construction checks shape and finiteness") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), Error);
  try {
    ComplexMatrix(1, 1, {cplx(std::nan(""), 0.0)});
    FAIL("expected NonFinite");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonFinite);
  }
  const ComplexMatrix z(0, 0);
  CHECK(z.empty());
  CHECK(z.frobenius_norm() == 0.0);
}

TEST_CASE("basic matrix algebra") {
  const ComplexMatrix a = from_rows(2, 2, {1.0, cd(0, 1), 2.0, 3.0});
  const ComplexMatrix id = ComplexMatrix::identity(2);
  CHECK(a * id == a);
  CHECK((a + a) == cplx(2.0) * a);
  CHECK((a - a).is_zero());
  const ComplexMatrix ah = a.adjoint();
  CHECK(ah(0, 1) == cplx(2.0));
  CHECK(ah(1, 0) == cd(0, -1));
  CHECK(a.transpose()(1, 0) == cd(0, 1));
  CHECK(a.frobenius_norm() == doctest::Approx(std::sqrt(15.0)));
  CHECK(a.max_row_norm() == doctest::Approx(std::sqrt(13.0)));
  CHECK_THROWS_AS(a * ComplexMatrix(3, 1), Error);
  ComplexMatrix acc = a;
  CHECK_THROWS_AS(acc += ComplexMatrix(3, 3), Error);

  ComplexMatrix big(3, 3);
  big.set_block(1, 1, a);
  CHECK(big.block(1, 1, 2, 2) == a);
  CHECK_THROWS_AS(big.set_block(2, 2, a), Error);
}

TEST_CASE("vector helpers") {
  const ComplexVector a{cd(3, 0), cd(0, 4)};
  CHECK(norm2(a) == doctest::Approx(5.0));
  CHECK(dot(a, a) == cd(9 - 16, 0));
  CHECK(inner(a, a) == cd(25, 0));
  // scaled norm does not overflow
  const ComplexVector huge{1e300, 1e300};
  CHECK(norm2(huge) == doctest::Approx(std::sqrt(2.0) * 1e300));
  CHECK(all_finite(a));
  CHECK_FALSE(all_finite(ComplexVector{cd(INFINITY, 0)}));
}

TEST_CASE("lu_solve small cases") {
  SUBCASE("identity") {
    const ComplexVector b{1.0, cd(0, 1), -2.0};
    CHECK(lu_solve(ComplexMatrix::identity(3), b) == b);
  }
  SUBCASE("diagonal") {
    const ComplexVector x = lu_solve(from_rows(2, 2, {2.0, 0.0, 0.0, 4.0}), ComplexVector{2.0, 8.0});
    CHECK(max_diff(x, {1.0, 2.0}) < 1e-15);
  }
  SUBCASE("random 5x5 with known solution") {
    const ComplexMatrix a = oracle::random_matrix(5, 5, 11);
    const ComplexVector ones(5, 1.0);
    const ComplexVector b = oracle::matvec(a, ones);
    CHECK(max_diff(lu_solve(a, b), ones) < 1e-12);
  }
  SUBCASE("singular matrix") {
    const ComplexMatrix s = from_rows(2, 2, {1.0, 2.0, 2.0, 4.0});
    try {
      lu_solve(s, ComplexVector{1.0, 1.0});
      FAIL("expected SingularMatrix");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SingularMatrix);
    }
    const LuFactorization f = lu_factor(s);
    CHECK(f.singular);
    const ComplexVector g = f.solve_guarded(ComplexVector{1.0, 1.0});
    CHECK(all_finite(g));
  }
  SUBCASE("rhs length") { CHECK_THROWS_AS(lu_solve(ComplexMatrix::identity(2), ComplexVector{1.0}), Error); }
}

TEST_CASE("lu adjoint solve and determinant agree with the oracle") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix a = oracle::random_matrix(6, 6, seed);
    const LuFactorization f = lu_factor(a);
    REQUIRE_FALSE(f.singular);
    const cplx d = f.determinant();
    const cplx d0 = oracle::det(a);
    CHECK(std::abs(d - d0) <= 1e-10 * std::abs(d0));
    const ComplexMatrix xm = oracle::random_matrix(6, 1, seed + 100);
    const ComplexVector x(xm.entries().begin(), xm.entries().end());
    const ComplexVector b = oracle::matvec(a.adjoint(), x);
    CHECK(max_diff(f.solve_adjoint(b), x) < 1e-10);
  }
}

TEST_CASE("eigenvalues_dense known spectra") {
  SUBCASE("diagonal") {
    const ComplexVector d{1.0, cd(0, 2), -3.0};
    auto ev = eigenvalues_dense(ComplexMatrix::diagonal(d));
    CHECK(oracle::bottleneck_distance(ev, d) < 1e-14);
  }
  SUBCASE("companion of lambda^2 - 1") {
    const auto ev = eigenvalues_dense(from_rows(2, 2, {0.0, 1.0, 1.0, 0.0}));
    CHECK(oracle::bottleneck_distance(ev, {1.0, -1.0}) < 1e-14);
  }
  SUBCASE("1x1 and empty") {
    CHECK(eigenvalues_dense(oracle::scalar(cd(2, 3))) == std::vector<cplx>{cd(2, 3)});
    CHECK(eigenvalues_dense(ComplexMatrix(0, 0)).empty());
  }
  SUBCASE("non-finite input") {
    ComplexMatrix bad(2, 2);
    bad(1, 0) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(eigenvalues_dense(bad), Error);
  }
}

TEST_CASE("eigenvalues_dense of random 6x6 match the interpolated characteristic polynomial") {
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const ComplexMatrix a = oracle::random_matrix(6, 6, seed);
    // det(z I - A) at 7 points, interpolated.
    std::vector<cplx> xs, ys;
    for (int i = 0; i < 7; ++i) {
      xs.push_back(std::polar(3.0, 2.0 * M_PI * i / 7.0));
      ComplexMatrix s = cplx(-1.0) * a;
      for (std::size_t k = 0; k < 6; ++k) s(k, k) += xs.back();
      ys.push_back(oracle::det(s));
    }
    const auto roots = oracle::durand_kerner(oracle::interpolate(xs, ys));
    const auto ev = eigenvalues_dense(a);
    CHECK(oracle::bottleneck_distance(ev, roots) < 1e-8);
  }
}

TEST_CASE("property: eigenvalue trace and determinant identities") {
  for (unsigned seed = 20; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 8;
    const ComplexMatrix a = oracle::random_matrix(n, n, seed);
    const auto ev = eigenvalues_dense(a);
    REQUIRE(ev.size() == n);
    cplx tr = 0.0, sum = 0.0, prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) tr += a(i, i);
    for (const cplx& e : ev) {
      sum += e;
      prod *= e;
    }
    CHECK(std::abs(sum - tr) <= 1e-10 * (1.0 + a.frobenius_norm()));
    const cplx d = oracle::det(a);
    CHECK(std::abs(prod - d) <= 1e-9 * std::abs(d));
  }
}

TEST_CASE("eigenvalues_dense handles structured matrices") {
  SUBCASE("Jordan-like block has repeated eigenvalue") {
    ComplexMatrix j(4, 4);
    for (std::size_t i = 0; i < 4; ++i) j(i, i) = 2.0;
    for (std::size_t i = 0; i + 1 < 4; ++i) j(i, i + 1) = 1.0;
    for (const cplx& e : eigenvalues_dense(j)) CHECK(std::abs(e - 2.0) < 1e-3);
  }
  SUBCASE("cyclic shift: roots of unity") {
    const std::size_t n = 8;
    ComplexMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i) c((i + 1) % n, i) = 1.0;
    std::vector<cplx> w;
    for (std::size_t k = 0; k < n; ++k) w.push_back(std::polar(1.0, 2.0 * M_PI * k / n));
    CHECK(oracle::bottleneck_distance(eigenvalues_dense(c), w) < 1e-12);
  }
  SUBCASE("zero matrix") {
    for (const cplx& e : eigenvalues_dense(ComplexMatrix(5, 5))) CHECK(e == cplx(0.0));
  }
}

TEST_CASE("polynomial_roots") {
  // (z - 1)(z - 2)(z + i) = z^3 + (i - 3) z^2 + (2 - 3i) z + 2i
  const std::vector<cplx> c{cd(0, 2), cd(2, -3), cd(-3, 1), 1.0};
  CHECK(oracle::bottleneck_distance(polynomial_roots(c), {1.0, 2.0, cd(0, -1)}) < 1e-12);
  // scaling the coefficients leaves the roots unchanged
  std::vector<cplx> c2;
  for (const cplx& v : c) c2.push_back(cd(0, 5) * v);
  CHECK(oracle::bottleneck_distance(polynomial_roots(c2), {1.0, 2.0, cd(0, -1)}) < 1e-12);
  CHECK_THROWS_AS(polynomial_roots(std::vector<cplx>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(polynomial_roots(std::vector<cplx>{}), Error);
  CHECK(polynomial_roots(std::vector<cplx>{3.0}).empty());
}

TEST_CASE("inverse_operator_norm") {
  CHECK(inverse_operator_norm(from_rows(2, 2, {2.0, 0.0, 0.0, 5.0})) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(inverse_operator_norm(ComplexMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-12));
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix a = oracle::random_matrix(4, 4, seed);
    // sigma_min^2 = smallest eigenvalue of A^* A
    const auto ev = eigenvalues_dense(a.adjoint() * a);
    double smin2 = 1e300;
    for (const cplx& e : ev) smin2 = std::min(smin2, e.real());
    CHECK(inverse_operator_norm(a) == doctest::Approx(1.0 / std::sqrt(smin2)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(inverse_operator_norm(ComplexMatrix(0, 0)), Error);
  CHECK_THROWS_AS(inverse_operator_norm(ComplexMatrix(2, 2)), Error);
}

TEST_CASE("spectral_norm_estimate is a lower bound that is close") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const ComplexMatrix a = oracle::random_matrix(5, 5, seed);
    const auto ev = eigenvalues_dense(a.adjoint() * a);
    double smax2 = 0.0;
    for (const cplx& e : ev) smax2 = std::max(smax2, e.real());
    const double est = spectral_norm_estimate(a);
    CHECK(est <= std::sqrt(smax2) * (1.0 + 1e-12));
    CHECK(est >= 0.9 * std::sqrt(smax2));
  }
  CHECK(spectral_norm_estimate(ComplexMatrix(3, 3)) == 0.0);
}

TEST_CASE("inverse_iteration finds a null vector") {
  const ComplexMatrix s = from_rows(2, 2, {1.0, 2.0, 2.0, 4.0});
  const ComplexVector v = inverse_iteration(s, false, 2, 7);
  CHECK(norm2(v) == doctest::Approx(1.0));
  CHECK(oracle::vnorm(oracle::matvec(s, v)) < 1e-12);
  const ComplexVector w = inverse_iteration(s, true, 2, 7);
  CHECK(oracle::vnorm(oracle::matvec(s.adjoint(), w)) < 1e-12);
}

TEST_CASE("gaussian samplers") {
  Rng r1 = seeded_stream(5, 3), r2 = seeded_stream(5, 3);
  CHECK(gaussian_complex(r1, 2, 2) == gaussian_complex(r2, 2, 2));
  Rng r3 = seeded_stream(6, 3);
  CHECK_FALSE(gaussian_complex(r3, 2, 2) == gaussian_complex(r1, 2, 2));
  CHECK(gaussian_complex(r1, 0, 0).empty());

  Rng r = seeded_stream(1, 9);
  const ComplexMatrix g = gaussian_complex(r, 100, 100);
  double m2 = 0.0;
  for (const cplx& v : g.entries()) m2 += std::norm(v);
  CHECK(m2 / 1e4 == doctest::Approx(1.0).epsilon(0.05));

  const ComplexMatrix gr = gaussian_real(r, 3, 3);
  for (const cplx& v : gr.entries()) CHECK(v.imag() == 0.0);
}
