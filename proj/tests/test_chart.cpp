#include <doctest.h>

#include "oracles.hpp"
#include "pep/chart.hpp"
#include "pep/homotopy.hpp"

using namespace pep;
using cd = std::complex<double>;

TEST_CASE("make_chart is deterministic and excludes the origin") {
  Rng r1 = seeded_stream(3, 1), r2 = seeded_stream(3, 1);
  const AffineChart a = make_chart(4, r1), b = make_chart(4, r2);
  CHECK(a.coefficients == b.coefficients);
  CHECK(a.constant == cplx(-1.0));
  CHECK(a(ComplexVector(4, 0.0)) == cplx(-1.0));
  for (std::size_t k = 0; k < 4; ++k) {
    ComplexVector x(4, 0.0);
    x[k] = 1.0 / a.coefficients[k];
    CHECK(std::abs(a(x)) < 1e-15);
  }
  double ns = 1.0;
  for (const cplx& c : a.coefficients) ns += std::norm(c);
  CHECK(a.norm_squared() == doctest::Approx(ns));
}

TEST_CASE("target residual and Jacobian") {
  const MatrixPolynomial p = oracle::random_poly(3, 3, 2);
  Rng rng = seeded_stream(1, 1);
  const AffineChart chart = make_chart(3, rng);
  const SolutionPoint z{{cd(0.1, 0.2), cd(-0.4, 0.3), cd(1.0, 0.0)}, cd(0.3, -0.6)};
  const ComplexVector f = target_residual(p, chart, z);
  REQUIRE(f.size() == 4);
  const ComplexVector px = oracle::matvec(oracle::naive_eval(p, z.lambda), z.x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(f[i] - px[i]) < 1e-14);
  CHECK(std::abs(f[3] - chart(z.x)) < 1e-15);

  const ComplexMatrix j = target_jacobian(p, chart, z);
  const double h = 1e-6;
  // columns by central differences
  for (std::size_t c = 0; c < 4; ++c) {
    auto fz = [&](cplx s) {
      SolutionPoint w = z;
      if (c < 3) w.x[c] += s;
      else w.lambda += s;
      return target_residual(p, chart, w);
    };
    const ComplexVector fd = oracle::central_difference(fz, 0.0, h);
    for (std::size_t r = 0; r < 4; ++r) CHECK(std::abs(j(r, c) - fd[r]) < 1e-7);
  }
  CHECK(j(3, 3) == cplx(0.0));
}

TEST_CASE("newton_correction and project_to_chart") {
  // scalar lambda - 2 on the chart x - 1: linear, one step is exact
  const MatrixPolynomial p({oracle::scalar(-2.0), oracle::scalar(1.0)});
  const AffineChart chart{{1.0}, -1.0};
  const SolutionPoint z{{1.0}, cd(2.0, 0.0) + 1e-3};
  const SolutionPoint d = newton_correction(p, chart, z);
  CHECK(std::abs(d.lambda + 1e-3) < 1e-15);
  CHECK(std::abs(d.x[0]) < 1e-15);

  // singular Jacobian: lambda^2 - 1 at lambda = 0
  const MatrixPolynomial q({oracle::scalar(-1.0), oracle::scalar(0.0), oracle::scalar(1.0)});
  try {
    newton_correction(q, chart, SolutionPoint{{3.0}, 0.0});
    FAIL("expected SingularJacobian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularJacobian);
  }

  const AffineChart c2{{2.0, cd(0, 1)}, -1.0};
  const SolutionPoint w = project_to_chart(c2, ComplexVector{1.0, 1.0}, 5.0);
  CHECK(std::abs(c2(w.x)) < 1e-15);
  CHECK(w.lambda == cplx(5.0));
  CHECK_THROWS_AS(project_to_chart(c2, ComplexVector{cd(0, 1), -2.0}, 1.0), Error);
  CHECK(SolutionPoint{{3.0}, cd(0, 4)}.norm() == doctest::Approx(5.0));
}
