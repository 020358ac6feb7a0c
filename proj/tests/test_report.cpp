#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "oracles.hpp"
#include "pep/problems.hpp"
#include "pep/report.hpp"

using namespace pep;
using cd = std::complex<double>;

namespace {

ErrorKind kind_of(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("parse_problem accepted invalid input");
  return ErrorKind::ParseError;
}

std::string message_of(std::string_view text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal problem file") {
  const MatrixPolynomial p = parse_problem(R"({"n": 1, "degree": 1, "coefficients": [[[[-2, 0]]], [[[1, 0.5]]]]})");
  CHECK(p.dim() == 1);
  CHECK(p.degree() == 1);
  CHECK(p.coefficient(0)(0, 0) == cplx(-2.0));
  CHECK(p.coefficient(1)(0, 0) == cd(1.0, 0.5));
}

TEST_CASE("row-major layout") {
  const MatrixPolynomial p = parse_problem(
      R"({"n": 2, "degree": 1, "coefficients": [
        [[[1,0],[2,0]], [[3,0],[4,0]]],
        [[[1,0],[0,0]], [[0,0],[1,0]]]]})");
  CHECK(p.coefficient(0)(0, 1) == cplx(2.0));
  CHECK(p.coefficient(0)(1, 0) == cplx(3.0));
}

TEST_CASE("invalid problem files") {
  CHECK(kind_of(R"({"n": 2, "degree": 1, "coefficients": [[[[1,0]]], [[[1,0]]]]})") == ErrorKind::InvariantViolation);
  CHECK(kind_of(R"({"n": 1, "degree": 2, "coefficients": [[[[1,0]]], [[[1,0]]]]})") == ErrorKind::InvariantViolation);
  CHECK(kind_of(R"({"n": 1, "degree": 1, "coefficients": [[[[1,0]]], [[[0,0]]]]})") == ErrorKind::InvariantViolation);
  CHECK(kind_of(R"({"n": 0, "degree": 1, "coefficients": []})") == ErrorKind::InvariantViolation);
  CHECK(kind_of(R"({"n": 1, "degree": 1, "coefficients": [[[[1,0]]], [[["x",0]]]]})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n": "1", "degree": 1, "coefficients": []})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"degree": 1, "coefficients": []})") == ErrorKind::ParseError);
  CHECK(kind_of(R"({"n": 1, "degree": 1, "coefficients": [[[[1,0,3]]], [[[1,0]]]]})") == ErrorKind::ParseError);
  CHECK(kind_of("[1, 2]") == ErrorKind::ParseError);
  CHECK(kind_of("{\"n\": 1,\n \"degree\": 1,\n \"coefficients\": [}") == ErrorKind::ParseError);

  CHECK(message_of("{\"n\": 1,\n\n \"degree\": ]").find("line 3") != std::string::npos);
  CHECK(message_of(R"({"n": 1, "degree": 1, "coefficients": [[[[1,0]]], [[["x",0]]]]})").find("coefficients[1][0][0]") !=
        std::string::npos);

  CHECK_THROWS_AS(parse_problem_file("/nonexistent/dir/problem.json"), Error);
}

TEST_CASE("property: emit then parse is the identity") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const MatrixPolynomial p = random_pep(1 + seed % 4, 1 + seed % 5, seed);
    const std::string text = emit_problem(p);
    const MatrixPolynomial q = parse_problem(text);
    CHECK(q == p);  // bit-exact
    CHECK(emit_problem(q) == text);
  }
  // awkward doubles survive as well
  const double vals[] = {std::numeric_limits<double>::denorm_min(), 0.1, 1.0 / 3.0, -1e308, 5e-324, -0.0};
  for (double v : vals) {
    const MatrixPolynomial p({oracle::scalar(cd(v, -v)), oracle::scalar(1.0)});
    const MatrixPolynomial q = parse_problem(emit_problem(p));
    CHECK(q.coefficient(0)(0, 0).real() == v);
    CHECK(std::signbit(q.coefficient(0)(0, 0).real()) == std::signbit(v));
  }
}

TEST_CASE("format_double") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  for (unsigned s = 1; s < 200; ++s) {
    const double v = std::ldexp(std::sin(1e3 * s), static_cast<int>(s % 80) - 40);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV writer") {
  std::ostringstream os;
  CsvWriter w(os);
  w.header({"a", "b,c", "d"});
  w.row({"plain", "has \"quote\"", "line\nbreak"});
  w.row({"", " x ", "cr\r"});
  CHECK(w.columns() == 3);
  CHECK(w.rows() == 2);
  CHECK(os.str() ==
        "a,\"b,c\",d\r\n"
        "plain,\"has \"\"quote\"\"\",\"line\nbreak\"\r\n"
        ", x ,\"cr\r\"\r\n");
  CHECK_THROWS_AS(w.row({"too", "few"}), Error);
  CHECK_THROWS_AS(w.header({"again"}), Error);

  std::ostringstream o2;
  CsvWriter w2(o2);
  CHECK_THROWS_AS(w2.header({}), Error);
  CHECK(CsvWriter::quote("abc") == "abc");
  CHECK(CsvWriter::quote("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("property: CSV round trip") {
  const std::vector<std::string> pool{"", "x", ",", "\"", "\"\"", "a,b", "\r\n", "é", " lead", "trail ", "1e-300"};
  for (unsigned seed = 0; seed < 50; ++seed) {
    std::vector<std::vector<std::string>> recs;
    std::ostringstream os;
    CsvWriter w(os);
    for (unsigned r = 0; r < 1 + seed % 5; ++r) {
      std::vector<std::string> rec;
      for (unsigned c = 0; c < 4; ++c) rec.push_back(pool[(seed * 7 + r * 3 + c * 5) % pool.size()] + std::to_string(c));
      recs.push_back(rec);
      if (r == 0) w.header(rec);
      else w.row(rec);
    }
    CHECK(parse_csv(os.str()) == recs);
  }
}

TEST_CASE("match_nearest") {
  const std::vector<cplx> a{0.0, 1.0, 10.0};
  const std::vector<cplx> b{cd(1.1, 0), cd(0.05, 0)};
  const auto m = match_nearest(a, b);
  REQUIRE(m.size() == 3);
  CHECK(m[0] == std::optional<std::size_t>(1));
  CHECK(m[1] == std::optional<std::size_t>(0));
  CHECK_FALSE(m[2].has_value());

  // globally nearest pair first: 0.9 is closer to 1.0 than 0.0 is
  const auto g = match_nearest({0.0, 0.9}, {1.0});
  CHECK_FALSE(g[0].has_value());
  CHECK(g[1] == std::optional<std::size_t>(0));
  CHECK(match_nearest({}, {1.0}).empty());
}
