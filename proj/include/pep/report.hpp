#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pep/matpoly.hpp"

namespace pep {

// Problem file:
//   {"n": int, "degree": int,
//    "coefficients": [A_0, ..., A_m]}   each A_k row-major, entries [re, im]
// Malformed JSON or wrong value types raise ParseError (message carries the
// line or the offending field); shape or count mismatches and a zero leading
// coefficient raise InvariantViolation.
MatrixPolynomial parse_problem(std::string_view text);
MatrixPolynomial parse_problem_file(const std::string& path);

// Inverse of parse_problem; doubles are printed in shortest round-trip form.
std::string emit_problem(const MatrixPolynomial& p);

// %.17g, with nan / inf / -inf spelled out.
std::string format_double(double value);

// RFC 4180: CRLF line ends, fields quoted when they hold a comma, quote,
// CR or LF, quotes doubled.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out);
  void header(const std::vector<std::string>& names);
  void row(const std::vector<std::string>& fields);
  std::size_t columns() const { return columns_; }
  std::size_t rows() const { return rows_; }

  static std::string quote(std::string_view field);

 private:
  void write(const std::vector<std::string>& fields);
  std::ostream& out_;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

// Parses RFC 4180 text back into records (used by tests and the compare
// tooling); the first record is the header.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Greedy global-nearest matching: repeatedly pairs the closest unmatched
// (a_i, b_j). result[i] is the index into b, or nullopt when b ran out.
std::vector<std::optional<std::size_t>> match_nearest(const std::vector<cplx>& a, const std::vector<cplx>& b);

}  // namespace pep
