#include "pep/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace pep {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::ParseError, what); }
[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvariantViolation, what); }

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string field_name(std::size_t k, std::size_t i, std::size_t j) {
  return "coefficients[" + std::to_string(k) + "][" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

std::size_t read_size(const json& doc, const char* key) {
  if (!doc.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  const json& v = doc.at(key);
  if (!v.is_number_integer()) parse_fail(std::string("field \"") + key + "\" must be an integer");
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) invalid(std::string("field \"") + key + "\" must be nonnegative");
  return static_cast<std::size_t>(s);
}

double read_real(const json& v, const std::string& where) {
  if (!v.is_number()) parse_fail(where + ": expected a number");
  return v.get<double>();
}

}  // namespace

MatrixPolynomial parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" itself; keep the line for callers that strip it.
    parse_fail("problem JSON, line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " + e.what());
  }
  if (!doc.is_object()) parse_fail("top level must be a JSON object");

  const std::size_t n = read_size(doc, "n");
  const std::size_t degree = read_size(doc, "degree");
  if (n < 1) invalid("n must be >= 1");
  if (degree < 1) invalid("degree must be >= 1");
  if (!doc.contains("coefficients")) parse_fail("missing field \"coefficients\"");
  const json& coeffs = doc.at("coefficients");
  if (!coeffs.is_array()) parse_fail("field \"coefficients\" must be an array");
  if (coeffs.size() != degree + 1) {
    invalid("coefficients holds " + std::to_string(coeffs.size()) + " matrices, degree " + std::to_string(degree) +
            " needs " + std::to_string(degree + 1));
  }

  std::vector<ComplexMatrix> mats;
  mats.reserve(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) {
    const json& mk = coeffs[k];
    const std::string mname = "coefficients[" + std::to_string(k) + "]";
    if (!mk.is_array()) parse_fail(mname + ": expected an array of rows");
    if (mk.size() != n) invalid(mname + " has " + std::to_string(mk.size()) + " rows, expected " + std::to_string(n));
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const json& row = mk[i];
      const std::string rname = mname + "[" + std::to_string(i) + "]";
      if (!row.is_array()) parse_fail(rname + ": expected an array of entries");
      if (row.size() != n) invalid(rname + " has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
      for (std::size_t j = 0; j < n; ++j) {
        const json& e = row[j];
        const std::string ename = field_name(k, i, j);
        if (!e.is_array() || e.size() != 2) parse_fail(ename + ": expected [re, im]");
        const double re = read_real(e[0], ename + "[0]");
        const double im = read_real(e[1], ename + "[1]");
        if (!std::isfinite(re) || !std::isfinite(im)) invalid(ename + " is not finite");
        a(i, j) = cplx(re, im);
      }
    }
    mats.push_back(std::move(a));
  }
  return MatrixPolynomial(std::move(mats));
}

MatrixPolynomial parse_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

std::string emit_problem(const MatrixPolynomial& p) {
  const std::size_t n = p.dim();
  json coeffs = json::array();
  for (const ComplexMatrix& a : p.coefficients()) {
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
      rows.push_back(std::move(row));
    }
    coeffs.push_back(std::move(rows));
  }
  json doc;
  doc["n"] = n;
  doc["degree"] = p.degree();
  doc["coefficients"] = std::move(coeffs);
  return doc.dump() + "\n";
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out) : out_(out) {}

std::string CsvWriter::quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  return q;
}

void CsvWriter::write(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << "\r\n";
}

void CsvWriter::header(const std::vector<std::string>& names) {
  if (columns_ != 0) invalid("CSV header written twice");
  if (names.empty()) invalid("CSV header needs at least one column");
  columns_ = names.size();
  write(names);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (columns_ == 0) invalid("CSV row before header");
  if (fields.size() != columns_) {
    throw Error(ErrorKind::DimensionMismatch,
                "CSV row has " + std::to_string(fields.size()) + " fields, header has " + std::to_string(columns_));
  }
  write(fields);
  ++rows_;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        quoted = false;
      } else {
        field += c;
      }
      ++i;
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      end_record();
      ++i;
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
    }
    ++i;
  }
  if (quoted) parse_fail("unterminated quoted CSV field");
  if (any || !field.empty() || !record.empty()) end_record();
  return records;
}

std::vector<std::optional<std::size_t>> match_nearest(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) pairs.emplace_back(std::abs(a[i] - b[j]), i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<std::optional<std::size_t>> result(a.size());
  std::vector<bool> used(b.size(), false);
  std::size_t left = std::min(a.size(), b.size());
  for (const auto& [d, i, j] : pairs) {
    if (left == 0) break;
    if (result[i] || used[j]) continue;
    result[i] = j;
    used[j] = true;
    --left;
  }
  return result;
}

}  // namespace pep
