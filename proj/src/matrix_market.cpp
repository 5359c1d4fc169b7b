#include "generank/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "generank/error.hpp"

namespace generank {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorCode::Parse, "Matrix Market line " + std::to_string(line) + ": " + what);
}

bool blank_or_comment(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

}  // namespace

SparseSymMatrix read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) fail(ErrorCode::Parse, "Matrix Market: empty input");
  ++line_no;

  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") parse_error(line_no, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix") parse_error(line_no, "object must be 'matrix'");
  if (format != "coordinate") parse_error(line_no, "only coordinate format is supported");
  const bool pattern = field == "pattern";
  if (!pattern && field != "real" && field != "integer") {
    parse_error(line_no, "unsupported field '" + field + "'");
  }
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") {
    parse_error(line_no, "unsupported symmetry '" + symmetry + "'");
  }

  do {
    if (!std::getline(in, line)) parse_error(line_no, "missing size line");
    ++line_no;
  } while (blank_or_comment(line));

  std::size_t rows = 0, cols = 0, entries = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> entries)) parse_error(line_no, "malformed size line");
  }
  if (rows != cols) parse_error(line_no, "matrix is not square");

  std::vector<std::pair<std::size_t, std::size_t>> coords;
  std::vector<double> values;
  coords.reserve(symmetric ? 2 * entries : entries);
  values.reserve(coords.capacity());

  std::size_t seen = 0;
  while (seen < entries && std::getline(in, line)) {
    ++line_no;
    if (blank_or_comment(line)) continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double value = 1.0;
    if (!(entry >> i >> j)) parse_error(line_no, "malformed coordinate entry");
    if (!pattern && !(entry >> value)) parse_error(line_no, "missing value");
    if (!std::isfinite(value)) parse_error(line_no, "non-finite value");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows ||
        static_cast<std::size_t>(j) > cols) {
      fail(ErrorCode::Validation, "Matrix Market line " + std::to_string(line_no) +
                                      ": index (" + std::to_string(i) + ", " +
                                      std::to_string(j) + ") out of bounds for " +
                                      std::to_string(rows) + "x" + std::to_string(cols));
    }
    const auto r = static_cast<std::size_t>(i - 1);
    const auto c = static_cast<std::size_t>(j - 1);
    coords.emplace_back(r, c);
    values.push_back(value);
    if (symmetric && r != c) {
      coords.emplace_back(c, r);
      values.push_back(value);
    }
    ++seen;
  }
  if (seen < entries) {
    parse_error(line_no, "expected " + std::to_string(entries) + " entries, found " +
                             std::to_string(seen));
  }
  // Both (i,j) and (j,i) in a symmetric file, or a repeated coordinate, shows
  // up as a duplicate here; an unpaired entry in a general file as asymmetry.
  return SparseSymMatrix::from_triplets(rows, std::move(coords), std::move(values));
}

SparseSymMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(const SparseSymMatrix& A, std::ostream& out) {
  const auto vals = A.values();
  const bool pattern = std::all_of(vals.begin(), vals.end(), [](double v) { return v == 1.0; });

  std::size_t lower_count = 0;
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (auto j : A.row_cols(i)) lower_count += (j <= i);
  }

  out << "%%MatrixMarket matrix coordinate " << (pattern ? "pattern" : "real")
      << " symmetric\n";
  out << A.size() << ' ' << A.size() << ' ' << lower_count << '\n';
  char buf[64];
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto cols = A.row_cols(i);
    const auto row_vals = A.row_values(i);
    for (std::size_t k = 0; k < cols.size() && cols[k] <= i; ++k) {
      out << (i + 1) << ' ' << (cols[k] + 1);
      if (!pattern) {
        std::snprintf(buf, sizeof buf, " %.17g", row_vals[k]);
        out << buf;
      }
      out << '\n';
    }
  }
  if (!out) fail(ErrorCode::Io, "failed writing Matrix Market data");
}

void write_matrix_market(const SparseSymMatrix& A, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_matrix_market(A, out);
  out.flush();
  if (!out) fail(ErrorCode::Io, "failed writing " + path.string());
}

}  // namespace generank
