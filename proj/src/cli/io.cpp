#include "cli/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <set>
#include <string_view>
#include <sstream>

namespace perturb::cli {

namespace {

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position locate(const std::string& text, std::size_t offset) {
  Position pos;
  offset = std::min(offset, text.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

// Forward iterator over the text that remembers the furthest character the
// JSON lexer has looked at, so SAX events can be mapped back to a position.
class TrackingIterator {
 public:
  using iterator_category = std::forward_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator() = default;
  TrackingIterator(const char* p, const char** furthest) : p_(p), furthest_(furthest) {}

  reference operator*() const {
    if (p_ > *furthest_) *furthest_ = p_;
    return *p_;
  }
  TrackingIterator& operator++() {
    ++p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    TrackingIterator old = *this;
    ++p_;
    return old;
  }
  bool operator==(const TrackingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const TrackingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_ = nullptr;
  const char** furthest_ = nullptr;
};

struct Coefficient {
  std::size_t offset = 0;
  std::vector<double> values;
  std::vector<std::size_t> row_lengths;  // nested form only
  std::vector<std::size_t> row_offsets;
  bool nested = false;
};

// Streaming validator for the series schema; every error is tied to the
// offset of the token that triggered it.
class SeriesHandler : public nlohmann::json_sax<nlohmann::json> {
 public:
  SeriesHandler(const std::string& text, const std::string& source, const char** furthest)
      : text_(text), source_(source), furthest_(furthest) {}

  bool null() override { return scalar_error("null"); }
  bool boolean(bool) override { return scalar_error("boolean"); }
  bool string(string_t&) override { return scalar_error("string"); }
  bool binary(binary_t&) override { return scalar_error("binary value"); }
  bool number_integer(number_integer_t v) override { return number(static_cast<double>(v), true); }
  bool number_unsigned(number_unsigned_t v) override { return number(static_cast<double>(v), true); }
  bool number_float(number_float_t v, const string_t&) override { return number(v, false); }

  bool start_object(std::size_t) override {
    if (!stack_.empty()) fail("unexpected object");
    stack_.push_back('o');
    return true;
  }
  bool end_object() override {
    stack_.pop_back();
    finish();
    return true;
  }
  bool key(string_t& k) override {
    if (k != "rows" && k != "cols" && k != "coefficients") fail("unknown key \"" + k + "\"");
    if (seen_.count(k)) fail("duplicate key \"" + k + "\"");
    seen_.insert(k);
    key_ = k;
    return true;
  }
  bool start_array(std::size_t) override {
    const std::size_t depth = stack_.size();
    if (depth == 0) fail("expected an object at the top level");
    if (key_ != "coefficients") fail("\"" + key_ + "\" must be a positive integer");
    if (depth == 1) {
      in_coefficients_ = true;
    } else if (depth == 2) {
      coeffs_.push_back(Coefficient{offset(), {}, {}, {}, false});
    } else if (depth == 3) {
      Coefficient& c = coeffs_.back();
      if (!c.values.empty() && !c.nested) fail("mixes numbers and nested rows");
      c.nested = true;
      c.row_offsets.push_back(offset());
      c.row_lengths.push_back(0);
    } else {
      fail("coefficients nested too deeply");
    }
    stack_.push_back('a');
    return true;
  }
  bool end_array() override {
    stack_.pop_back();
    if (stack_.size() == 1) in_coefficients_ = false;
    return true;
  }
  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
    std::string what = ex.what();
    const auto column = what.find("column");
    const auto colon = what.find(": ", column == std::string::npos ? 0 : column);
    if (colon != std::string::npos) what = what.substr(colon + 2);
    const Position pos = locate(text_, position == 0 ? 0 : position - 1);
    throw ParseError(source_, pos.line, pos.column, what);
  }

  AnalyticMatrixSeries result() const {
    std::vector<Matrix> out;
    for (const Coefficient& c : coeffs_) {
      Matrix m(rows_, cols_);
      for (Eigen::Index i = 0; i < rows_; ++i)
        for (Eigen::Index j = 0; j < cols_; ++j) m(i, j) = c.values[static_cast<std::size_t>(i * cols_ + j)];
      out.push_back(std::move(m));
    }
    return AnalyticMatrixSeries(std::move(out));
  }

 private:
  std::size_t offset() const { return static_cast<std::size_t>(*furthest_ - text_.data()); }

  [[noreturn]] void fail(const std::string& what, std::optional<std::size_t> at = std::nullopt) const {
    const Position pos = locate(text_, at.value_or(offset()));
    throw ParseError(source_, pos.line, pos.column, what);
  }

  bool scalar_error(const std::string& kind) {
    if (in_coefficients_) fail("coefficient entries must be numbers, found " + kind);
    if (stack_.empty()) fail("expected an object at the top level");
    fail("\"" + key_ + "\" must be a positive integer, found " + kind);
  }

  bool number(double v, bool integral) {
    const std::size_t depth = stack_.size();
    if (depth == 0) fail("expected an object at the top level");
    if (depth == 1) {
      if (key_ == "coefficients") fail("\"coefficients\" must be an array");
      if (!integral || v < 1) fail("\"" + key_ + "\" must be a positive integer");
      (key_ == "rows" ? rows_ : cols_) = static_cast<Eigen::Index>(v);
      return true;
    }
    if (depth == 2) fail("each coefficient must be an array of numbers");
    Coefficient& c = coeffs_.back();
    if (depth == 3 && c.nested) fail("mixes numbers and nested rows");
    if (!std::isfinite(v)) fail("non-finite coefficient entry");
    c.values.push_back(v);
    if (depth == 4) ++c.row_lengths.back();
    return true;
  }

  void finish() {
    const std::size_t end = offset();
    for (const char* k : {"rows", "cols", "coefficients"}) {
      if (!seen_.count(k)) fail(std::string("missing key \"") + k + "\"", end);
    }
    if (coeffs_.empty()) fail("at least one coefficient is required", end);
    const auto expected = static_cast<std::size_t>(rows_ * cols_);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      const Coefficient& c = coeffs_[k];
      const std::string label = "coefficients[" + std::to_string(k) + "]";
      if (c.nested) {
        if (c.row_lengths.size() != static_cast<std::size_t>(rows_)) {
          fail(label + " has " + std::to_string(c.row_lengths.size()) + " rows, expected " + std::to_string(rows_),
               c.offset);
        }
        for (std::size_t i = 0; i < c.row_lengths.size(); ++i) {
          if (c.row_lengths[i] != static_cast<std::size_t>(cols_)) {
            fail(label + " row " + std::to_string(i) + " has " + std::to_string(c.row_lengths[i]) +
                     " entries, expected " + std::to_string(cols_),
                 c.row_offsets[i]);
          }
        }
      } else if (c.values.size() != expected) {
        fail(label + " has " + std::to_string(c.values.size()) + " entries, expected rows*cols = " +
                 std::to_string(expected),
             c.offset);
      }
    }
  }

  const std::string& text_;
  const std::string& source_;
  const char** furthest_;
  std::vector<char> stack_;
  std::set<std::string> seen_;
  std::string key_;
  bool in_coefficients_ = false;
  Eigen::Index rows_ = 0;
  Eigen::Index cols_ = 0;
  std::vector<Coefficient> coeffs_;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc() && ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what)
    : InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

AnalyticMatrixSeries parse_series(const std::string& text, const std::string& source) {
  const char* furthest = text.data();
  SeriesHandler handler(text, source, &furthest);
  TrackingIterator first(text.data(), &furthest);
  TrackingIterator last(text.data() + text.size(), &furthest);
  nlohmann::json::sax_parse(first, last, &handler);
  return handler.result();
}

AnalyticMatrixSeries read_series_file(const std::string& path) { return parse_series(read_file(path), path); }

Json series_to_json(const AnalyticMatrixSeries& series) {
  Json coefficients = Json::array();
  for (const Matrix& c : series.coefficients()) {
    Json flat = Json::array();
    for (Eigen::Index i = 0; i < c.rows(); ++i)
      for (Eigen::Index j = 0; j < c.cols(); ++j) flat.push_back(c(i, j));
    coefficients.push_back(std::move(flat));
  }
  return Json{{"rows", series.rows()}, {"cols", series.cols()}, {"coefficients", std::move(coefficients)}};
}

Matrix parse_matrix_csv(const std::string& text, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  std::size_t blank_line = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    ++line_no;
    const std::string_view line(text.data() + start, end - start);
    if (trim(line).empty()) {
      if (blank_line == 0) blank_line = line_no;
    } else {
      if (blank_line != 0) throw ParseError(source, blank_line, 1, "blank line inside matrix");
      std::vector<double> row;
      std::size_t cell_start = 0;
      while (true) {
        std::size_t comma = line.find(',', cell_start);
        if (comma == std::string_view::npos) comma = line.size();
        const std::string_view cell = trim(line.substr(cell_start, comma - cell_start));
        double v = 0.0;
        if (!parse_double(cell, v)) {
          const std::string shown = cell.empty() ? "empty cell" : "non-numeric cell '" + std::string(cell) + "'";
          throw ParseError(source, line_no, cell_start + 1, shown);
        }
        row.push_back(v);
        if (comma == line.size()) break;
        cell_start = comma + 1;
      }
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw ParseError(source, line_no, 1,
                         "row has " + std::to_string(row.size()) + " cells, expected " +
                             std::to_string(rows.front().size()));
      }
      rows.push_back(std::move(row));
    }
    start = end + 1;
  }
  if (rows.empty()) throw ParseError(source, 1, 1, "no data");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix read_matrix_csv(const std::string& path) { return parse_matrix_csv(read_file(path), path); }

Vector read_vector_csv(const std::string& path) {
  const Matrix m = read_matrix_csv(path);
  if (m.cols() != 1) {
    throw InputError(path + ": expected a single-column vector, found " + std::to_string(m.cols()) + " columns");
  }
  return m.col(0);
}

Vector parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    double v = 0.0;
    if (!parse_double(trim(std::string_view(text).substr(start, comma - start)), v)) {
      throw InputError(what + ": cannot parse '" + text + "' as a comma-separated list of numbers");
    }
    values.push_back(v);
    if (comma == text.size()) break;
    start = comma + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Format resolve_format(const std::optional<std::string>& requested, bool stdout_is_terminal) {
  if (!requested) return stdout_is_terminal ? Format::Table : Format::Json;
  if (*requested == "table") return Format::Table;
  if (*requested == "json") return Format::Json;
  throw InputError("--format must be 'table' or 'json'");
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const std::vector<double>& v) { return Json(v); }

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cells.push_back(fmt(m(i, j)));
      width = std::max(width, cells.back().size());
    }
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << indent;
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "  " : "") << std::setw(static_cast<int>(width)) << cells[k++];
    out << '\n';
  }
}

std::string fmt_vector(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v(i));
  return s + ")";
}

std::string fmt_list(const std::vector<double>& v) {
  return fmt_vector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
}

std::optional<double> rank_tolerance_from_env() {
  const char* raw = std::getenv("PERTURB_RANK_TOL");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  double v = 0.0;
  if (!parse_double(trim(raw), v) || v < 0.0) {
    throw InputError(std::string("PERTURB_RANK_TOL must be a non-negative decimal, got '") + raw + "'");
  }
  return v;
}

}  // namespace perturb::cli
