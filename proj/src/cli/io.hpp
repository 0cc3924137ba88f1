#pragma once

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "perturb/errors.hpp"
#include "perturb/laurent.hpp"
#include "perturb/numerics.hpp"
#include "perturb/series.hpp"

namespace perturb::cli {

using Json = nlohmann::ordered_json;

// Malformed input file; the message carries source:line:column.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column, const std::string& what);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

std::string read_file(const std::string& path);

// {"rows": r, "cols": c, "coefficients": [[row-major A_0], [A_1], ...]}
AnalyticMatrixSeries parse_series(const std::string& text, const std::string& source = "<input>");
AnalyticMatrixSeries read_series_file(const std::string& path);
Json series_to_json(const AnalyticMatrixSeries& series);

// One matrix row per line, comma separated, no header.
Matrix parse_matrix_csv(const std::string& text, const std::string& source = "<input>");
Matrix read_matrix_csv(const std::string& path);
Vector read_vector_csv(const std::string& path);

// "1,1,1" -> (1, 1, 1)
Vector parse_number_list(const std::string& text, const std::string& what);

enum class Format { Table, Json };
// Explicit "table" / "json"; otherwise table on a terminal, json when redirected.
Format resolve_format(const std::optional<std::string>& requested, bool stdout_is_terminal);

Json to_json(const Matrix& m);  // nested row arrays
Json to_json(const Vector& v);
Json to_json(const std::vector<double>& v);

// 6 significant digits for table output.
std::string fmt(double x);
void print_matrix(std::ostream& out, const Matrix& m, const std::string& indent = "  ");
std::string fmt_vector(const Vector& v);
std::string fmt_list(const std::vector<double>& v);

// PERTURB_RANK_TOL, when set, as a non-negative decimal.
std::optional<double> rank_tolerance_from_env();

}  // namespace perturb::cli
