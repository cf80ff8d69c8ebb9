#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stcf/quadform.hpp"
#include "stcf/solver1d.hpp"
#include "stcf/solverhd.hpp"

namespace stcf {

using Json = nlohmann::json;

inline constexpr const char* kFormatTag = "stcf-v1";

/// Invalid input; field() names the offending location, e.g. "terms[2].lambda".
class InputError : public std::invalid_argument {
 public:
  InputError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Checks the top-level "format" tag; a missing tag is accepted.
void check_format(const Json& doc);

/// A number, or one of the strings "inf" / "+inf" / "infinity".
double parse_lambda(const Json& v, const std::string& field);
Json lambda_to_json(double lambda);

/// {"A": [[..]], "b": [..], "c": .., "lambda": ..}. In one dimension A and b
/// may also be plain numbers. `dim` = 0 accepts any dimension.
TruncatedQuadratic parse_truncated_quadratic(const Json& v, const std::string& field, std::size_t dim = 0);
Json truncated_quadratic_to_json(const TruncatedQuadratic& tq);

/// {"format": "stcf-v1", "terms": [...]}: all terms share one dimension.
std::vector<TruncatedQuadratic> parse_quadratic_problem(const Json& doc, std::size_t dim = 0);
Json quadratic_problem_to_json(const std::vector<TruncatedQuadratic>& fs);

/// {"format": "stcf-v1", "dim": d, "terms": [...], "x0": [...]?}. Each term
/// has a "support" list and either local quadratic coefficients A/b/c or a
/// ridge form "coefs" with scalar "a", "b", "c" for 1/2 a z^2 + b z + c.
SparseTruncatedSum parse_sparse_problem(const Json& doc, Vec* x0 = nullptr);

Json solution_to_json(const Solution& s);

Json read_json_file(const std::string& path);

/// Numeric table. A leading "# format: ..." line is checked, other '#'
/// lines are skipped, and a first row with non-numeric cells is the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by header name; throws InputError if absent.
  std::size_t column(const std::string& name, const std::string& source) const;
};
CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv_file(const std::string& path);

/// Fixed 12-decimal rendering used for all printed numbers.
std::string fmt(double v);

}  // namespace stcf
