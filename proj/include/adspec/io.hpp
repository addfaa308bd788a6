// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "adspec/discrete.hpp"
#include "adspec/fredholm.hpp"
#include "adspec/symbol.hpp"

namespace adspec
{

using json = nlohmann::ordered_json;

json read_json_file(const std::string &path);

// Throws ConfigError naming the first key of obj not in `allowed`.
void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed, const std::string &where);

// {"n": int, "r": int, "A": [n row-major r x r matrices]}
SymmetricSystem system_from_json(const json &j);
json system_to_json(const SymmetricSystem &sys);

// epsilon: number | [{"l","m","c"}...] | {"constant": x, "terms": [...]}
SphericalField field_from_json(const json &j, const std::string &where);
json field_to_json(const SphericalField &f);

// Problem file: epsilon, delta, shape, radius, coefficient_scale, reflecting,
// L_max, N_r, R_max, absorber {r_start, sigma_max, power}, clustering,
// cutoff_length, te, tm, all_m. Missing keys keep the defaults.
void problem_from_json(const json &j, Problem &p, Resolution &res);

// Either a bare list of coefficient matrices (centre 0, radius 1) or
// {"center": [re, im], "radius": r, "truncated": bool, "coefficients": [...]}.
// Matrix entries are numbers or [re, im] pairs.
AnalyticFamily family_from_json(const json &j);

json cplx_to_json(cplx z);

// Shortest round-trip decimal, independent of the C locale.
std::string format_double(double x);

// Comma-separated table whose header row names each column with its unit,
// e.g. "t [1]". Rows are written as they come.
class CsvTable
{
public:
  struct Column
  {
    std::string name, unit;
  };
  explicit CsvTable(std::vector<Column> cols);
  void add(const std::vector<double> &row);
  void add_text(const std::vector<std::string> &row);
  void write(std::ostream &os) const;
  void write_file(const std::string &path) const;
  std::size_t rows() const { return rows_.size(); }

private:
  std::vector<Column> cols_;
  std::vector<std::string> rows_;
};

}  // namespace adspec
