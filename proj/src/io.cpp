// SPDX-License-Identifier: Apache-2.0
#include "adspec/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "adspec/errors.hpp"

namespace adspec
{

json read_json_file(const std::string &path)
{
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed, const std::string &where)
{
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto &item : obj.items())
  {
    bool ok = false;
    for (const char *a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

namespace
{

template <class T>
T get_as(const json &j, const std::string &what)
{
  try
  {
    return j.get<T>();
  }
  catch (const json::exception &)
  {
    throw ConfigError(what + " has the wrong type");
  }
}

cplx entry_from_json(const json &e, const std::string &what)
{
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
  {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw ConfigError(what + ": entries must be numbers or [re, im] pairs");
}

MatC matrix_from_json(const json &m, const std::string &what)
{
  if (!m.is_array() || m.empty() || !m[0].is_array())
  {
    throw ConfigError(what + " must be a non-empty nested array");
  }
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = static_cast<Eigen::Index>(m[0].size());
  MatC M(rows, cols);
  for (Eigen::Index i = 0; i < rows; i++)
  {
    if (!m[i].is_array() || static_cast<Eigen::Index>(m[i].size()) != cols)
    {
      throw DimensionMismatch(what + ": ragged rows");
    }
    for (Eigen::Index k = 0; k < cols; k++) M(i, k) = entry_from_json(m[i][k], what);
  }
  return M;
}

}  // namespace

SymmetricSystem system_from_json(const json &j)
{
  reject_unknown_keys(j, {"n", "r", "A"}, "system description");
  if (!j.contains("n") || !j.contains("r") || !j.contains("A"))
  {
    throw ConfigError("system description needs n, r and A");
  }
  SymmetricSystem sys;
  sys.n = get_as<int>(j["n"], "n");
  sys.r = get_as<int>(j["r"], "r");
  if (!j["A"].is_array()) throw ConfigError("A must be a list of matrices");
  for (std::size_t k = 0; k < j["A"].size(); k++)
  {
    MatC M = matrix_from_json(j["A"][k], "A[" + std::to_string(k) + "]");
    if (M.imag().cwiseAbs().maxCoeff() != 0.0) throw InvalidSystem("coefficient matrices must be real");
    sys.A.push_back(M.real());
  }
  sys.validate();
  return sys;
}

json system_to_json(const SymmetricSystem &sys)
{
  json A = json::array();
  for (const auto &M : sys.A)
  {
    json rows = json::array();
    for (Eigen::Index i = 0; i < M.rows(); i++)
    {
      json row = json::array();
      for (Eigen::Index k = 0; k < M.cols(); k++) row.push_back(M(i, k));
      rows.push_back(row);
    }
    A.push_back(rows);
  }
  return json{{"n", sys.n}, {"r", sys.r}, {"A", A}};
}

SphericalField field_from_json(const json &j, const std::string &where)
{
  SphericalField f;
  auto terms = [&](const json &list) {
    if (!list.is_array()) throw ConfigError(where + ": terms must be a list");
    for (const auto &t : list)
    {
      reject_unknown_keys(t, {"l", "m", "c"}, where + " term");
      if (!t.contains("l") || !t.contains("c")) throw ConfigError(where + ": term needs l and c");
      f.terms.push_back({get_as<int>(t["l"], "l"), t.contains("m") ? get_as<int>(t["m"], "m") : 0,
                         get_as<double>(t["c"], "c")});
    }
  };
  if (j.is_number())
  {
    f.constant = j.get<double>();
  }
  else if (j.is_array())
  {
    terms(j);
  }
  else if (j.is_object())
  {
    reject_unknown_keys(j, {"constant", "terms"}, where);
    if (j.contains("constant")) f.constant = get_as<double>(j["constant"], where + ".constant");
    if (j.contains("terms")) terms(j["terms"]);
  }
  else
  {
    throw ConfigError(where + " must be a number, a term list or an object");
  }
  return f;
}

json field_to_json(const SphericalField &f)
{
  json t = json::array();
  for (const auto &x : f.terms) t.push_back(json{{"l", x.l}, {"m", x.m}, {"c", x.c}});
  return json{{"constant", f.constant}, {"terms", t}};
}

void problem_from_json(const json &j, Problem &p, Resolution &res)
{
  reject_unknown_keys(j,
                      {"epsilon", "delta", "shape", "radius", "coefficient_scale", "reflecting", "L_max", "N_r",
                       "R_max", "absorber", "clustering", "cutoff_length", "te", "tm", "all_m"},
                      "problem description");
  if (j.contains("epsilon")) p.epsilon = field_from_json(j["epsilon"], "epsilon");
  if (j.contains("shape")) p.shape = field_from_json(j["shape"], "shape");
  if (j.contains("delta")) p.delta = get_as<double>(j["delta"], "delta");
  if (j.contains("radius")) p.radius = get_as<double>(j["radius"], "radius");
  if (j.contains("coefficient_scale")) p.coefficient_scale = get_as<double>(j["coefficient_scale"], "coefficient_scale");
  if (j.contains("reflecting")) p.reflecting = get_as<bool>(j["reflecting"], "reflecting");
  if (j.contains("L_max")) res.L_max = get_as<int>(j["L_max"], "L_max");
  if (j.contains("N_r")) res.N_r = get_as<int>(j["N_r"], "N_r");
  if (j.contains("R_max")) res.R_max = get_as<double>(j["R_max"], "R_max");
  if (j.contains("clustering")) res.clustering = get_as<double>(j["clustering"], "clustering");
  if (j.contains("cutoff_length")) res.cutoff_length = get_as<double>(j["cutoff_length"], "cutoff_length");
  if (j.contains("te")) res.te = get_as<bool>(j["te"], "te");
  if (j.contains("tm")) res.tm = get_as<bool>(j["tm"], "tm");
  if (j.contains("all_m")) res.all_m = get_as<bool>(j["all_m"], "all_m");
  if (j.contains("absorber"))
  {
    const json &a = j["absorber"];
    reject_unknown_keys(a, {"r_start", "sigma_max", "power"}, "absorber");
    if (a.contains("r_start")) res.absorber.r_start = get_as<double>(a["r_start"], "absorber.r_start");
    if (a.contains("sigma_max")) res.absorber.sigma_max = get_as<double>(a["sigma_max"], "absorber.sigma_max");
    if (a.contains("power")) res.absorber.power = get_as<double>(a["power"], "absorber.power");
  }
}

AnalyticFamily family_from_json(const json &j)
{
  AnalyticFamily f;
  const json *list = &j;
  if (j.is_object())
  {
    reject_unknown_keys(j, {"center", "radius", "truncated", "coefficients"}, "family description");
    if (!j.contains("coefficients")) throw ConfigError("family description needs coefficients");
    if (j.contains("center")) f.center = entry_from_json(j["center"], "center");
    if (j.contains("radius")) f.radius = get_as<double>(j["radius"], "radius");
    if (j.contains("truncated")) f.truncated = get_as<bool>(j["truncated"], "truncated");
    list = &j["coefficients"];
  }
  if (!list->is_array() || list->empty()) throw ConfigError("family needs a non-empty list of coefficient matrices");
  for (std::size_t k = 0; k < list->size(); k++)
  {
    f.coeffs.push_back(matrix_from_json((*list)[k], "coefficient " + std::to_string(k)));
  }
  f.rows = static_cast<int>(f.coeffs[0].rows());
  f.cols = static_cast<int>(f.coeffs[0].cols());
  f.validate();
  return f;
}

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::string format_double(double x)
{
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<Column> cols) : cols_(std::move(cols)) {}

void CsvTable::add(const std::vector<double> &row)
{
  std::vector<std::string> s;
  s.reserve(row.size());
  for (double x : row) s.push_back(format_double(x));
  add_text(s);
}

void CsvTable::add_text(const std::vector<std::string> &row)
{
  if (row.size() != cols_.size()) throw DimensionMismatch("row width does not match the table header");
  std::string line;
  for (std::size_t i = 0; i < row.size(); i++)
  {
    if (i) line += ',';
    line += row[i];
  }
  rows_.push_back(std::move(line));
}

void CsvTable::write(std::ostream &os) const
{
  for (std::size_t i = 0; i < cols_.size(); i++)
  {
    if (i) os << ',';
    os << cols_[i].name << " [" << cols_[i].unit << ']';
  }
  os << '\n';
  for (const auto &r : rows_) os << r << '\n';
}

void CsvTable::write_file(const std::string &path) const
{
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  write(out);
}

}  // namespace adspec
