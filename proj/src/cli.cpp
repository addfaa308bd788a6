// SPDX-License-Identifier: Apache-2.0
#include "adspec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adspec/ads.hpp"
#include "adspec/continuation.hpp"
#include "adspec/discrete.hpp"
#include "adspec/eigs.hpp"
#include "adspec/errors.hpp"
#include "adspec/fredholm.hpp"
#include "adspec/io.hpp"
#include "adspec/projector.hpp"
#include "adspec/semigroup.hpp"
#include "adspec/symbol.hpp"

namespace adspec
{

namespace
{

// Everything a run produces; flushed even when the run fails.
struct Output
{
  json doc = json::object();
  json checks = json::object();
  std::vector<std::pair<std::string, CsvTable>> tables;

  void check(const std::string &name, bool ok) { checks[name] = ok; }
  bool all_passed() const
  {
    for (const auto &c : checks.items())
    {
      if (!c.value().get<bool>()) return false;
    }
    return true;
  }
};

const std::string &flag(const RunConfig &cfg, const std::string &key)
{
  static const std::string empty;
  auto it = cfg.flags.find(key);
  return it == cfg.flags.end() ? empty : it->second;
}

double parse_double(const std::string &s, const std::string &what)
{
  try
  {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  }
  catch (const std::exception &)
  {
    throw ConfigError("--" + what + ": '" + s + "' is not a number");
  }
}

double flag_double(const RunConfig &cfg, const std::string &key, double def)
{
  const auto &s = flag(cfg, key);
  return s.empty() ? def : parse_double(s, key);
}

int flag_int(const RunConfig &cfg, const std::string &key, int def)
{
  const double v = flag_double(cfg, key, def);
  if (v != std::floor(v)) throw ConfigError("--" + key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> flag_list(const RunConfig &cfg, const std::string &key, const std::string &def, std::size_t n)
{
  std::string s = flag(cfg, key);
  if (s.empty()) s = def;
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item, key));
  if (out.size() != n) throw ConfigError("--" + key + " expects " + std::to_string(n) + " comma-separated numbers");
  return out;
}

cplx flag_cplx(const RunConfig &cfg, const std::string &key, const std::string &def)
{
  auto v = flag_list(cfg, key, def, 2);
  return {v[0], v[1]};
}

bool flag_set(const RunConfig &cfg, const std::string &key) { return flag(cfg, key) == "1"; }

std::string hex(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json load_input(const RunConfig &cfg)
{
  json doc = cfg.input_path.empty() ? json::object() : read_json_file(cfg.input_path);
  for (const auto &[key, value] : cfg.overrides)
  {
    json v;
    try
    {
      v = json::parse(value);
    }
    catch (const json::parse_error &)
    {
      v = value;
    }
    const auto dot = key.find('.');
    if (dot == std::string::npos)
    {
      doc[key] = v;
    }
    else
    {
      doc[key.substr(0, dot)][key.substr(dot + 1)] = v;
    }
  }
  return doc;
}

void load_problem(const RunConfig &cfg, Problem &p, Resolution &res)
{
  problem_from_json(load_input(cfg), p, res);
  p.validate();
  res.validate(p);
}

json eigen_json(cplx lambda, double residual)
{
  return json{{"re", lambda.real()}, {"im", lambda.imag()}, {"residual", residual}};
}

// Right-most root of the (l, pol) dispersion relation, Im >= 0 preferred.
cplx reference_root(const Problem &p, int l, Polarization pol)
{
  if (!p.epsilon.is_constant() || p.delta != 0.0)
  {
    throw PreconditionError("a closed-form reference root needs constant epsilon on the unperturbed sphere");
  }
  ModeProblem mode{l, pol, p.epsilon.constant, p.radius};
  auto roots = find_roots(mode, Rect{-3.0, -1e-3, -6.0, 6.0});
  if (roots.empty()) throw NoConvergence("no reference root in [-3, -1e-3] x [-6, 6]");
  cplx best = roots.front().lambda;
  for (const auto &r : roots)
  {
    const cplx z = r.lambda;
    if (z.real() > best.real() + 1e-12 || (std::abs(z.real() - best.real()) <= 1e-12 && z.imag() > best.imag()))
    {
      best = z;
    }
  }
  return best;
}

void run_symbol(const RunConfig &cfg, Output &out)
{
  if (!cfg.overrides.empty()) throw ConfigError("--set applies to problem descriptions, not to symbol");
  const SymmetricSystem sys = cfg.input_path.empty() ? maxwell_system() : system_from_json(read_json_file(cfg.input_path));
  const int samples = flag_int(cfg, "samples", 1000);
  out.doc["system"] = json{{"n", sys.n}, {"r", sys.r}};
  const SymbolSpectralData data = spectral_data(sys, samples);
  out.doc["d0"] = data.d0;
  out.doc["d"] = data.d;
  out.doc["v_min"] = data.v_min;
  out.doc["v_max"] = data.v_max;
  out.doc["rank_certified"] = true;
  out.doc["sphere_samples"] = static_cast<int>(data.directions.size());
  out.check("rank_certified", true);

  std::vector<CsvTable::Column> cols;
  for (int k = 0; k < sys.n; k++) cols.push_back({"omega_" + std::to_string(k + 1), "1"});
  cols.push_back({"speed_min", "length/time"});
  cols.push_back({"speed_max", "length/time"});
  CsvTable speeds(cols);
  for (std::size_t i = 0; i < data.directions.size(); i++)
  {
    std::vector<double> row(data.directions[i].data(), data.directions[i].data() + sys.n);
    const auto &sp = data.speeds[i];
    row.push_back(sp.empty() ? 0.0 : sp.back());
    row.push_back(sp.empty() ? 0.0 : sp.front());
    speeds.add(row);
  }
  out.tables.push_back({"speeds", speeds});

  const auto coeffs = char_poly_coeffs(sys, data);
  const BuildQReport q = build_Q(sys, coeffs, data.d0, 1e-9 * cfg.tol);
  out.doc["cayley_hamilton_max"] = q.cayley_hamilton_max;
  out.doc["cayley_hamilton_scale"] = q.cayley_hamilton_scale;
  out.check("cayley_hamilton", q.cayley_hamilton_max <= 1e-9 * cfg.tol * q.cayley_hamilton_scale);

  const auto xi = random_unit_vectors(sys.n, flag_int(cfg, "xi-samples", 100), static_cast<unsigned>(cfg.seed));
  const ExactSequenceReport ex = verify_exact_sequence(sys, q.Q, xi, 1e-8 * cfg.tol);
  out.doc["exact_sequence_max_angle"] = ex.max_angle;
  out.check("exact_sequence", ex.certified);

  const EllipticityReport el = check_L_ellipticity(sys, q.Q, data.d, data.v_min, {0.0}, data.directions);
  out.doc["ellipticity_min_sv"] = el.min_sv_at_tau0;
  out.check("ellipticity", el.min_sv_at_tau0 > 1e-8);

  if (flag_set(cfg, "divergence"))
  {
    if (sys.n != 3 || sys.r != 6) throw PreconditionError("--divergence needs the 3D Maxwell layout (n = 3, r = 6)");
    const ExactSequenceReport dv = verify_exact_sequence(sys, maxwell_divergence_Q(), xi, 1e-8 * cfg.tol);
    out.doc["divergence_q_max_angle"] = dv.max_angle;
    out.check("divergence_exact_sequence", dv.certified);
  }
}

void run_ads(const RunConfig &cfg, Output &out)
{
  if (!cfg.input_path.empty() || !cfg.overrides.empty())
  {
    throw ConfigError("ads takes its parameters from flags, not from an input document");
  }
  const double eps = flag_double(cfg, "epsilon", 1.0);
  const int lmax = flag_int(cfg, "lmax", 1);
  const auto box = flag_list(cfg, "region", "-3,-0.001,-6,6", 4);
  const std::string pols = flag(cfg, "pol").empty() ? "both" : flag(cfg, "pol");
  if (lmax < 1) throw ConfigError("--lmax must be >= 1");
  std::vector<Polarization> pl;
  if (pols == "te" || pols == "both") pl.push_back(Polarization::TE);
  if (pols == "tm" || pols == "both") pl.push_back(Polarization::TM);
  if (pl.empty()) throw ConfigError("--pol must be te, tm or both");
  const Rect rect{box[0], box[1], box[2], box[3]};

  CsvTable table({{"l", "1"},
                  {"pol", "label"},
                  {"re_lambda", "1/time"},
                  {"im_lambda", "1/time"},
                  {"pde_residual", "1"},
                  {"bc_residual", "1"}});
  json roots = json::array();
  bool bc_ok = true, pde_ok = true;
  out.doc["epsilon"] = eps;
  out.doc["region"] = box;
  for (int l = 1; l <= lmax; l++)
  {
    for (Polarization p : pl)
    {
      ModeProblem mode{l, p, eps, flag_double(cfg, "radius", 1.0)};
      for (const auto &r : find_roots(mode, rect))
      {
        table.add_text({std::to_string(l), to_string(p), format_double(r.lambda.real()), format_double(r.lambda.imag()),
                        format_double(r.pde_residual), format_double(r.bc_residual)});
        roots.push_back(json{{"l", l},
                             {"pol", to_string(p)},
                             {"re_lambda", r.lambda.real()},
                             {"im_lambda", r.lambda.imag()},
                             {"pde_residual", r.pde_residual},
                             {"bc_residual", r.bc_residual}});
        bc_ok = bc_ok && r.bc_residual < 1e-10 * cfg.tol;
        pde_ok = pde_ok && r.pde_residual < 1e-8 * cfg.tol;
      }
    }
  }
  out.doc["roots"] = roots;
  out.tables.push_back({"roots", table});
  out.check("bc_residual", bc_ok);
  out.check("pde_residual", pde_ok);
}

void describe_generator(const DiscreteGenerator &gen, Output &out)
{
  json modes = json::array();
  for (const auto &m : gen.modes) modes.push_back(m.label());
  out.doc["generator"] = json{{"unknowns", gen.size()},
                              {"nodes", gen.grid.N + 1},
                              {"modes", modes},
                              {"components", static_cast<int>(gen.components.size())},
                              {"hash", hex(gen.hash)},
                              {"skew_defect", gen.skew_defect()},
                              {"max_boundary_symmetric_eig", gen.max_boundary_symmetric_eig()}};
}

std::string stem_of(const RunConfig &cfg)
{
  std::string s = cfg.output_path;
  if (s.size() > 5 && s.substr(s.size() - 5) == ".json") s.resize(s.size() - 5);
  return s;
}

void run_spectrum(const RunConfig &cfg, Output &out)
{
  Problem p;
  Resolution res;
  load_problem(cfg, p, res);
  const cplx target = flag_cplx(cfg, "target", "-0.6,0");
  const int count = flag_int(cfg, "count", 4);
  const DiscreteGenerator gen = assemble(p, res);
  describe_generator(gen, out);

  if (flag_set(cfg, "coo"))
  {
    for (auto [name, m] : {std::pair{"K", &gen.K}, std::pair{"W", &gen.W}})
    {
      const std::string path = stem_of(cfg) + "_" + name + ".coo";
      std::ofstream os(path);
      if (!os) throw ConfigError("cannot write '" + path + "'");
      write_coo(os, *m);
    }
  }

  EigsOptions eo;
  eo.seed = cfg.seed;
  const auto ev = eigs_near(gen, target, count, eo);
  CsvTable table({{"index", "1"}, {"re_lambda", "1/time"}, {"im_lambda", "1/time"}, {"residual", "1"}});
  json list = json::array();
  bool ok = true;
  for (std::size_t i = 0; i < ev.size(); i++)
  {
    table.add({static_cast<double>(i), ev[i].lambda.real(), ev[i].lambda.imag(), ev[i].residual});
    list.push_back(eigen_json(ev[i].lambda, ev[i].residual));
    ok = ok && ev[i].residual <= 1e-8 * cfg.tol;
  }
  out.doc["target"] = cplx_to_json(target);
  out.doc["eigenvalues"] = list;
  out.tables.push_back({"eigenvalues", table});
  out.check("eigen_residuals", ok);

  const double radius = flag_double(cfg, "contour-radius", 0.0);
  if (radius > 0.0)
  {
    ContourSpec c{flag_cplx(cfg, "contour-center", format_double(target.real()) + "," + format_double(target.imag())),
                  radius, 32};
    c.validate();
    ProjectorOptions po;
    po.seed = cfg.seed;
    const ProjectorResult pr = spectral_projector(gen, c, po);
    json inside = json::array();
    for (cplx z : pr.eigenvalues_inside) inside.push_back(cplx_to_json(z));
    out.doc["projector"] = json{{"center", cplx_to_json(c.center)},
                                {"radius", c.radius},
                                {"rank", pr.rank},
                                {"trace", cplx_to_json(pr.trace)},
                                {"idempotency", pr.idempotency},
                                {"nodes_used", pr.nodes_used},
                                {"eigenvalues_inside", inside}};
    out.check("projector_trace_integer", std::abs(pr.trace - std::round(pr.trace.real())) < 1e-6 * cfg.tol);
    out.check("projector_idempotent", pr.idempotency < 1e-8 * cfg.tol);
  }
}

void run_evolve(const RunConfig &cfg, Output &out)
{
  Problem p;
  Resolution res;
  load_problem(cfg, p, res);
  const std::string init = flag(cfg, "init").empty() ? "eigenmode" : flag(cfg, "init");
  const int l = flag_int(cfg, "l", 1);
  const Polarization pol = polarization_from_string(flag(cfg, "pol").empty() ? "TE" : flag(cfg, "pol"));
  EvolveOptions eo;
  eo.T = flag_double(cfg, "T", 5.0);
  eo.dt = flag_double(cfg, "dt", 0.0);
  const int stride = flag_int(cfg, "stride", 10);
  if (!(eo.T > 0.0) || eo.dt < 0.0 || stride < 1) throw ConfigError("need T > 0, dt >= 0 and stride >= 1");

  const DiscreteGenerator gen = assemble(p, res);
  describe_generator(gen, out);
  VecC f;
  cplx lambda = 0.0;
  if (init == "eigenmode")
  {
    lambda = reference_root(p, l, pol);
    f = eigenmode_initial(gen, ModeProblem{l, pol, p.epsilon.constant, p.radius}, lambda);
    out.doc["lambda"] = cplx_to_json(lambda);
  }
  else if (init == "shell")
  {
    const int mode = gen.find_mode(l, 0, pol);
    if (mode < 0) throw PreconditionError("mode not present in the generator");
    const double r0 = flag_double(cfg, "r0", 2.0), r1 = flag_double(cfg, "r1", 3.0);
    f = shell_data(gen, mode, r0, r1);
    out.doc["shell"] = json::array({r0, r1});
  }
  else
  {
    throw ConfigError("--init must be eigenmode or shell");
  }
  out.doc["init"] = init;

  const EvolveTrace tr = evolve(gen, f, eo);
  const FluxAudit audit = energy_flux_audit(tr);
  CsvTable table({{"t", "time"}, {"energy", "energy"}, {"boundary_flux", "energy/time"}, {"absorber_loss", "energy/time"}});
  double growth = 0.0, mismatch = 0.0;
  for (int k = 0; k <= tr.steps; k++)
  {
    if (k % stride == 0 || k == tr.steps)
    {
      table.add({tr.t[k], tr.energy[k], tr.boundary_flux[k], tr.absorber_loss[k]});
    }
    if (k > 0) growth = std::max(growth, (tr.energy[k] - tr.energy[k - 1]) / tr.energy[0]);
    if (init == "eigenmode")
    {
      const double expect = std::exp(lambda.real() * tr.t[k]);
      mismatch = std::max(mismatch, std::abs(std::sqrt(tr.energy[k] / tr.energy[0]) - expect) / expect);
    }
  }
  out.tables.push_back({"energy", table});
  out.doc["dt"] = tr.dt;
  out.doc["steps"] = tr.steps;
  out.doc["final_relative_energy"] = tr.energy.back() / tr.energy.front();
  out.doc["max_step_growth"] = growth;
  out.doc["audit"] = json{{"max_identity_error", audit.max_identity_error},
                          {"max_boundary_flux", audit.max_boundary_flux},
                          {"mean_flux_rate", audit.mean_flux_rate},
                          {"mean_total_rate", audit.mean_total_rate}};
  out.check("energy_monotone", growth <= 1e-8 * cfg.tol);
  out.check("flux_nonpositive", audit.flux_nonpositive);
  out.check("energy_identity", audit.max_identity_error <= 1e-10 * cfg.tol);
  if (init == "eigenmode")
  {
    out.doc["max_norm_mismatch"] = mismatch;
    out.check("eigenmode_decay", mismatch < 0.01 * cfg.tol);
  }
}

void run_perturb(const RunConfig &cfg, Output &out)
{
  Problem p;
  Resolution res;
  load_problem(cfg, p, res);
  PerturbationPath path;
  path.base = p;
  path.resolution = res;
  path.family.kind = family_from_string(flag(cfg, "family").empty() ? "epsilon" : flag(cfg, "family"));
  const int gl = flag_int(cfg, "g-l", path.family.kind == FamilyKind::Shape ? 2 : 0);
  const int gm = flag_int(cfg, "g-m", 0);
  const double gc = flag_double(cfg, "g-c", 1.0);
  path.family.g = gl == 0 ? SphericalField{gc, {}} : SphericalField{0.0, {{gl, gm, gc}}};
  path.steps = PerturbationPath::uniform(flag_double(cfg, "delta-max", 0.2), flag_int(cfg, "steps", 11));

  const cplx seed = flag(cfg, "lambda").empty() ? reference_root(p, 1, Polarization::TE) : flag_cplx(cfg, "lambda", "");
  StepControl ctl;
  ctl.projector_ranks = !flag_set(cfg, "no-ranks");
  out.doc["family"] = to_string(path.family.kind);
  out.doc["g"] = field_to_json(path.family.g);
  out.doc["seed_lambda"] = cplx_to_json(seed);

  const ContinuationResult cr = continue_eigenvalue(path, seed, ctl);
  CsvTable table({{"delta", "1"}, {"re_lambda", "1/time"}, {"im_lambda", "1/time"}, {"rank", "1"}, {"residual", "1"}});
  json pts = json::array();
  double max_step = 0.0;
  for (std::size_t k = 0; k < cr.points.size(); k++)
  {
    const auto &q = cr.points[k];
    table.add({q.delta, q.lambda.real(), q.lambda.imag(), static_cast<double>(q.rank), q.residual});
    pts.push_back(json{{"delta", q.delta},
                       {"re", q.lambda.real()},
                       {"im", q.lambda.imag()},
                       {"rank", q.rank},
                       {"residual", q.residual},
                       {"gap", q.gap}});
    if (k > 0) max_step = std::max(max_step, std::abs(q.lambda - cr.points[k - 1].lambda));
  }
  out.tables.push_back({"path", table});
  out.doc["track_radius"] = cr.track_radius;
  out.doc["path"] = pts;
  out.doc["max_step"] = max_step;
  out.check("path_resolved", max_step < 0.05 * cfg.tol);

  const double radius = flag_double(cfg, "contour-radius", 0.0);
  if (radius > 0.0)
  {
    ContourSpec c{flag(cfg, "contour-center").empty() ? seed : flag_cplx(cfg, "contour-center", ""), radius, 32};
    const SplittingReport sr = splitting_report(path, c);
    int worst = 0;
    for (int d : sr.distinct) worst = std::max(worst, d);
    out.doc["splitting"] = json{{"center", cplx_to_json(c.center)},
                                {"radius", c.radius},
                                {"rank0", sr.rank0},
                                {"deltas", sr.deltas},
                                {"counts", sr.counts},
                                {"distinct", sr.distinct},
                                {"complete", sr.complete},
                                {"failure", sr.failure}};
    out.check("total_multiplicity_constant", sr.complete && sr.total_constant);
    out.check("splitting_bounded_by_rank", worst <= sr.rank0);
  }
}

void run_fredholm(const RunConfig &cfg, Output &out)
{
  const std::string family_path = !flag(cfg, "family").empty() ? flag(cfg, "family") : cfg.input_path;
  if (flag_set(cfg, "demo") == !family_path.empty())
  {
    throw ConfigError("fredholm needs exactly one of --demo and --family");
  }
  if (flag_set(cfg, "demo"))
  {
    const FredholmDemo demo = fredholm_demo(cfg.seed, flag_int(cfg, "families", 20));
    CsvTable table({{"family", "1"}, {"dim", "1"}, {"planted_points", "1"}, {"found_points", "1"}, {"passed", "bool"}});
    json recs = json::array();
    for (std::size_t i = 0; i < demo.records.size(); i++)
    {
      const auto &r = demo.records[i];
      table.add({static_cast<double>(i), static_cast<double>(r.dim), static_cast<double>(r.planted_points),
                 static_cast<double>(r.found_points), r.passed ? 1.0 : 0.0});
      recs.push_back(json{{"dim", r.dim}, {"planted", r.planted_points}, {"found", r.found_points},
                          {"passed", r.passed}, {"failure", r.failure}});
    }
    out.tables.push_back({"demo", table});
    out.doc["families"] = demo.families;
    out.doc["passed"] = demo.passed;
    out.doc["records"] = recs;
    out.check("planted_families", demo.passed == demo.families);
    return;
  }
  const AnalyticFamily fam = family_from_json(read_json_file(family_path));
  const Classification c = classify(fam);
  out.doc["index"] = fam.rows - fam.cols;
  out.doc["classification"] = to_string(c.kind);
  out.doc["reason"] = c.reason;
  CsvTable table({{"re_tau", "1"}, {"im_tau", "1"}, {"multiplicity", "1"}, {"schur_multiplicity", "1"},
                  {"pole_order", "1"}});
  json pts = json::array();
  for (const auto &pt : c.points)
  {
    const PrincipalPart pp = meromorphic_inverse_data(fam, pt.tau);
    table.add({pt.tau.real(), pt.tau.imag(), static_cast<double>(pt.multiplicity),
               static_cast<double>(pt.schur_multiplicity), static_cast<double>(pp.pole_order)});
    pts.push_back(json{{"tau", cplx_to_json(pt.tau)},
                       {"multiplicity", pt.multiplicity},
                       {"schur_multiplicity", pt.schur_multiplicity},
                       {"pole_order", pp.pole_order},
                       {"principal_ranks", pp.ranks}});
  }
  out.tables.push_back({"singular_set", table});
  out.doc["singular_points"] = pts;
  out.check("schur_cross_validation", c.cross_validated);
}

std::string table_path(const RunConfig &cfg, const std::string &name) { return stem_of(cfg) + "_" + name + ".csv"; }

void flush(const RunConfig &cfg, Output &out, const std::string &status, const Error *err)
{
  json report = json::object();
  report["subcommand"] = cfg.subcommand;
  report["status"] = status;
  report["seed"] = cfg.seed;
  report["tol"] = cfg.tol;
  if (err) report["error"] = json{{"kind", err->kind()}, {"message", err->what()}};
  report["checks"] = out.checks;
  json tables = json::array();
  for (const auto &[name, t] : out.tables)
  {
    const std::string path = table_path(cfg, name);
    t.write_file(path);
    tables.push_back(std::filesystem::path(path).filename().string());
  }
  report["tables"] = tables;
  report["result"] = out.doc;
  std::ofstream os(cfg.output_path);
  if (!os) throw ConfigError("cannot write '" + cfg.output_path + "'");
  os << report.dump(2) << '\n';
}

}  // namespace

int run(const RunConfig &cfg_in)
{
  RunConfig cfg = cfg_in;
  if (cfg.output_path.empty())
  {
    const char *dir = std::getenv("ADSPEC_OUTPUT_DIR");
    cfg.output_path = (dir && *dir ? std::string(dir) : std::string(".")) + "/" + cfg.subcommand + ".json";
  }
  Output out;
  try
  {
    if (cfg.threads < 0 || !(cfg.tol > 0.0)) throw ConfigError("--threads must be >= 0 and --tol > 0");
    if (cfg.threads > 0) set_num_threads(cfg.threads);
    const auto parent = std::filesystem::path(cfg.output_path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);

    if (cfg.subcommand == "symbol")
      run_symbol(cfg, out);
    else if (cfg.subcommand == "ads")
      run_ads(cfg, out);
    else if (cfg.subcommand == "spectrum")
      run_spectrum(cfg, out);
    else if (cfg.subcommand == "evolve")
      run_evolve(cfg, out);
    else if (cfg.subcommand == "perturb")
      run_perturb(cfg, out);
    else if (cfg.subcommand == "fredholm")
      run_fredholm(cfg, out);
    else
      throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");

    const bool ok = out.all_passed();
    flush(cfg, out, ok ? "PASSED" : "FAILED", nullptr);
    std::cout << cfg.subcommand << ": " << (ok ? "PASSED" : "FAILED") << " -> " << cfg.output_path << '\n';
    return ok ? ExitOk : ExitChecksFailed;
  }
  catch (const Error &e)
  {
    std::cerr << cfg.subcommand << ": " << e.kind() << ": " << e.what() << '\n';
    try
    {
      flush(cfg, out, "FAILED", &e);
    }
    catch (const std::exception &w)
    {
      std::cerr << "could not write the report: " << w.what() << '\n';
    }
    return e.is_config() ? ExitConfig : ExitCompute;
  }
  catch (const std::filesystem::filesystem_error &e)
  {
    std::cerr << cfg.subcommand << ": " << e.what() << '\n';
    return ExitConfig;
  }
  catch (const std::exception &e)
  {
    std::cerr << cfg.subcommand << ": internal error: " << e.what() << '\n';
    return ExitCompute;
  }
}

int run_cli(int argc, char **argv)
{
  CLI::App app{"Exterior dissipative Maxwell spectra: symbols, resonances, projectors, evolution"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::vector<std::string> sets;
  app.add_option("--input", cfg.input_path, "Input document (JSON)");
  app.add_option("--output", cfg.output_path, "Report path; tables go next to it");
  app.add_option("--seed", cfg.seed, "Seed for every randomised step");
  app.add_option("--threads", cfg.threads, "OpenMP threads (0 = default)");
  app.add_option("--tol", cfg.tol, "Scale applied to every pass/fail threshold");
  app.add_option("--set", sets, "key=value override of the input document");

  std::map<std::string, std::string> &fl = cfg.flags;
  auto opt = [&](CLI::App *sub, const std::string &name, const std::string &help) {
    sub->add_option("--" + name, fl[name], help);
  };
  std::map<std::string, bool> bools;
  auto flag_opt = [&](CLI::App *sub, const std::string &name, const std::string &help) {
    sub->add_flag("--" + name, bools[name], help);
  };

  auto *sym = app.add_subcommand("symbol", "Certify the symbol of a first-order symmetric system");
  opt(sym, "samples", "Sphere samples (default 1000)");
  opt(sym, "xi-samples", "Random directions for the exact-sequence check (default 100)");
  flag_opt(sym, "divergence", "Also check the first-order divergence Q");

  auto *ads = app.add_subcommand("ads", "Decaying modes of the sphere from the dispersion relation");
  opt(ads, "epsilon", "Boundary coefficient (default 1)");
  opt(ads, "lmax", "Largest harmonic degree (default 1)");
  opt(ads, "region", "re0,re1,im0,im1 (default -3,-0.001,-6,6)");
  opt(ads, "pol", "te, tm or both");
  opt(ads, "radius", "Obstacle radius (default 1)");

  auto *spec = app.add_subcommand("spectrum", "Eigenvalues of the discrete generator");
  opt(spec, "target", "re,im shift (default -0.6,0)");
  opt(spec, "count", "Number of eigenvalues (default 4)");
  opt(spec, "contour-radius", "Also compute the spectral projector on this circle");
  opt(spec, "contour-center", "re,im (default: the target)");
  flag_opt(spec, "coo", "Export K and W in coordinate format");

  auto *ev = app.add_subcommand("evolve", "Time evolution with energy bookkeeping");
  opt(ev, "init", "eigenmode or shell");
  opt(ev, "T", "Final time (default 5)");
  opt(ev, "dt", "Time step (default: stability-limited)");
  opt(ev, "l", "Harmonic degree of the initial data (default 1)");
  opt(ev, "pol", "TE or TM (default TE)");
  opt(ev, "r0", "Inner radius of shell data (default 2)");
  opt(ev, "r1", "Outer radius of shell data (default 3)");
  opt(ev, "stride", "Write every stride-th step (default 10)");

  auto *pt = app.add_subcommand("perturb", "Continue an eigenvalue along a perturbation family");
  opt(pt, "family", "epsilon, shape or coefficient");
  opt(pt, "delta-max", "Largest delta (default 0.2)");
  opt(pt, "steps", "Samples including delta = 0 (default 11)");
  opt(pt, "g-l", "Degree of the perturbation profile (0 = constant)");
  opt(pt, "g-m", "Order of the perturbation profile");
  opt(pt, "g-c", "Coefficient of the perturbation profile (default 1)");
  opt(pt, "lambda", "re,im starting eigenvalue (default: reference TE l = 1 root)");
  opt(pt, "contour-radius", "Also count eigenvalues inside this circle along the path");
  opt(pt, "contour-center", "re,im (default: the starting eigenvalue)");
  flag_opt(pt, "no-ranks", "Skip the projector rank at each step");

  auto *fr = app.add_subcommand("fredholm", "Analytic matrix families: classification and inverse data");
  flag_opt(fr, "demo", "Planted-family round trip");
  opt(fr, "families", "Number of planted families for --demo (default 20)");
  opt(fr, "family", "Family file (list of coefficient matrices)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int rc = app.exit(e);
    return rc == 0 ? ExitOk : ExitConfig;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  for (auto it = fl.begin(); it != fl.end();)
  {
    it = it->second.empty() ? fl.erase(it) : std::next(it);
  }
  for (const auto &[k, v] : bools)
  {
    if (v) fl[k] = "1";
  }
  for (const auto &s : sets)
  {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
    {
      std::cerr << "--set expects key=value, got '" << s << "'\n";
      return ExitConfig;
    }
    cfg.overrides[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return run(cfg);
}

}  // namespace adspec
