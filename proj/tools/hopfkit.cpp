#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopfkit/dispersion.hpp"
#include "hopfkit/hopf_multiple.hpp"
#include "hopfkit/hopf_single.hpp"
#include "hopfkit/pde_sim.hpp"
#include "hopfkit/reproduce.hpp"
#include "hopfkit/spectral.hpp"
#include "json_out.hpp"

namespace {

using namespace hopfkit;
using cli::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "nonsymmetric";
  std::optional<double> delta, epsilon0;
  std::optional<std::vector<double>> c;
  double k_min = -12, k_max = 12, k_step = 0.01;
  int n_max = 64;
  std::optional<double> lambda;
  double lambda_factor = 1.02;
  double T = 200, dt = 1e-3, sample_dt = 0.01, amp = 1e-4;
  int N = 64;
  int stride = 100, points = 64;
  std::string shift = "plus", form = "reference";
  std::string csv, tensor_csv, output;
  std::vector<int> criteria;
};

const std::set<std::string> kKeys{"model", "delta", "epsilon0", "c", "k_min", "k_max", "k_step", "n_max",
                                  "lambda", "lambda_factor", "T", "dt", "sample_dt", "amp", "N", "stride",
                                  "points", "shift", "form", "csv", "tensor_csv", "output", "criteria"};

void load_config(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!kKeys.count(key)) throw ConfigError("unknown config key: " + key);
  try {
    auto get = [&](const char* key, auto& dst) {
      if (j.contains(key)) dst = j.at(key).get<std::decay_t<decltype(dst)>>();
    };
    auto get_opt = [&](const char* key, auto& dst) {
      if (j.contains(key)) dst = j.at(key).get<typename std::decay_t<decltype(dst)>::value_type>();
    };
    get("model", cfg.model);
    get_opt("delta", cfg.delta);
    get_opt("epsilon0", cfg.epsilon0);
    get_opt("c", cfg.c);
    get("k_min", cfg.k_min);
    get("k_max", cfg.k_max);
    get("k_step", cfg.k_step);
    get("n_max", cfg.n_max);
    get_opt("lambda", cfg.lambda);
    get("lambda_factor", cfg.lambda_factor);
    get("T", cfg.T);
    get("dt", cfg.dt);
    get("sample_dt", cfg.sample_dt);
    get("amp", cfg.amp);
    get("N", cfg.N);
    get("stride", cfg.stride);
    get("points", cfg.points);
    get("shift", cfg.shift);
    get("form", cfg.form);
    get("csv", cfg.csv);
    get("tensor_csv", cfg.tensor_csv);
    get("output", cfg.output);
    get("criteria", cfg.criteria);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config value has the wrong type: ") + e.what());
  }
}

Model make_model(const RunConfig& cfg) {
  ModelKind kind;
  try {
    kind = parse_model_kind(cfg.model);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  Model d = default_model(kind);
  Vec4 c = d.c;
  if (cfg.c) {
    if (cfg.c->size() != 4) throw ConfigError("c needs exactly four coefficients");
    c = Vec4((*cfg.c)[0], (*cfg.c)[1], (*cfg.c)[2], (*cfg.c)[3]);
  }
  try {
    return build_model(kind, cfg.delta.value_or(d.delta), cfg.epsilon0.value_or(d.epsilon0), c);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void emit(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.output);
    if (!out) throw ConfigError("cannot write " + cfg.output);
    out << text;
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(9);
  return out;
}

// Crossing plus the symmetric-model reference wavelength.
std::pair<Model, CrossingResult> critical_model(const RunConfig& cfg) {
  Model m = make_model(cfg);
  const auto scan = eigen_branches(m, uniform_grid(cfg.k_min, cfg.k_max, cfg.k_step));
  const auto c = find_crossing(m, scan);
  if (m.kind == ModelKind::symmetric) m = with_lambda_ref(m, c.lambda0);
  return {m, c};
}

int cmd_model(const RunConfig& cfg) {
  const Model m = make_model(cfg);
  json j = cli::to_json(m);
  j["mass_structure"] = cli::to_json(check_mass_structure(m));
  j["reflection"] = cli::to_json(check_reflection(m));
  emit(cfg, j);
  return 0;
}

int cmd_dispersion(const RunConfig& cfg) {
  const Model m = make_model(cfg);
  const auto scan = eigen_branches(m, uniform_grid(cfg.k_min, cfg.k_max, cfg.k_step));
  const auto g = growth_rate_and_classify(scan);
  std::ostringstream csv;
  csv.precision(9);
  csv << "k,re_z1,re_z2,re_z3,re_z4,im_z1,im_z2,im_z3,im_z4,omega\n";
  for (std::size_t i = 0; i < scan.k.size(); ++i) {
    csv << scan.k[i];
    for (int q = 0; q < 4; ++q) csv << ',' << scan.z[i][q].real();
    for (int q = 0; q < 4; ++q) csv << ',' << scan.z[i][q].imag();
    csv << ',' << g.omega[i] << '\n';
  }
  if (cfg.csv.empty()) {
    std::cout << csv.str();
    return 0;
  }
  open_out(cfg.csv) << csv.str();
  json km = json::array();
  for (double k : g.k_max) km.push_back(cli::num(k));
  std::size_t amb = 0;
  for (bool b : scan.ambiguous) amb += b;
  emit(cfg, {{"classification", to_string(g.classification)},
             {"inconclusive", g.inconclusive},
             {"omega_max", cli::num(g.omega_max)},
             {"k_max", km},
             {"ambiguous_pairings", amb},
             {"csv", cfg.csv}});
  return 0;
}

int cmd_crossing(const RunConfig& cfg) {
  const Model m = make_model(cfg);
  const auto scan = eigen_branches(m, uniform_grid(cfg.k_min, cfg.k_max, cfg.k_step));
  json all = json::array();
  for (const auto& c : all_crossings(m, scan)) all.push_back(cli::to_json(c));
  json j = cli::to_json(find_crossing(m, scan));
  j["all_crossings"] = all;
  emit(cfg, j);
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto [m, c] = critical_model(cfg);
  json checks = json::object();
  bool ok = true;
  const auto mass = check_mass_structure(m);
  checks["mass_structure"] = cli::to_json(mass);
  ok = ok && mass.pass();
  const auto refl = check_reflection(m);
  checks["reflection"] = cli::to_json(refl);
  if (m.kind == ModelKind::symmetric) ok = ok && refl.satisfied();
  const auto nr = nonresonance_report(m, c.lambda0, c.kappa0, cfg.n_max);
  checks["nonresonance"] = cli::to_json(nr);
  ok = ok && nr.pass;
  const auto rd = resolvent_decay_check(m, c.lambda0, c.kappa0);
  checks["resolvent_decay"] = cli::to_json(rd);
  ok = ok && rd.pass;
  if (m.kind == ModelKind::symmetric) {
    try {
      const auto ss = semisimplicity_check(m, c.lambda0, c.kappa0);
      checks["semisimplicity"] = cli::to_json(ss);
      ok = ok && ss.pass;
    } catch (const SemisimplicityUnverified& e) {
      checks["semisimplicity"] = {{"status", "fail"}, {"error", e.what()}};
      ok = false;
    }
  } else {
    try {
      const auto crit = mode_eigensystem(m, c.lambda0, c.kappa0);
      checks["simplicity"] = {{"status", "pass"}, {"kernel_gap", cli::num(crit.kernel_gap)}};
    } catch (const SimplicityViolation& e) {
      checks["simplicity"] = {{"status", "fail"}, {"error", e.what()}};
      ok = false;
    }
  }
  emit(cfg, {{"model", to_string(m.kind)}, {"crossing", cli::to_json(c)}, {"checks", checks}, {"status", ok ? "pass" : "fail"}});
  return ok ? 0 : 1;
}

int cmd_hopf_single(const RunConfig& cfg) {
  const auto [m, c] = critical_model(cfg);
  emit(cfg, cli::to_json(analyze_single(m, c.lambda0, c.kappa0)));
  return 0;
}

int cmd_hopf_multiple(const RunConfig& cfg) {
  const auto [m, c] = critical_model(cfg);
  if (m.kind != ModelKind::symmetric) throw ConfigError("hopf-multiple needs the symmetric model");
  if (cfg.shift != "plus" && cfg.shift != "minus") throw ConfigError("shift must be plus or minus");
  if (cfg.form != "reference" && cfg.form != "literal") throw ConfigError("form must be reference or literal");
  const auto shift = cfg.shift == "plus" ? HarmonicShift::plus : HarmonicShift::minus;
  const auto form = cfg.form == "reference" ? RealForm::reference : RealForm::literal;
  const auto r = analyze_multiple(m, c.lambda0, c.kappa0, shift, form);
  if (!cfg.tensor_csv.empty()) {
    auto out = open_out(cfg.tensor_csv);
    out << "l,i,j,k,re,im\n";
    for (const auto& [key, v] : r.tensor.a)
      out << key[0] << ',' << key[1] << ',' << key[2] << ',' << key[3] << ',' << v.real() << ',' << v.imag() << '\n';
  }
  json j = cli::to_json(r);
  j["shift"] = cfg.shift;
  j["form"] = cfg.form;
  emit(cfg, j);
  return r.branch ? 0 : 1;
}

int cmd_simulate(const RunConfig& cfg) {
  const auto [m, c] = critical_model(cfg);
  const double lambda = cfg.lambda.value_or(cfg.lambda_factor * c.lambda0);
  if (lambda == 0) throw ConfigError("lambda must be nonzero");
  SimParams p;
  p.T = cfg.T;
  p.dt = cfg.dt;
  p.N = cfg.N;
  p.sample_dt = cfg.sample_dt;
  if (!(p.T > 0) || !(p.dt > 0) || !(p.sample_dt > 0) || p.N < 8 || cfg.stride < 1 || cfg.points < 1)
    throw ConfigError("simulation parameters must be positive and N >= 8");
  std::optional<std::ofstream> csv;
  if (!cfg.csv.empty()) {
    csv.emplace(open_out(cfg.csv));
    *csv << "t,x,y1,y2,y3,y4\n";
  }
  const auto d = run_diagnostics(m, lambda, p, default_perturbation(m, lambda, cfg.amp), true,
                                 csv ? &*csv : nullptr, cfg.stride, cfg.points);
  json j = cli::to_json(d);
  j["lambda"] = cli::num(lambda);
  j["lambda0"] = cli::num(c.lambda0);
  j["kappa0"] = cli::num(c.kappa0);
  emit(cfg, j);
  return d.blowup ? 1 : 0;
}

int cmd_reproduce(const RunConfig& cfg) {
  std::vector<int> ids = cfg.criteria;
  if (ids.empty())
    for (int i = 1; i <= criterion_count(); ++i) ids.push_back(i);
  bool all = true;
  std::printf("%-4s %-46s %-26s %-34s %-20s %s\n", "id", "check", "expected", "computed", "tolerance", "result");
  for (int id : ids) {
    if (id < 1 || id > criterion_count()) throw ConfigError("unknown criterion " + std::to_string(id));
    const auto r = run_criterion(id);
    for (const auto& row : r.rows)
      std::printf("%-4d %-46s %-26s %-34s %-20s %s\n", id, row.name.c_str(), row.expected.c_str(),
                  row.computed.c_str(), row.tolerance.c_str(),
                  row.informational ? "info" : (row.pass ? "pass" : "FAIL"));
    if (!r.error.empty()) std::printf("%-4d error: %s\n", id, r.error.c_str());
    all = all && r.pass();
  }
  std::printf("overall: %s\n", all ? "pass" : "FAIL");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf bifurcation toolkit for the four-species transport-reaction models"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration; flags override its values");

  // Flags are parsed into this overlay and applied over the config file.
  std::optional<std::string> o_model, o_shift, o_form, o_csv, o_tensor_csv, o_output;
  std::optional<double> o_delta, o_eps, o_kmin, o_kmax, o_kstep, o_lambda, o_lf, o_T, o_dt, o_sdt, o_amp;
  std::optional<int> o_nmax, o_N, o_stride, o_points;
  std::vector<double> o_c;
  std::vector<int> o_criteria;

  auto model_opts = [&](CLI::App* sub) {
    sub->add_option("--model", o_model, "nonsymmetric | symmetric");
    sub->add_option("--delta", o_delta);
    sub->add_option("--epsilon0", o_eps);
    sub->add_option("--c", o_c, "four nonlinearity coefficients")->expected(4)->delimiter(',');
    sub->add_option("--output,-o", o_output, "write JSON here instead of stdout");
  };
  auto grid_opts = [&](CLI::App* sub) {
    sub->add_option("--k-min", o_kmin);
    sub->add_option("--k-max", o_kmax);
    sub->add_option("--k-step", o_kstep);
  };

  auto* model = app.add_subcommand("model", "dump matrices and structural checks");
  model_opts(model);
  auto* disp = app.add_subcommand("dispersion", "eigenvalue branches over k as CSV");
  model_opts(disp);
  grid_opts(disp);
  disp->add_option("--csv", o_csv);
  auto* cross = app.add_subcommand("crossing", "imaginary-axis crossing (k0, kappa0, lambda0)");
  model_opts(cross);
  grid_opts(cross);
  auto* verify = app.add_subcommand("verify", "hypothesis checks at the crossing");
  model_opts(verify);
  grid_opts(verify);
  verify->add_option("--n-max", o_nmax);
  auto* single = app.add_subcommand("hopf-single", "crossing speed and bifurcation coefficient");
  model_opts(single);
  grid_opts(single);
  auto* multiple = app.add_subcommand("hopf-multiple", "reduced system at the double eigenvalue");
  model_opts(multiple);
  grid_opts(multiple);
  multiple->add_option("--shift", o_shift, "plus | minus");
  multiple->add_option("--form", o_form, "reference | literal");
  multiple->add_option("--tensor-csv", o_tensor_csv);
  auto* sim = app.add_subcommand("simulate", "pseudo-spectral run with diagnostics");
  model_opts(sim);
  grid_opts(sim);
  sim->add_option("--lambda", o_lambda);
  sim->add_option("--lambda-factor", o_lf, "lambda = factor * lambda0 when --lambda is absent");
  sim->add_option("--T", o_T);
  sim->add_option("--dt", o_dt);
  sim->add_option("--N", o_N);
  sim->add_option("--sample-dt", o_sdt);
  sim->add_option("--amp", o_amp);
  sim->add_option("--csv", o_csv, "space-time CSV (t, x, y1..y4)");
  sim->add_option("--stride", o_stride, "steps between CSV frames");
  sim->add_option("--points", o_points, "grid points per CSV frame");
  auto* repro = app.add_subcommand("reproduce", "run the reference-value suite");
  repro->add_option("--criteria", o_criteria)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) load_config(config_path, cfg);
    if (o_model) cfg.model = *o_model;
    if (o_delta) cfg.delta = o_delta;
    if (o_eps) cfg.epsilon0 = o_eps;
    if (!o_c.empty()) cfg.c = o_c;
    if (o_kmin) cfg.k_min = *o_kmin;
    if (o_kmax) cfg.k_max = *o_kmax;
    if (o_kstep) cfg.k_step = *o_kstep;
    if (o_nmax) cfg.n_max = *o_nmax;
    if (o_lambda) cfg.lambda = o_lambda;
    if (o_lf) cfg.lambda_factor = *o_lf;
    if (o_T) cfg.T = *o_T;
    if (o_dt) cfg.dt = *o_dt;
    if (o_N) cfg.N = *o_N;
    if (o_sdt) cfg.sample_dt = *o_sdt;
    if (o_amp) cfg.amp = *o_amp;
    if (o_stride) cfg.stride = *o_stride;
    if (o_points) cfg.points = *o_points;
    if (o_shift) cfg.shift = *o_shift;
    if (o_form) cfg.form = *o_form;
    if (o_csv) cfg.csv = *o_csv;
    if (o_tensor_csv) cfg.tensor_csv = *o_tensor_csv;
    if (o_output) cfg.output = *o_output;
    if (!o_criteria.empty()) cfg.criteria = o_criteria;
    if (!(cfg.k_max > cfg.k_min) || !(cfg.k_step > 0)) throw ConfigError("k grid needs k_min < k_max and k_step > 0");
    if (cfg.n_max < 2) throw ConfigError("n_max must be at least 2");

    if (*model) return cmd_model(cfg);
    if (*disp) return cmd_dispersion(cfg);
    if (*cross) return cmd_crossing(cfg);
    if (*verify) return cmd_verify(cfg);
    if (*single) return cmd_hopf_single(cfg);
    if (*multiple) return cmd_hopf_multiple(cfg);
    if (*sim) return cmd_simulate(cfg);
    if (*repro) return cmd_reproduce(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const hopfkit::Error& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
