#include "lefspec/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "lefspec/constants.hpp"
#include "lefspec/radial_lab.hpp"
#include "lefspec/reduction.hpp"

namespace lefspec {

using nlohmann::json;

namespace {

const std::map<std::string, Subcommand>& subcommand_names() {
  static const std::map<std::string, Subcommand> names = {
      {"constants", Subcommand::constants},
      {"green-check", Subcommand::green_check},
      {"reduce", Subcommand::reduce},
      {"radial-lab", Subcommand::radial_lab},
      {"verify-all", Subcommand::verify_all},
  };
  return names;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("config: unknown key \"" + where + it.key() + "\"");
}

json config_json(const RunConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand_name();
  j["n"] = cfg.n;
  if (!cfg.oracle.unit_ball) {
    j["oracle"] = {{"type", "scaled-ball"}, {"center", cfg.oracle.center},
                   {"radius", cfg.oracle.radius}};
  } else {
    j["oracle"] = {{"type", "unit-ball"}};
  }
  j["lambdas"] = cfg.lambdas;
  j["points"] = cfg.points;
  j["epsilons"] = cfg.epsilons;
  j["out_dir"] = cfg.out_dir;
  j["tolerances"] = {{"green", cfg.tolerances.green},
                     {"stationarity", cfg.tolerances.stationarity},
                     {"profile", cfg.tolerances.profile}};
  j["green_order"] = cfg.green_order;
  j["mesh"] = {{"coreCount", cfg.coreCount}, {"outerCount", cfg.outerCount}};
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_report(const RunConfig& cfg, const std::string& name, json body) {
  body["config"] = config_json(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/" + name, body.dump(2) + "\n");
}

std::unique_ptr<GreenOracle> make_oracle(const RunConfig& cfg) {
  if (cfg.oracle.unit_ball) return std::make_unique<UnitBallOracle>(cfg.n);
  return std::make_unique<ScaledBallOracle>(cfg.oracle.center, cfg.oracle.radius);
}

json constants_json(const ConstantsTable& t) {
  return json{{"n", t.n},
              {"beta_n", t.beta_n},
              {"gamma_n", t.gamma_n},
              {"sphere_area", t.sphere_area},
              {"c1_energy", t.c1_energy},
              {"c2_energy", t.c2_energy},
              {"C0", t.C0},
              {"C1", t.C1},
              {"C2", t.C2},
              {"C3", t.C3},
              {"C4", t.C4},
              {"C5", t.C5},
              {"c0_spec", t.c0_spec},
              {"c1_spec", t.c1_spec},
              {"b1_base", t.b1_base}};
}

json matrix_json(const SymmetricMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.order(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.order(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

int run_constants(const RunConfig& cfg) {
  const ConstantsTable t = build_constants(cfg.n);
  write_report(cfg, "constants_n" + std::to_string(cfg.n) + ".json",
               json{{"constants", constants_json(t)}});
  return 0;
}

int run_green_check(const RunConfig& cfg) {
  auto oracle = make_oracle(cfg);
  std::vector<Point> pts = cfg.points;
  if (pts.empty()) {
    // deterministic default sample: a few interior points on a diagonal
    for (int k = 1; k <= 4; ++k) {
      Point x(static_cast<std::size_t>(cfg.n), 0.0);
      x[0] = 0.15 * k;
      x[static_cast<std::size_t>(cfg.n) - 1] = 0.1 * k - 0.05;
      pts.push_back(x);
    }
  }
  json per_point = json::array();
  double worst = 0.0;
  for (const auto& x0 : pts) {
    const RobinIdentityReport r = robin_identities_check(*oracle, x0, cfg.green_order);
    worst = std::max(worst, r.max_residual());
    per_point.push_back(json{{"point", x0},
                             {"flux_tau", r.residual_flux_tau},
                             {"flux_grad_tau", r.residual_flux_grad_tau},
                             {"flux_hess_tau", r.residual_flux_hess_tau}});
  }
  std::vector<std::pair<Point, Point>> samples;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) samples.emplace_back(pts[i], pts[i + 1]);
  const double grad_dev = samples.empty() ? 0.0 : grad_checks(*oracle, samples);
  const bool pass = worst <= cfg.tolerances.green && grad_dev <= 1e-6;
  write_report(cfg, "green_check_n" + std::to_string(cfg.n) + ".json",
               json{{"identities", per_point},
                    {"worst_identity_residual", worst},
                    {"derivative_check_worst", grad_dev},
                    {"pass", pass}});
  return pass ? 0 : 1;
}

json reduce_body(const RunConfig& cfg, const GreenOracle& oracle, const ConstantsTable& table,
                 Configuration& critical) {
  Configuration cfg0;
  cfg0.n = cfg.n;
  cfg0.m = static_cast<int>(cfg.lambdas.size());
  cfg0.lambdas = cfg.lambdas;
  cfg0.points = cfg.points;
  critical = find_critical(cfg0, oracle, table);
  const ReductionMatrices mat = build_matrices(critical, oracle, table, 1e-6);
  const BandSpectra sp = spectra(mat);
  const auto preds = predict(sp, table, cfg.n, critical.m);
  const MorseBounds mb = morse_bounds(mat, sp);

  json jp = json::array();
  for (const auto& pr : preds) {
    const char* band = pr.band == Band::first_m ? "first_m"
                       : pr.band == Band::middle_mn ? "middle_mn"
                                                    : "last_m";
    jp.push_back(json{{"index", pr.index},
                      {"band", band},
                      {"base", pr.base},
                      {"slope", pr.slope},
                      {"exponent", pr.exponent},
                      {"rho", pr.rho}});
  }
  json body;
  body["critical_configuration"] = {{"lambdas", critical.lambdas}, {"points", critical.points}};
  body["matrices"] = {{"A1", matrix_json(mat.A1)}, {"M1", matrix_json(mat.M1)},
                      {"M2", matrix_json(mat.M2)}, {"Q", matrix_json(mat.Q)},
                      {"A2", matrix_json(mat.A2)}, {"A3", matrix_json(mat.A3)},
                      {"P", mat.P},
                      {"q_symmetry_gap", mat.q_symmetry_gap},
                      {"m2_min_eigenvalue", mat.m2_min_eigenvalue}};
  body["spectra"] = {{"rho1", sp.rho1}, {"rho2", sp.rho2}, {"rho3", sp.rho3}};
  body["predictions"] = jp;
  body["morse"] = {{"lower", mb.lower},
                   {"upper", mb.upper},
                   {"nondegenerate", mb.nondegenerate},
                   {"exact", mb.exact ? json(*mb.exact) : json()}};
  return body;
}

int run_reduce(const RunConfig& cfg) {
  auto oracle = make_oracle(cfg);
  const ConstantsTable table = build_constants(cfg.n);
  Configuration critical;
  json body = reduce_body(cfg, *oracle, table, critical);
  write_report(cfg, "reduce_n" + std::to_string(cfg.n) + ".json", body);
  return 0;
}

json sweep_json(const SweepReport& rep) {
  json pts = json::array();
  for (const auto& p : rep.points) {
    pts.push_back(json{{"eps", p.eps},
                       {"mu_first", p.mu_first},
                       {"mu_middle", p.mu_middle},
                       {"mu_last", p.mu_last},
                       {"mu_l2", p.mu_l2},
                       {"lambda_hat", p.lambda_hat},
                       {"amplitude_hat", p.amplitude_hat},
                       {"s_middle", p.s_middle},
                       {"count_below_one", p.count_below_one},
                       {"decay_c", p.decay_c}});
  }
  return json{
      {"n", rep.n},
      {"points", pts},
      {"first_band",
       {{"intercept", rep.first_fit.intercept},
        {"slope", rep.first_fit.slope},
        {"rms", rep.first_fit.rms_residual},
        {"intercept_target", rep.first_intercept_target},
        {"slope_target", rep.first_slope_target}}},
      {"middle_band",
       {{"s_extrapolated", rep.s_extrapolated},
        {"s_uncertainty", rep.s_uncertainty},
        {"s_target", rep.s_target},
        {"s_effective", rep.s_effective}}},
      {"last_band",
       {{"slope", rep.last_fit.slope},
        {"rms", rep.last_fit.rms_residual},
        {"slope_target", rep.last_slope_target},
        {"slope_effective", rep.last_slope_effective}}}};
}

void write_sweep_csv(const RunConfig& cfg, const SweepReport& rep) {
  std::string csv = "eps,mu_first,mu_middle,mu_last,mu_l2,lambda_hat,amplitude_hat,s_middle,"
                    "count_below_one,decay_c\n";
  char line[512];
  for (const auto& p : rep.points) {
    std::snprintf(line, sizeof(line),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%.17g\n", p.eps, p.mu_first,
                  p.mu_middle, p.mu_last, p.mu_l2, p.lambda_hat, p.amplitude_hat, p.s_middle,
                  p.count_below_one, p.decay_c);
    csv += line;
  }
  write_text(cfg.out_dir + "/sweep_n" + std::to_string(rep.n) + ".csv", csv);
}

void write_solution_csv(const RunConfig& cfg, const RadialSolution& sol,
                        const SectorSpectrum& s0, const SectorSpectrum& s1) {
  std::string csv = "r,u,v_first,v_last,v_middle\n";
  char line[256];
  for (std::size_t i = 0; i < sol.mesh.nodes.size(); ++i) {
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", sol.mesh.nodes[i],
                  sol.u[i], s0.eigenvectors[0][i], s0.eigenvectors[1][i], s1.eigenvectors[0][i]);
    csv += line;
  }
  char name[128];
  std::snprintf(name, sizeof(name), "solution_n%d_eps%.6f.csv", sol.params.n,
                sol.params.epsilon);
  write_text(cfg.out_dir + "/" + name, csv);
}

struct LabOutcome {
  json body;
  bool pass = false;
};

LabOutcome run_radial_lab_impl(const RunConfig& cfg) {
  const ConstantsTable table = build_constants(cfg.n);
  SweepOptions opt;
  opt.coreCount = cfg.coreCount;
  opt.outerCount = cfg.outerCount;
  const SweepReport rep = sweep(cfg.n, cfg.epsilons, table, opt);
  write_sweep_csv(cfg, rep);

  // fine-grained checks at the smallest solved eps
  const double eps_min = rep.points.back().eps;
  const double lambda0 = std::pow(table.C0 / table.gamma_n, 1.0 / (cfg.n - 2));
  const double core = 8.0 * lambda0 * std::pow(eps_min, 1.0 / (cfg.n - 2));
  RadialMesh mesh = RadialMesh::make(std::min(core, 0.5), cfg.coreCount * 2, cfg.outerCount * 2);
  ProblemParams params = ProblemParams::make(cfg.n, eps_min);
  RadialSolution sol = solve_radial(params, mesh);
  const SectorSpectrum s0 = sector_eigen(sol, 0, 2);
  const SectorSpectrum s1 = sector_eigen(sol, 1, 1);
  const SectorSpectrum s2 = sector_eigen(sol, 2, 1);
  const auto bands = assemble_bands(sol, s0, s1, s2);
  const ProfileReport prof = eigenfunction_profiles(sol, s0, s1);
  UnitBallOracle ball(cfg.n);
  const OuterLimitReport outer = outer_limits_check(sol, s0, s1, ball, table);
  write_solution_csv(cfg, sol, s0, s1);

  // gate on solver integrity and the limit laws that are free of the
  // reduced-energy normalization: mu_1 = 1/(p - eps) exactly, band ordering,
  // profile distances, the outer solution ratio and the first-band fit.
  const double mu1_exact = 1.0 / (params.p - eps_min);
  const double mu1_err = std::abs(s0.eigenvalues[0] - mu1_exact);
  bool pass = true;
  pass &= mu1_err < 1e-6;
  pass &= prof.dist_first <= cfg.tolerances.profile && prof.dist_middle <= cfg.tolerances.profile &&
          prof.dist_last <= cfg.tolerances.profile;
  pass &= outer.u_ratio > 0.9 && outer.u_ratio < 1.1;
  pass &= std::abs(rep.first_fit.intercept / rep.first_intercept_target - 1.0) < 0.02;
  pass &= std::abs(rep.first_fit.slope / rep.first_slope_target - 1.0) < 0.10;
  for (const auto& p : rep.points) pass &= p.count_below_one == rep.points.front().count_below_one;

  json body;
  body["sweep"] = sweep_json(rep);
  body["profiles"] = {{"first", prof.dist_first},
                      {"middle", prof.dist_middle},
                      {"last", prof.dist_last},
                      {"last_sign_changes", prof.last_sign_changes}};
  body["outer_limits"] = {{"u_ratio", outer.u_ratio},
                          {"middle_ratio", outer.middle_ratio},
                          {"last_ratio", outer.last_ratio}};
  body["bands"] = json::array();
  for (const auto& b : bands)
    body["bands"].push_back(json{{"mu", b.mu}, {"l", b.sector_l}, {"multiplicity", b.multiplicity}});
  body["mu1_exact_identity_error"] = mu1_err;
  body["pass"] = pass;
  return {body, pass};
}

int run_radial_lab(const RunConfig& cfg) {
  LabOutcome out = run_radial_lab_impl(cfg);
  write_report(cfg, "radial_lab_n" + std::to_string(cfg.n) + ".json", out.body);
  return out.pass ? 0 : 1;
}

int run_verify_all(const RunConfig& cfg) {
  json summary;
  int status = 0;

  const ConstantsTable t = build_constants(cfg.n);  // throws if inconsistent
  summary["constants"] = {{"pass", true}};
  write_report(cfg, "constants_n" + std::to_string(cfg.n) + ".json",
               json{{"constants", constants_json(t)}});

  RunConfig green_cfg = cfg;
  const int green_status = run_green_check(green_cfg);
  summary["green_check"] = {{"pass", green_status == 0}};
  status = std::max(status, green_status);

  RunConfig reduce_cfg = cfg;
  if (reduce_cfg.lambdas.empty()) {
    reduce_cfg.lambdas = {1.0};
    reduce_cfg.points = {Point(static_cast<std::size_t>(cfg.n), 0.0)};
  }
  const int reduce_status = run_reduce(reduce_cfg);
  summary["reduce"] = {{"pass", reduce_status == 0}};
  status = std::max(status, reduce_status);

  LabOutcome lab = run_radial_lab_impl(cfg);
  write_report(cfg, "radial_lab_n" + std::to_string(cfg.n) + ".json", lab.body);
  summary["radial_lab"] = {{"pass", lab.pass}};
  if (!lab.pass) status = std::max(status, 1);

  summary["pass"] = status == 0;
  write_report(cfg, "verify_all_n" + std::to_string(cfg.n) + ".json", summary);
  return status;
}

}  // namespace

std::string RunConfig::subcommand_name() const {
  for (const auto& [name, sc] : subcommand_names())
    if (sc == subcommand) return name;
  return "constants";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  reject_unknown_keys(j,
                      {"subcommand", "n", "oracle", "lambdas", "points", "epsilons", "out_dir",
                       "tolerances", "green_order", "mesh"},
                      "");

  RunConfig cfg;
  if (!j.contains("subcommand") || !j["subcommand"].is_string())
    throw std::invalid_argument("config: missing string key \"subcommand\"");
  const auto& names = subcommand_names();
  const auto it = names.find(j["subcommand"].get<std::string>());
  if (it == names.end())
    throw std::invalid_argument("config: unknown value for \"subcommand\"");
  cfg.subcommand = it->second;

  if (!j.contains("n") || !j["n"].is_number_integer())
    throw std::invalid_argument("config: missing integer key \"n\"");
  cfg.n = j["n"].get<int>();
  if (cfg.n < 3 || cfg.n > 5) throw std::invalid_argument("config: \"n\" must be 3, 4 or 5");

  if (j.contains("oracle")) {
    const json& jo = j["oracle"];
    reject_unknown_keys(jo, {"type", "center", "radius"}, "oracle.");
    const std::string type = jo.value("type", "unit-ball");
    if (type == "unit-ball") {
      cfg.oracle.unit_ball = true;
    } else if (type == "scaled-ball") {
      cfg.oracle.unit_ball = false;
      if (!jo.contains("center") || !jo.contains("radius"))
        throw std::invalid_argument("config: \"oracle.center\" and \"oracle.radius\" required");
      cfg.oracle.center = jo["center"].get<Point>();
      if (static_cast<int>(cfg.oracle.center.size()) != cfg.n)
        throw std::invalid_argument("config: \"oracle.center\" dimension mismatch");
      cfg.oracle.radius = jo["radius"].get<double>();
      if (!(cfg.oracle.radius > 0.0))
        throw std::invalid_argument("config: \"oracle.radius\" must be positive");
    } else {
      throw std::invalid_argument("config: unknown value for \"oracle.type\"");
    }
  }

  if (j.contains("lambdas")) {
    cfg.lambdas = j["lambdas"].get<std::vector<double>>();
    for (std::size_t i = 0; i < cfg.lambdas.size(); ++i)
      if (!(cfg.lambdas[i] > 0.0))
        throw std::invalid_argument("config: non-positive value at \"lambdas[" +
                                    std::to_string(i) + "]\"");
  }
  if (j.contains("points")) {
    cfg.points = j["points"].get<std::vector<Point>>();
    for (std::size_t i = 0; i < cfg.points.size(); ++i)
      if (static_cast<int>(cfg.points[i].size()) != cfg.n)
        throw std::invalid_argument("config: dimension mismatch at \"points[" + std::to_string(i) +
                                    "]\"");
  }
  if (cfg.lambdas.size() != cfg.points.size())
    throw std::invalid_argument("config: \"lambdas\" and \"points\" must have equal length");

  if (j.contains("epsilons")) {
    cfg.epsilons = j["epsilons"].get<std::vector<double>>();
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
      if (!(cfg.epsilons[i] > 0.0 && cfg.epsilons[i] <= 0.3))
        throw std::invalid_argument("config: \"epsilons[" + std::to_string(i) +
                                    "]\" must lie in (0, 0.3]");
      if (i > 0 && !(cfg.epsilons[i] < cfg.epsilons[i - 1]))
        throw std::invalid_argument("config: \"epsilons\" must be strictly decreasing");
    }
  } else {
    cfg.epsilons = {0.1, 0.05, 0.025, 0.0125};
  }

  if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("green_order")) {
    cfg.green_order = j["green_order"].get<int>();
    if (cfg.green_order < 4) throw std::invalid_argument("config: \"green_order\" must be >= 4");
  }
  if (j.contains("tolerances")) {
    const json& jt = j["tolerances"];
    reject_unknown_keys(jt, {"green", "stationarity", "profile"}, "tolerances.");
    cfg.tolerances.green = jt.value("green", cfg.tolerances.green);
    cfg.tolerances.stationarity = jt.value("stationarity", cfg.tolerances.stationarity);
    cfg.tolerances.profile = jt.value("profile", cfg.tolerances.profile);
  }
  if (j.contains("mesh")) {
    const json& jm = j["mesh"];
    reject_unknown_keys(jm, {"coreCount", "outerCount"}, "mesh.");
    cfg.coreCount = jm.value("coreCount", cfg.coreCount);
    cfg.outerCount = jm.value("outerCount", cfg.outerCount);
    if (cfg.coreCount < 4 || cfg.outerCount < 4)
      throw std::invalid_argument("config: \"mesh\" counts must be >= 4");
  }
  return cfg;
}

std::string emit_config(const RunConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

int run(const RunConfig& cfg) {
  try {
    switch (cfg.subcommand) {
      case Subcommand::constants:
        return run_constants(cfg);
      case Subcommand::green_check:
        return run_green_check(cfg);
      case Subcommand::reduce:
        return run_reduce(cfg);
      case Subcommand::radial_lab:
        return run_radial_lab(cfg);
      case Subcommand::verify_all:
        return run_verify_all(cfg);
    }
  } catch (const std::exception& e) {
    try {
      std::filesystem::create_directories(cfg.out_dir);
      json err{{"error", e.what()}};
      err["config"] = config_json(cfg);
      write_text(cfg.out_dir + "/error.json", err.dump(2) + "\n");
    } catch (...) {
      // the error report is best-effort; the exit status carries the failure
    }
    return 2;
  }
  return 2;
}

}  // namespace lefspec
