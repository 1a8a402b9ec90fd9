#include "qgcurv/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qgcurv/io.hpp"

namespace qgc {
namespace {

using io::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string::npos ? pos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_num(const std::string& s) {
  try {
    size_t idx = 0;
    const double v = std::stod(s, &idx);
    if (idx != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw error(errc::config, "not a number: '" + s + "'");
  }
}

std::vector<double> parse_num_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_num(tok));
  return out;
}

// "1..4" or "1,2,5"
std::vector<int> parse_modes(const std::string& s) {
  std::vector<int> out;
  const size_t dots = s.find("..");
  if (dots != std::string::npos) {
    const int a = int(parse_num(s.substr(0, dots)));
    const int b = int(parse_num(s.substr(dots + 2)));
    if (a < 1 || b < a) throw error(errc::config, "bad mode range: '" + s + "'");
    for (int n = a; n <= b; ++n) out.push_back(n);
  } else {
    for (double v : parse_num_list(s)) {
      const int n = int(v);
      if (double(n) != v || n < 1) throw error(errc::config, "modes must be positive integers: '" + s + "'");
      out.push_back(n);
    }
  }
  if (out.empty() || out.size() > 64) throw error(errc::config, "bad mode list: '" + s + "'");
  return out;
}

ShearFlow parse_flow(const std::string& spec, const Params& pr) {
  const size_t colon = spec.find(':');
  if (colon == std::string::npos)
    throw error(errc::config, "flow spec needs a family prefix (poly:, critsinh:, samples:): '" + spec + "'");
  const std::string family = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (family == "poly") {
    return ShearFlow::poly(parse_num_list(rest));
  }
  if (family == "critsinh") {
    const std::vector<double> v = parse_num_list(rest);
    if (v.size() != 5) throw error(errc::config, "critsinh needs alpha2,y0,z0,sign,beta");
    if (std::abs(v[0] - pr.alpha2) > 1e-12 || std::abs(v[4] - pr.beta) > 1e-12)
      throw error(errc::config, "critsinh alpha2/beta must match the --alpha2/--beta options");
    const int sgn = int(v[3]);
    if (sgn != 1 && sgn != -1) throw error(errc::config, "critsinh sign must be 1 or -1");
    return ShearFlow::critical_sinh(v[0], v[1], v[2], sgn, v[4], pr.L);
  }
  if (family == "samples") {
    Eigen::ArrayXd y, psi;
    io::read_samples_csv(rest, y, psi);
    if (std::abs(y(0)) > 1e-9 * pr.L || std::abs(y(y.size() - 1) - pr.L) > 1e-9 * std::max(1.0, pr.L))
      throw error(errc::config, "samples must span [0, L]");
    return ShearFlow::from_samples(y, psi);
  }
  throw error(errc::config, "unknown flow family: '" + family + "'");
}

// "sin:k" -> sin(k pi y / L); "poly:c0,c1,..." -> sum c_i y^i (must vanish at walls)
ArrayXcd make_profile(const std::string& spec, const Grid1D& g) {
  const size_t colon = spec.find(':');
  const std::string family = colon == std::string::npos ? spec : spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (family == "sin") {
    const int k = rest.empty() ? 1 : int(parse_num(rest));
    if (k < 1) throw error(errc::config, "sin profile index must be >= 1");
    return (k * std::numbers::pi / g.L() * g.y()).sin().cast<cd>();
  }
  if (family == "poly") {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Zero(g.ny());
    Eigen::ArrayXd pw = Eigen::ArrayXd::Ones(g.ny());
    for (double c : parse_num_list(rest)) {
      acc += c * pw;
      pw *= g.y();
    }
    return acc.cast<cd>();
  }
  throw error(errc::config, "unknown profile family: '" + family + "'");
}

struct CommonOpts {
  double L = 1.0, alpha2 = 0.0, beta = 0.0;
  long ny = 513;
  std::string flow;
  std::string out;
  std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& o, long default_ny, bool flow_required) {
  o.ny = default_ny;
  cmd->add_option("--L", o.L, "channel width")->capture_default_str();
  cmd->add_option("--alpha2", o.alpha2, "squared Froude number, >= 0")->capture_default_str();
  cmd->add_option("--beta", o.beta, "Coriolis gradient")->capture_default_str();
  cmd->add_option("--ny", o.ny, "wall-normal nodes (odd, >= 5)")->capture_default_str();
  auto* fo = cmd->add_option("--flow", o.flow, "shear flow: poly:c0,c1,... | critsinh:alpha2,y0,z0,sign,beta | samples:path");
  if (flow_required) fo->required();
  cmd->add_option("--out", o.out, "output directory")->envname("QGC_OUTPUT_DIR");
  cmd->add_option("--config", o.config, "JSON file whose keys override the flags");
}

using Setter = std::function<void(const json&)>;

// config file keys override flags; unknown keys are errors
void apply_config(const std::string& path, const std::map<std::string, Setter>& setters) {
  if (path.empty()) return;
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw error(errc::config, std::string("config parse: ") + e.what());
  }
  if (!j.is_object()) throw error(errc::config, "config file must hold a JSON object");
  for (const auto& [key, val] : j.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw error(errc::config, "unknown config key: '" + key + "'");
    try {
      it->second(val);
    } catch (const nlohmann::json::exception& e) {
      throw error(errc::config, "config key '" + key + "': " + e.what());
    }
  }
}

std::map<std::string, Setter> common_setters(CommonOpts& o) {
  return {
      {"L", [&o](const json& v) { o.L = v.get<double>(); }},
      {"alpha2", [&o](const json& v) { o.alpha2 = v.get<double>(); }},
      {"beta", [&o](const json& v) { o.beta = v.get<double>(); }},
      {"ny", [&o](const json& v) { o.ny = v.get<long>(); }},
      {"flow", [&o](const json& v) { o.flow = v.get<std::string>(); }},
      {"out", [&o](const json& v) { o.out = v.get<std::string>(); }},
  };
}

std::string out_dir(const CommonOpts& o) {
  std::string dir = o.out.empty() ? std::string("out") : o.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw error(errc::config, "cannot create output directory: " + dir);
  return dir;
}

void write_json(const std::string& path, const json& j) { io::write_file(path, j.dump(2) + "\n"); }

const char* verdict_text(Verdict v, bool boundary) {
  if (v == Verdict::holds) return boundary ? "holds (boundary case)" : "holds";
  return to_string(v);
}

// ---------------------------------------------------------------- curvature

struct CurvatureOpts {
  CommonOpts c;
  std::string modes = "1..3";
  std::string methods = "integral,green,arnold";
  std::string profile = "sin:1";
  bool verify = false;
  double tol = 1e-4;
  double abs_floor = 1e-12;
};

int cmd_curvature(CurvatureOpts& o) {
  auto setters = common_setters(o.c);
  setters["modes"] = [&](const json& v) { o.modes = v.get<std::string>(); };
  setters["methods"] = [&](const json& v) { o.methods = v.get<std::string>(); };
  setters["profile"] = [&](const json& v) { o.profile = v.get<std::string>(); };
  setters["verify"] = [&](const json& v) { o.verify = v.get<bool>(); };
  setters["tol"] = [&](const json& v) { o.tol = v.get<double>(); };
  apply_config(o.c.config, setters);

  const Params pr{o.c.L, o.c.alpha2, o.c.beta};
  validate(pr);
  const Grid1D grid(o.c.ny, pr.L);
  const ShearFlow flow = parse_flow(o.c.flow, pr);
  const std::vector<int> modes = parse_modes(o.modes);
  const ArrayXcd prof = make_profile(o.profile, grid);

  bool want_int = false, want_green = false, want_arnold = false;
  for (const std::string& m : split(o.methods, ',')) {
    if (m == "integral") want_int = true;
    else if (m == "green") want_green = true;
    else if (m == "arnold") want_arnold = true;
    else throw error(errc::config, "unknown method: '" + m + "' (integral|green|arnold)");
  }
  if (!want_int && !want_green && !want_arnold) throw error(errc::config, "no methods selected");

  const std::string dir = out_dir(o.c);
  std::string csv = io::csv_line({"n", "k_integral", "k_green", "k_arnold", "spread"});
  json rows = json::array();
  bool disagree = false;
  double total = 0.0;
  bool total_valid = want_int || want_green;

  for (int n : modes) {
    double ki = 0, kg = 0, ka = 0;
    std::vector<double> vals;
    if (want_int) vals.push_back(ki = kn_integral(flow, pr, grid, n, prof));
    if (want_green) vals.push_back(kg = kn_green(flow, pr, grid, n, prof));
    if (want_arnold) vals.push_back(ka = kn_arnold(flow, pr, grid, n, prof));
    double lo = vals[0], hi = vals[0], mag = 0;
    for (double v : vals) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      mag = std::max(mag, std::abs(v));
    }
    const double spread = hi - lo;
    const bool row_ok = spread <= std::max(o.tol * mag, o.abs_floor);
    if (!row_ok) disagree = true;
    const double kbest = want_int ? ki : (want_green ? kg : ka);
    total += 2.0 * double(n) * double(n) * kbest;

    csv += io::csv_line({std::to_string(n), want_int ? io::fmt(ki) : "", want_green ? io::fmt(kg) : "",
                         want_arnold ? io::fmt(ka) : "", io::fmt(spread)});
    json row;
    row["n"] = n;
    if (want_int) row["k_integral"] = ki;
    if (want_green) row["k_green"] = kg;
    if (want_arnold) row["k_arnold"] = ka;
    row["spread"] = spread;
    row["agree"] = row_ok;
    rows.push_back(row);
    std::printf("n=%d%s%s%s spread=%.3g%s\n", n, want_int ? (" integral=" + io::fmt(ki)).c_str() : "",
                want_green ? (" green=" + io::fmt(kg)).c_str() : "",
                want_arnold ? (" arnold=" + io::fmt(ka)).c_str() : "", spread, row_ok ? "" : "  [DISAGREE]");
  }

  json rep;
  rep["params"] = io::params_to_json(pr);
  rep["ny"] = o.c.ny;
  rep["flow"] = o.c.flow;
  rep["profile"] = o.profile;
  rep["rows"] = rows;
  if (total_valid) {
    rep["total_weighted"] = total; // sum over modes of 2 n^2 K_n
    rep["total_metric"] = 2.0 * std::numbers::pi * total; // x-average carries 2 pi
  }
  rep["verify"] = o.verify;
  rep["tol"] = o.tol;
  rep["all_agree"] = !disagree;
  write_json(dir + "/curvature.json", rep);
  io::write_file(dir + "/curvature.csv", csv);

  json echo;
  echo["command"] = "curvature";
  echo["params"] = io::params_to_json(pr);
  echo["ny"] = o.c.ny;
  echo["flow"] = o.c.flow;
  echo["modes"] = o.modes;
  echo["methods"] = o.methods;
  echo["profile"] = o.profile;
  echo["verify"] = o.verify;
  echo["tol"] = o.tol;
  echo["out"] = dir;
  write_json(dir + "/config.json", echo);

  if (o.verify && disagree) {
    std::printf("verify: FAIL (cross-method disagreement above %.3g)\n", o.tol);
    return 1;
  }
  if (o.verify) std::printf("verify: OK\n");
  return 0;
}

// ---------------------------------------------------------------- criterion

struct CriterionOpts {
  CommonOpts c;
  int nmodes = 6;
  bool oracle = false;
};

json theorem_json(const TheoremCheck& tc) {
  json j;
  j["verdict"] = verdict_text(tc.verdict, tc.boundary_case);
  j["min_dR"] = tc.min_dR;
  j["R_end"] = tc.R_end;
  j["eta_zeros"] = tc.eta_zeros;
  j["xi_zeros"] = tc.xi_zeros;
  if (!tc.note.empty()) j["note"] = tc.note;
  return j;
}

int cmd_criterion(CriterionOpts& o) {
  auto setters = common_setters(o.c);
  setters["nmodes"] = [&](const json& v) { o.nmodes = v.get<int>(); };
  setters["oracle"] = [&](const json& v) { o.oracle = v.get<bool>(); };
  apply_config(o.c.config, setters);
  if (o.nmodes < 1 || o.nmodes > 64) throw error(errc::config, "nmodes must be in 1..64");

  const Params pr{o.c.L, o.c.alpha2, o.c.beta};
  validate(pr);
  const Grid1D grid(o.c.ny, pr.L);
  const ShearFlow flow = parse_flow(o.c.flow, pr);
  const std::string dir = out_dir(o.c);
  const bool alpha0 = pr.alpha2 == 0.0;

  json rep;
  rep["params"] = io::params_to_json(pr);
  rep["ny"] = o.c.ny;
  rep["flow"] = o.c.flow;
  std::string text;

  Verdict overall = Verdict::indeterminate;
  bool overall_boundary = false;
  if (alpha0) {
    text += "notice: alpha2 = 0, p-form inequalities are degenerate; using the ratio test on (p, q) directly\n";
    rep["notice"] = "alpha2 = 0: routed to the ratio-based test";
  }

  const CorollaryReport cor = corollary_check(flow, pr, grid);
  {
    json jc;
    jc["verdict"] = verdict_text(cor.verdict, cor.boundary_case);
    jc["degenerate_alpha0"] = cor.degenerate_alpha0;
    if (pr.alpha2 > 0.0) {
      jc["margin_de"] = cor.worst.margin_de;
      jc["margin_bc"] = cor.worst.margin_bc;
    }
    jc["note"] = cor.note;
    rep["corollary"] = jc;
  }

  json per_mode = json::array();
  bool oracle_mismatch = false;
  int witness_n = 0;
  std::optional<ArrayXcd> witness;
  double witness_B = 0.0;

  for (int n = 1; n <= o.nmodes; ++n) {
    json jm;
    jm["n"] = n;
    const TheoremCheck tc = check_theorem(flow, pr, grid, n);
    jm["theorem"] = theorem_json(tc);
    bool analytic_fail = tc.verdict == Verdict::fails;
    if (!alpha0) {
      const IneqReport ir = ineq_per_n(flow, pr, grid, n);
      json ji;
      ji["margin_de"] = ir.margin_de;
      ji["margin_bc"] = ir.margin_bc;
      ji["holds"] = ir.holds;
      ji["boundary_case"] = ir.boundary_case;
      jm["inequality"] = ji;
      if (!ir.holds && !ir.boundary_case) analytic_fail = true;
    }
    if (n == 1) {
      overall = tc.verdict;
      overall_boundary = tc.boundary_case;
    }
    const EtaXi ex = eta_xi(flow, pr, grid, n);
    if (o.oracle) {
      const EigReport er = definiteness_eig(ex);
      const Verdict ev = er.lambda_max > 1e-8 * std::max(er.scale, 1e-300) ? Verdict::fails : Verdict::holds;
      json je;
      je["lambda_max"] = er.lambda_max;
      je["scale"] = er.scale;
      je["verdict"] = to_string(ev);
      const bool cmp = tc.verdict != Verdict::indeterminate && !tc.boundary_case;
      const bool mismatch = cmp && ev != tc.verdict;
      je["mismatch"] = mismatch;
      if (mismatch) oracle_mismatch = true;
      jm["oracle"] = je;
    }
    if (analytic_fail && !witness) {
      witness = positivity_witness_search(ex);
      if (witness) {
        witness_n = n;
        witness_B = bilinear_B(ex, witness->cast<cd>());
      }
    }
    char line[256];
    std::snprintf(line, sizeof line, "n=%d: %s (min R' = %.3g, R(L) = %.3g)\n", n,
                  verdict_text(tc.verdict, tc.boundary_case), tc.min_dR, tc.R_end);
    text += line;
    per_mode.push_back(jm);
  }
  rep["per_mode"] = per_mode;

  if (pr.alpha2 > 0.0) {
    // report the substitution form when p is bounded away from zero
    try {
      const ZCheck zc = z_substitution_check(flow, pr, grid);
      json jz;
      jz["holds"] = zc.holds;
      jz["boundary_case"] = zc.boundary_case;
      jz["bc_value"] = zc.bc_value;
      jz["min_residual"] = zc.z_residual.minCoeff();
      jz["direction_flipped"] = zc.direction_flipped;
      rep["z_substitution"] = jz;
    } catch (const error&) {
      rep["z_substitution"] = "skipped (p touches zero)";
    }
    overall = cor.verdict;
    overall_boundary = cor.boundary_case;
  }

  rep["verdict"] = verdict_text(overall, overall_boundary);
  text = std::string("verdict: ") + verdict_text(overall, overall_boundary) + "\n" + text;

  if (witness) {
    std::string wcsv = io::csv_line({"y", "re_g", "im_g"});
    for (long i = 0; i < witness->size(); ++i)
      wcsv += io::csv_line({io::fmt(grid.y()(i)), io::fmt((*witness)(i).real()), io::fmt((*witness)(i).imag())});
    io::write_file(dir + "/witness.csv", wcsv);
    json jw;
    jw["n"] = witness_n;
    jw["B"] = witness_B;
    jw["file"] = "witness.csv";
    rep["witness"] = jw;
    char line[160];
    std::snprintf(line, sizeof line, "positive-direction witness at n=%d with B = %.6g -> witness.csv\n",
                  witness_n, witness_B);
    text += line;
  }
  if (o.oracle) {
    rep["oracle_mismatch"] = oracle_mismatch;
    text += oracle_mismatch ? "oracle: MISMATCH with ratio test\n" : "oracle: agrees\n";
  }

  write_json(dir + "/criterion.json", rep);
  io::write_file(dir + "/criterion.txt", text);

  json echo;
  echo["command"] = "criterion";
  echo["params"] = io::params_to_json(pr);
  echo["ny"] = o.c.ny;
  echo["flow"] = o.c.flow;
  echo["nmodes"] = o.nmodes;
  echo["oracle"] = o.oracle;
  echo["out"] = dir;
  write_json(dir + "/config.json", echo);

  std::fputs(text.c_str(), stdout);
  return oracle_mismatch ? 1 : 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateOpts {
  CommonOpts c;
  int nmax = 32;
  double tend = 1.0, dt = 0.0, cfl = 0.5;
  int cadence = 10;
  bool snapshots = false;
  bool spread = false;
  double eps = 1e-3;
  int pert_n = 1, pert_k = 1;
};

int cmd_simulate(SimulateOpts& o) {
  auto setters = common_setters(o.c);
  setters["nmax"] = [&](const json& v) { o.nmax = v.get<int>(); };
  setters["tend"] = [&](const json& v) { o.tend = v.get<double>(); };
  setters["dt"] = [&](const json& v) { o.dt = v.get<double>(); };
  setters["cfl"] = [&](const json& v) { o.cfl = v.get<double>(); };
  setters["cadence"] = [&](const json& v) { o.cadence = v.get<int>(); };
  setters["snapshots"] = [&](const json& v) { o.snapshots = v.get<bool>(); };
  setters["spread"] = [&](const json& v) { o.spread = v.get<bool>(); };
  setters["eps"] = [&](const json& v) { o.eps = v.get<double>(); };
  setters["pert_n"] = [&](const json& v) { o.pert_n = v.get<int>(); };
  setters["pert_k"] = [&](const json& v) { o.pert_k = v.get<int>(); };
  apply_config(o.c.config, setters);

  const Params pr{o.c.L, o.c.alpha2, o.c.beta};
  validate(pr);
  const Grid1D grid(o.c.ny, pr.L);
  const ShearFlow flow = parse_flow(o.c.flow, pr);
  if (o.nmax < 1 || o.nmax > 512) throw error(errc::config, "nmax must be in 1..512");
  const std::string dir = out_dir(o.c);

  RunConfig cfg;
  cfg.dt = o.dt;
  cfg.cfl = o.cfl;
  cfg.t_end = o.tend;
  cfg.cadence = o.cadence;
  cfg.store_snapshots = true;

  json echo;
  echo["command"] = "simulate";
  echo["params"] = io::params_to_json(pr);
  echo["ny"] = o.c.ny;
  echo["nmax"] = o.nmax;
  echo["flow"] = o.c.flow;
  echo["tend"] = o.tend;
  echo["dt"] = o.dt;
  echo["cfl"] = o.cfl;
  echo["cadence"] = o.cadence;
  echo["snapshots"] = o.snapshots;
  echo["spread"] = o.spread;
  if (o.spread) {
    echo["eps"] = o.eps;
    echo["pert_n"] = o.pert_n;
    echo["pert_k"] = o.pert_k;
  }
  echo["out"] = dir;
  write_json(dir + "/config.json", echo);

  if (!o.spread) {
    QGState s0 = make_shear_state(flow, pr, grid, o.nmax);
    const double tau = eddy_time(s0);
    const Trajectory tr = evolve(std::move(s0), cfg);
    io::write_file(dir + "/diagnostics.csv", io::trajectory_csv(tr.series));
    if (!tr.snapshots.empty()) {
      write_json(dir + "/state_initial.json", io::state_to_json(tr.snapshots.front()));
      if (tr.snapshots.size() > 1)
        write_json(dir + "/state_final.json", io::state_to_json(tr.snapshots.back()));
      if (o.snapshots) {
        for (size_t i = 0; i < tr.snapshots.size(); ++i) {
          char name[64];
          std::snprintf(name, sizeof name, "/snapshot_%06zu.json", i);
          write_json(dir + name, io::state_to_json(tr.snapshots[i]));
        }
      }
    }
    json run;
    run["dt_used"] = tr.dt_used;
    run["steps"] = tr.steps;
    run["eddy_time"] = std::isfinite(tau) ? json(tau) : json("inf");
    run["aborted"] = tr.aborted;
    if (!tr.note.empty()) run["note"] = tr.note;
    write_json(dir + "/run.json", run);
    std::printf("steps=%ld dt=%.6g records=%zu%s\n", tr.steps, tr.dt_used, tr.series.size(),
                tr.aborted ? "  [ABORTED]" : "");
    if (tr.aborted) {
      std::fprintf(stderr, "numerical failure: %s\n", tr.note.c_str());
      return 3;
    }
    return 0;
  }

  if (!(o.eps >= 0.0)) throw error(errc::config, "eps must be >= 0");
  const Grid1D& g = grid;
  Perturbation pert;
  pert.modes.push_back({o.pert_n, make_profile("sin:" + std::to_string(o.pert_k), g)});
  const SpreadingResult sr = spreading_experiment(flow, pr, g, o.nmax, pert, o.eps, cfg);
  io::write_file(dir + "/diagnostics.csv", io::trajectory_csv(sr.base_series, sr.separation));
  json run;
  run["eps"] = sr.eps;
  run["growth_rate"] = sr.growth_rate;
  run["fit_intercept"] = sr.fit_intercept;
  run["fit_valid"] = sr.fit_valid;
  run["verdict"] = verdict_text(sr.verdict, sr.verdict_boundary);
  run["aborted"] = sr.aborted;
  if (!sr.note.empty()) run["note"] = sr.note;
  write_json(dir + "/spreading.json", run);
  std::printf("spreading: records=%zu growth_rate=%.6g (fit %s), base verdict: %s%s\n", sr.t.size(),
              sr.growth_rate, sr.fit_valid ? "valid" : "n/a", verdict_text(sr.verdict, sr.verdict_boundary),
              sr.aborted ? "  [ABORTED]" : "");
  return sr.aborted ? 3 : 0;
}

// -------------------------------------------------------------------- sweep

struct SweepOpts {
  CommonOpts c;
  std::string alpha2_list, beta_list;
  int threads = 0;
};

int cmd_sweep(SweepOpts& o) {
  auto setters = common_setters(o.c);
  setters["alpha2_list"] = [&](const json& v) { o.alpha2_list = v.get<std::string>(); };
  setters["beta_list"] = [&](const json& v) { o.beta_list = v.get<std::string>(); };
  setters["threads"] = [&](const json& v) { o.threads = v.get<int>(); };
  apply_config(o.c.config, setters);

  if (o.alpha2_list.empty() || o.beta_list.empty())
    throw error(errc::config, "sweep needs --alpha2-list and --beta-list");
  const std::vector<double> a2s = parse_num_list(o.alpha2_list);
  const std::vector<double> bs = parse_num_list(o.beta_list);
  if (a2s.empty() || bs.empty()) throw error(errc::config, "empty sweep grid");
  if (o.c.flow.rfind("critsinh:", 0) == 0)
    throw error(errc::config, "critsinh is tied to one (alpha2, beta); sweep needs poly: or samples:");

  const Grid1D grid(o.c.ny, o.c.L);
  // flow shape is parameter-independent for poly/samples
  const ShearFlow flow = parse_flow(o.c.flow, Params{o.c.L, 1.0, 0.0});

  struct Point {
    double a2, b;
    Verdict verdict = Verdict::indeterminate;
    bool boundary = false;
    double margin_de = 0.0, margin_bc = 0.0;
    std::string err;
  };
  std::vector<Point> pts;
  for (double a2 : a2s)
    for (double b : bs) pts.push_back({a2, b});

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const size_t nthreads = std::min<size_t>(pts.size(), o.threads > 0 ? size_t(o.threads) : hw);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= pts.size()) return;
      Point& p = pts[i];
      try {
        const Params pr{o.c.L, p.a2, p.b};
        const CorollaryReport cr = corollary_check(flow, pr, grid);
        p.verdict = cr.verdict;
        p.boundary = cr.boundary_case;
        if (p.a2 > 0.0) {
          p.margin_de = cr.worst.margin_de;
          p.margin_bc = cr.worst.margin_bc;
        }
      } catch (const std::exception& e) {
        p.err = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t i = 1; i < nthreads; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  const std::string dir = out_dir(o.c);
  std::string csv = io::csv_line({"alpha2", "beta", "verdict", "boundary", "margin_de", "margin_bc"});
  json rows = json::array();
  size_t holds = 0, fails = 0;
  for (const Point& p : pts) {
    if (!p.err.empty()) throw error(errc::numerical, "sweep point failed: " + p.err);
    csv += io::csv_line({io::fmt(p.a2), io::fmt(p.b), to_string(p.verdict), p.boundary ? "1" : "0",
                         io::fmt(p.margin_de), io::fmt(p.margin_bc)});
    json r;
    r["alpha2"] = p.a2;
    r["beta"] = p.b;
    r["verdict"] = verdict_text(p.verdict, p.boundary);
    r["margin_de"] = p.margin_de;
    r["margin_bc"] = p.margin_bc;
    rows.push_back(r);
    if (p.verdict == Verdict::holds) ++holds;
    if (p.verdict == Verdict::fails) ++fails;
  }
  io::write_file(dir + "/sweep.csv", csv);
  json rep;
  rep["L"] = o.c.L;
  rep["ny"] = o.c.ny;
  rep["flow"] = o.c.flow;
  rep["points"] = rows;
  rep["holds"] = holds;
  rep["fails"] = fails;
  write_json(dir + "/sweep.json", rep);

  json echo;
  echo["command"] = "sweep";
  echo["L"] = o.c.L;
  echo["ny"] = o.c.ny;
  echo["flow"] = o.c.flow;
  echo["alpha2_list"] = o.alpha2_list;
  echo["beta_list"] = o.beta_list;
  echo["out"] = dir;
  write_json(dir + "/config.json", echo);

  std::printf("sweep: %zu points, %zu holds, %zu fails\n", pts.size(), holds, fails);
  return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"sectional curvature, stability criterion and channel dynamics for shear flows"};
  app.require_subcommand(1);

  CurvatureOpts co;
  SweepOpts so;
  CriterionOpts ro;
  SimulateOpts mo;
  int rc = 0;

  CLI::App* curv = app.add_subcommand("curvature", "per-mode curvature along a shear flow");
  add_common(curv, co.c, 513, true);
  curv->add_option("--modes", co.modes, "mode list: 1..4 or 1,2,5")->capture_default_str();
  curv->add_option("--methods", co.methods, "subset of integral,green,arnold")->capture_default_str();
  curv->add_option("--profile", co.profile, "perturbation profile: sin:k or poly:c0,c1,...")->capture_default_str();
  curv->add_flag("--verify", co.verify, "exit 1 when methods disagree beyond --tol");
  curv->add_option("--tol", co.tol, "relative cross-method tolerance")->capture_default_str();
  curv->callback([&] { rc = cmd_curvature(co); });

  CLI::App* crit = app.add_subcommand("criterion", "nonpositivity criterion for a shear flow");
  add_common(crit, ro.c, 513, true);
  crit->add_option("--nmodes", ro.nmodes, "check modes 1..N")->capture_default_str();
  crit->add_flag("--oracle", ro.oracle, "cross-check each mode against the eigenvalue oracle");
  crit->callback([&] { rc = cmd_criterion(ro); });

  CLI::App* sim = app.add_subcommand("simulate", "channel dynamics from a shear initial state");
  add_common(sim, mo.c, 257, true);
  sim->add_option("--nmax", mo.nmax, "x-mode truncation")->capture_default_str();
  sim->add_option("--tend", mo.tend, "end time")->capture_default_str();
  sim->add_option("--dt", mo.dt, "time step (0: derive from --cfl)")->capture_default_str();
  sim->add_option("--cfl", mo.cfl, "CFL fraction when --dt 0")->capture_default_str();
  sim->add_option("--cadence", mo.cadence, "diagnostics every k steps")->capture_default_str();
  sim->add_flag("--snapshots", mo.snapshots, "write every recorded state, not just first/last");
  sim->add_flag("--spread", mo.spread, "twin-run geodesic spreading experiment");
  sim->add_option("--eps", mo.eps, "relative perturbation amplitude")->capture_default_str();
  sim->add_option("--pert-n", mo.pert_n, "perturbed x-mode")->capture_default_str();
  sim->add_option("--pert-k", mo.pert_k, "wall-normal index of the sin profile")->capture_default_str();
  sim->callback([&] { rc = cmd_simulate(mo); });

  CLI::App* sw = app.add_subcommand("sweep", "criterion verdict over an (alpha2, beta) grid");
  add_common(sw, so.c, 513, true);
  sw->add_option("--alpha2-list", so.alpha2_list, "comma list of alpha2 values")->required();
  sw->add_option("--beta-list", so.beta_list, "comma list of beta values")->required();
  sw->add_option("--threads", so.threads, "worker threads (0: hardware)")->capture_default_str();
  sw->callback([&] { rc = cmd_sweep(so); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == errc::config ? 2 : 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return rc;
}

} // namespace qgc
