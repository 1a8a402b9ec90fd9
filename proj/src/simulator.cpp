#include "qgcurv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>

#include "qgcurv/algebra.hpp"

namespace qgc {

namespace {

constexpr cd kI{0.0, 1.0};

// omega - beta y: the part of the PV that the elliptic solve sees
Field2D pv_anomaly(const Field2D& omega, const Params& pr) {
  Field2D d = omega;
  if (pr.beta != 0.0) d.mode(0) -= (pr.beta * d.grid().y()).cast<cd>();
  return d;
}

// Dirichlet solve of (alpha2 + n^2 - d^2/dy^2) u = f for one mode, no
// solvability gate: the pinned-wall tridiagonal is nonsingular even at
// alpha2 = 0, n = 0.
Eigen::ArrayXcd mode_solve(const Eigen::ArrayXcd& f, double lam2, const Grid1D& g) {
  const int ny = int(f.size());
  const int m = ny - 2;
  const double h2 = g.h() * g.h();
  Eigen::ArrayXd sub = Eigen::ArrayXd::Constant(m - 1, -1.0 / h2);
  Eigen::ArrayXd dia = Eigen::ArrayXd::Constant(m, lam2 + 2.0 / h2);
  Eigen::ArrayXd sup = sub;
  Eigen::ArrayXcd interior = thomas_solve(sub, dia, sup, Eigen::ArrayXcd(f.segment(1, m)));
  Eigen::ArrayXcd u = Eigen::ArrayXcd::Zero(ny);
  u.segment(1, m) = interior;
  return u;
}

struct VelocityBound {
  double max_u = 0.0, max_v = 0.0;
};

VelocityBound velocity_bound(const Field2D& psi) {
  const int nmax = psi.nmax();
  Field2D u(nmax, psi.grid(), psi.is_real());
  Field2D v(nmax, psi.grid(), psi.is_real());
  for (int n = -nmax; n <= nmax; ++n) {
    if (psi.mode_is_zero(n)) continue;
    u.mode(n) = -deriv(psi.mode(n), psi.grid().h());
    v.mode(n) = kI * double(n) * psi.mode(n);
  }
  return {sup_physical(u), sup_physical(v)};
}

// J(psi, omega) as the equal average of the advective and the two flux
// forms; S-accumulators keep the y-derivative of the flux terms down to one
// application per output mode.
Field2D conservative_jacobian(const Field2D& psi, const Field2D& om) {
  require_same_layout(psi, om);
  const Grid1D& g = psi.grid();
  const int nmax = psi.nmax();
  const long ny = g.ny();

  std::vector<Eigen::ArrayXcd> dpsi(size_t(2 * nmax + 1)), dom(size_t(2 * nmax + 1));
  std::vector<char> pz(size_t(2 * nmax + 1), 1), oz(size_t(2 * nmax + 1), 1);
  for (int n = -nmax; n <= nmax; ++n) {
    const size_t s = size_t(n + nmax);
    if (!psi.mode_is_zero(n)) {
      pz[s] = 0;
      dpsi[s] = deriv_sbp(psi.mode(n), g.h());
    }
    if (!om.mode_is_zero(n)) {
      oz[s] = 0;
      dom[s] = deriv_sbp(om.mode(n), g.h());
    }
  }

  Field2D out(nmax, g, psi.is_real() && om.is_real());
  // real inputs: compute m >= 0, mirror by conjugation
  const int mlo = out.is_real() ? 0 : -nmax;
  for (int m = mlo; m <= nmax; ++m) {
    Eigen::ArrayXcd s1 = Eigen::ArrayXcd::Zero(ny);
    Eigen::ArrayXcd sa = s1, sb = s1, sc = s1;
    bool any = false;
    for (int n = -nmax; n <= nmax; ++n) {
      const int k = m - n;
      if (k < -nmax || k > nmax) continue;
      if (pz[size_t(n + nmax)] || oz[size_t(k + nmax)]) continue;
      any = true;
      const Eigen::ArrayXcd& pn = psi.mode(n);
      const Eigen::ArrayXcd& ok = om.mode(k);
      Eigen::ArrayXcd A = pn * dom[size_t(k + nmax)];
      Eigen::ArrayXcd B = dpsi[size_t(n + nmax)] * ok;
      s1 += kI * (double(n) * A - double(k) * B);
      sa += A;
      sb += B;
      if (n != k) sc += (kI * double(n - k)) * (pn * ok);
    }
    if (!any) continue;
    Eigen::ArrayXcd jm = (s1 + (kI * double(m)) * (sa - sb) + deriv_sbp(sc, g.h())) / 3.0;
    out.mode(m) = jm;
    if (out.is_real() && m > 0) out.mode(-m) = jm.conjugate();
  }
  if (out.is_real()) out.enforce_reality();
  return out;
}

double fit_second_half_slope(const std::vector<double>& t, const std::vector<double>& d,
                             double t_mid, double* intercept) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_mid) continue;
    if (!(d[i] > 0.0) || !std::isfinite(d[i])) continue;
    const double x = t[i], y = std::log(d[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double det = double(n) * sxx - sx * sx;
  if (det <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double slope = (double(n) * sxy - sx * sy) / det;
  if (intercept) *intercept = (sy - slope * sx) / double(n);
  return slope;
}

long step_count(double t_end, double dt) {
  if (!(t_end > 0.0)) return 0;
  return std::max<long>(1, long(std::ceil(t_end / dt - 1e-12)));
}

} // namespace

QGState make_shear_state(const ShearFlow& f, const Params& pr, const Grid1D& g, int nmax) {
  validate(pr);
  if (g.L() != pr.L) throw error(errc::config, "grid length differs from params.L");
  QGState s{Field2D(nmax, g, true), 0.0, pr};
  Eigen::ArrayXd om0 = f.eval(g, 2) - pr.alpha2 * f.eval(g, 0) + pr.beta * g.y();
  s.omega.mode(0) = om0.cast<cd>();
  return s;
}

Field2D invert_pv(const Field2D& omega, const Params& pr) {
  validate(pr);
  if (omega.grid().L() != pr.L) throw error(errc::config, "grid length differs from params.L");
  Field2D d = pv_anomaly(omega, pr);
  const int nmax = d.nmax();
  Field2D psi(nmax, d.grid(), d.is_real());
  for (int n = -nmax; n <= nmax; ++n) {
    if (d.mode_is_zero(n)) continue;
    // (Delta - alpha2) psi = d  <=>  (alpha2 + n^2 - d^2) psi_n = -d_n
    psi.mode(n) = mode_solve(-d.mode(n), pr.alpha2 + double(n) * double(n), d.grid());
  }
  return psi;
}

Field2D rhs(const QGState& s) {
  const Field2D psi = invert_pv(s.omega, s.params);
  Field2D j = conservative_jacobian(psi, s.omega);
  j *= -1.0;
  return j;
}

void step(QGState& s, double dt) {
  QGState tmp = s;
  Field2D k1 = rhs(s);
  tmp.omega = s.omega + (0.5 * dt) * k1;
  tmp.time = s.time + 0.5 * dt;
  Field2D k2 = rhs(tmp);
  tmp.omega = s.omega + (0.5 * dt) * k2;
  Field2D k3 = rhs(tmp);
  tmp.omega = s.omega + dt * k3;
  tmp.time = s.time + dt;
  Field2D k4 = rhs(tmp);
  k2 += k3;
  k2 *= 2.0;
  k1 += k2;
  k1 += k4;
  s.omega += (dt / 6.0) * k1;
  s.time += dt;
}

double cfl_dt(const QGState& s, double cfl) {
  if (!(cfl > 0.0) || !std::isfinite(cfl)) throw error(errc::config, "cfl must be positive");
  const Field2D psi = invert_pv(s.omega, s.params);
  const VelocityBound vb = velocity_bound(psi);
  const double denom = vb.max_u * double(s.omega.nmax()) + vb.max_v / s.omega.grid().h();
  if (!(denom > 0.0)) return std::numeric_limits<double>::infinity();
  return cfl * 2.8 / denom;
}

double eddy_time(const QGState& s) {
  const Field2D psi = invert_pv(s.omega, s.params);
  const double mu = velocity_bound(psi).max_u;
  if (!(mu > 0.0)) return std::numeric_limits<double>::infinity();
  return s.params.L / mu;
}

DiagnosticsRecord diagnostics(const QGState& s) {
  const Grid1D& g = s.omega.grid();
  const Params& pr = s.params;
  const Field2D psi = invert_pv(s.omega, pr);
  const Field2D d = pv_anomaly(s.omega, pr);
  const Eigen::ArrayXd wt = g.trapezoid_weights();
  const int nmax = s.omega.nmax();

  DiagnosticsRecord r;
  r.t = s.time;

  double e_trap = 0.0, z_trap = 0.0, z_simp = 0.0;
  for (int n = -nmax; n <= nmax; ++n) {
    if (!d.mode_is_zero(n) && !psi.mode_is_zero(n))
      e_trap += (wt * (psi.mode(n).conjugate() * d.mode(n)).real()).sum();
    if (!s.omega.mode_is_zero(n)) {
      const Eigen::ArrayXd a2 = s.omega.mode(n).abs2();
      z_trap += (wt * a2).sum();
      z_simp += integrate(g, a2);
    }
  }
  const double pi = std::numbers::pi;
  r.energy = -pi * e_trap + 0.5 * pr.beta * pr.beta;
  r.enstrophy = 2.0 * pi * z_trap;
  r.enstrophy_metric = 2.0 * pi * z_simp;

  AlgebraElement X{psi, -pr.beta};
  r.energy_metric = 0.5 * metric_inner(X, X, pr);

  const Eigen::ArrayXXd samples = physical_samples(s.omega, std::max(64, 4 * nmax + 1));
  r.omega_min = samples.minCoeff();
  r.omega_max = samples.maxCoeff();
  return r;
}

Trajectory evolve(QGState s, const RunConfig& cfg) {
  if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end))
    throw error(errc::config, "t_end must be finite and nonnegative");
  if (cfg.cadence < 1) throw error(errc::config, "cadence must be >= 1");

  Trajectory tr;
  double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(s, cfg.cfl);
  if (!(dt > 0.0)) throw error(errc::config, "time step must be positive");
  if (cfg.t_end > 0.0 && dt > cfg.t_end) dt = cfg.t_end;

  const long nsteps = step_count(cfg.t_end, dt);
  const double dt_eff = nsteps > 0 ? cfg.t_end / double(nsteps) : 0.0;
  tr.dt_used = dt_eff;

  const double t0 = s.time;
  const double norm0 = std::max(s.omega.max_abs(), 1e-300);

  tr.series.push_back(diagnostics(s));
  if (cfg.store_snapshots) tr.snapshots.push_back(s);

  for (long i = 1; i <= nsteps; ++i) {
    step(s, dt_eff);
    s.time = t0 + double(i) * dt_eff; // multiplicative clock: no accumulation drift
    ++tr.steps;
    const double nn = s.omega.max_abs();
    if (!std::isfinite(nn) || nn > 1e6 * norm0) {
      tr.aborted = true;
      char buf[128];
      std::snprintf(buf, sizeof buf, "instability detector tripped at t = %.6g (norm %.3e vs initial %.3e)",
                    s.time, nn, norm0);
      tr.note = buf;
      tr.series.push_back(diagnostics(s));
      if (cfg.store_snapshots) tr.snapshots.push_back(s);
      return tr;
    }
    if (i % cfg.cadence == 0 || i == nsteps) {
      tr.series.push_back(diagnostics(s));
      if (cfg.store_snapshots) tr.snapshots.push_back(s);
    }
  }
  return tr;
}

SpreadingResult spreading_experiment(const ShearFlow& base, const Params& pr,
                                     const Grid1D& g, int nmax, const Perturbation& pert,
                                     double eps, const RunConfig& cfg) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw error(errc::config, "eps must be finite and >= 0");
  if (cfg.cadence < 1) throw error(errc::config, "cadence must be >= 1");

  QGState sb = make_shear_state(base, pr, g, nmax);
  const Field2D dpsi = perturbation_element(pert, g, nmax).stream;
  Field2D dom = apply_Lambda(dpsi, pr); // (Delta - alpha2) dpsi = -Lambda dpsi
  // eps is relative: the perturbation is normalized so its PV amplitude is
  // eps times the base PV amplitude
  const double dm = dom.max_abs(), bm = sb.omega.max_abs();
  dom *= (dm > 0.0) ? -eps * bm / dm : 0.0;
  QGState sp = sb;
  sp.omega += dom;

  SpreadingResult out;
  out.eps = eps;
  {
    const CorollaryReport cr = corollary_check(base, pr, g);
    out.verdict = cr.verdict;
    out.verdict_boundary = cr.boundary_case;
    out.note = cr.note;
  }

  double dt = cfg.dt > 0.0 ? cfg.dt : cfl_dt(sb, cfg.cfl);
  if (!(dt > 0.0)) throw error(errc::config, "time step must be positive");
  if (cfg.t_end > 0.0 && dt > cfg.t_end) dt = cfg.t_end;
  const long nsteps = step_count(cfg.t_end, dt);
  const double dt_eff = nsteps > 0 ? cfg.t_end / double(nsteps) : 0.0;

  const double norm0 = std::max({sb.omega.max_abs(), sp.omega.max_abs(), 1e-300});

  auto record = [&](double t) {
    Field2D dv = invert_pv(sp.omega, pr);
    dv -= invert_pv(sb.omega, pr);
    AlgebraElement D{dv, 0.0};
    out.t.push_back(t);
    out.separation.push_back(std::sqrt(std::max(0.0, metric_inner(D, D, pr))));
    out.base_series.push_back(diagnostics(sb));
  };
  record(0.0);

  for (long i = 1; i <= nsteps; ++i) {
    step(sb, dt_eff);
    step(sp, dt_eff);
    sb.time = sp.time = double(i) * dt_eff;
    const double nb = sb.omega.max_abs(), np = sp.omega.max_abs();
    if (!std::isfinite(nb) || !std::isfinite(np) || std::max(nb, np) > 1e6 * norm0) {
      out.aborted = true;
      out.note += (out.note.empty() ? "" : "; ");
      out.note += "instability detector tripped during spreading run";
      record(sb.time);
      return out;
    }
    if (i % cfg.cadence == 0 || i == nsteps) record(sb.time);
  }

  const double slope = fit_second_half_slope(out.t, out.separation, 0.5 * cfg.t_end, &out.fit_intercept);
  if (std::isfinite(slope)) {
    out.growth_rate = slope;
    out.fit_valid = true;
  }
  return out;
}

} // namespace qgc
