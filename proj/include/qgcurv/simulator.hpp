#pragma once

#include <string>
#include <vector>

#include "qgcurv/criterion.hpp"

namespace qgc {

// Potential vorticity state: omega = Delta psi - alpha2 psi + beta y.
struct QGState {
  Field2D omega;
  double time = 0.0;
  Params params;
};

// omega of a pure shear: psi'' - alpha2 psi + beta y on the zero mode, from
// the flow's analytic derivatives.
QGState make_shear_state(const ShearFlow& f, const Params& pr, const Grid1D& g, int nmax);

struct RunConfig {
  double dt = 0.0;   // > 0 fixes the step; 0 derives it from cfl at t = 0
  double cfl = 0.5;  // fraction of the RK4 imaginary-axis limit 2.8
  double t_end = 1.0;
  int cadence = 1;             // record diagnostics every this many steps
  bool dealias = true;         // kept for interface compatibility: products are
                               // Galerkin-truncated exactly, so nothing aliases
  bool store_snapshots = false;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;            // trapezoid-paired invariant of the scheme
  double energy_metric = 0.0;     // Simpson-quadrature metric energy
  double enstrophy = 0.0;         // trapezoid-paired invariant
  double enstrophy_metric = 0.0;  // Simpson quadrature
  double omega_min = 0.0, omega_max = 0.0;
};

// psi with (Delta - alpha2) psi = omega - beta y, Dirichlet on every mode
// (the zero mode's two constants are gauged away: psi0(0) = psi0(L) = 0).
// The discrete Dirichlet solve is nonsingular for every alpha2 >= 0.
Field2D invert_pv(const Field2D& omega, const Params& pr);

// -J(psi, omega) with psi = invert_pv(omega).  J is the average of the
// advective and both flux forms of the bracket, with exact x-derivatives and
// the summation-by-parts y-derivative: that average conserves the trapezoid
// pairings <omega,omega> and <psi,omega> exactly in semi-discrete time, and
// pure shear states are exact fixed points.
Field2D rhs(const QGState& s);

// classical 4-stage Runge-Kutta
void step(QGState& s, double dt);

// dt = cfl * 2.8 / (max|u| nmax + max|v|/h), capped later by t_end
double cfl_dt(const QGState& s, double cfl);

// L / max|u|; infinite for a quiescent state
double eddy_time(const QGState& s);

DiagnosticsRecord diagnostics(const QGState& s);

struct Trajectory {
  std::vector<DiagnosticsRecord> series;
  std::vector<QGState> snapshots;
  double dt_used = 0.0;
  long steps = 0;
  bool aborted = false; // instability detector tripped (1e6x norm growth)
  std::string note;
};

Trajectory evolve(QGState s, const RunConfig& cfg);

// Twin runs from omega and omega + eps * (Delta - alpha2) dpsi, recording the
// metric velocity distance over time, a log-linear growth fit on the second
// half, and the criterion verdict of the base flow.  Measured growth and
// analytic verdict are reported side by side, with no implication claimed.
struct SpreadingResult {
  std::vector<double> t, separation;
  std::vector<DiagnosticsRecord> base_series;
  double eps = 0.0; // relative PV amplitude of the applied perturbation
  double growth_rate = 0.0, fit_intercept = 0.0;
  bool fit_valid = false;
  Verdict verdict = Verdict::indeterminate;
  bool verdict_boundary = false;
  bool aborted = false;
  std::string note;
};

SpreadingResult spreading_experiment(const ShearFlow& base, const Params& pr,
                                     const Grid1D& g, int nmax, const Perturbation& pert,
                                     double eps, const RunConfig& cfg);

} // namespace qgc
