#include "qgcurv/curvature.hpp"

#include <cmath>
#include <numbers>

namespace qgc {

namespace {

constexpr double kPi = std::numbers::pi;

double lambda_checked(const Params& pr, int n) {
  const double lam = lambda_of(pr, n);
  if (!(lam > 0.0))
    throw error(errc::config, "mode requires alpha2 + n^2 > 0");
  return lam;
}

struct KnParts {
  double k = 0.0;
  double mass = 0.0; // quadrature of the absolute integrands, for noise floors
};

KnParts kn_integral_impl(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                         const ArrayXcd& gp) {
  const double h = g.h();
  const ArrayXd p = p_profile(f, pr, g);
  const ArrayXd q = q_profile(f, g);
  const ArrayXcd phi = compute_phi(f, pr, g, n, gp, PhiBackend::fd);
  const ArrayXcd dphi = deriv(phi, h);
  const ArrayXd gm = gp.abs();
  const double i1 = integrate(g, ArrayXd(p * (phi.conjugate() * gp).real()));
  const double i2 = integrate(g, ArrayXd(q * (dphi.conjugate() * gp).real()));
  const double i3 = integrate(g, ArrayXd(q.square() * gp.abs2()));
  KnParts out;
  out.k = 0.25 * i1 + 0.5 * i2 - i3;
  out.mass = 0.25 * integrate(g, ArrayXd(p.abs() * phi.abs() * gm)) +
             0.5 * integrate(g, ArrayXd(q.abs() * dphi.abs() * gm)) +
             integrate(g, ArrayXd(q.square() * gp.abs2()));
  return out;
}

} // namespace

void validate_perturbation(const Perturbation& p, const Grid1D& g) {
  for (const auto& m : p.modes) {
    if (m.n == 0) throw error(errc::config, "perturbation: mode index must be nonzero");
    if (m.g.size() != g.ny())
      throw error(errc::grid_mismatch, "perturbation: profile length != grid size");
    if (!m.g.allFinite()) throw error(errc::config, "perturbation: non-finite profile");
    const double mx = m.g.abs().maxCoeff();
    const double cap = 1e-12 * std::max(1.0, mx);
    if (std::abs(m.g(0)) > cap || std::abs(m.g(g.ny() - 1)) > cap)
      throw error(errc::config, "perturbation: profile must vanish at the walls");
  }
  if (!std::isfinite(p.charge)) throw error(errc::config, "perturbation: bad charge");
}

AlgebraElement perturbation_element(const Perturbation& p, const Grid1D& g, int nmax) {
  validate_perturbation(p, g);
  Field2D f(nmax, g, true);
  for (const auto& m : p.modes) {
    if (std::abs(m.n) > nmax)
      throw error(errc::config, "perturbation: mode exceeds truncation");
    f.mode(m.n) += m.g;
    f.mode(-m.n) += m.g.conjugate();
  }
  return AlgebraElement{std::move(f), p.charge};
}

EtaXi eta_xi(const ShearFlow& f, const Params& pr, const Grid1D& g, int n) {
  require_channel(pr, g);
  const double lam = lambda_checked(pr, n);
  const ArrayXd p = p_profile(f, pr, g);
  const ArrayXd q = q_profile(f, g);
  const ArrayXd dp = pr.alpha2 * f.eval(g, 2);
  const ArrayXd dq = f.eval(g, 3);
  const ArrayXd E = (-2.0 * lam * g.y()).exp();
  const ArrayXd F = (-2.0 * lam * (g.L() - g.y())).exp();
  EtaXi out{g, lam, {}, {}, {}, {}};
  out.eta_t = p * (1.0 - E) / 4.0 + lam * q * (1.0 + E) / 2.0;
  out.deta_t = dp * (1.0 - E) / 4.0 + (lam / 2.0) * p * E + lam * dq * (1.0 + E) / 2.0 -
               lam * lam * q * E;
  out.xi_t = p * (1.0 - F) / 4.0 - lam * q * (1.0 + F) / 2.0;
  out.dxi_t = dp * (1.0 - F) / 4.0 - (lam / 2.0) * p * F - lam * dq * (1.0 + F) / 2.0 -
              lam * lam * q * F;
  return out;
}

double eta_scaled_at(const ShearFlow& f, const Params& pr, int n, double y) {
  const double lam = lambda_checked(pr, n);
  const double E = std::exp(-2.0 * lam * y);
  return p_at(f, pr, y) * (1.0 - E) / 4.0 + lam * q_at(f, y) * (1.0 + E) / 2.0;
}

double xi_scaled_at(const ShearFlow& f, const Params& pr, int n, double y) {
  const double lam = lambda_checked(pr, n);
  const double F = std::exp(-2.0 * lam * (pr.L - y));
  return p_at(f, pr, y) * (1.0 - F) / 4.0 - lam * q_at(f, y) * (1.0 + F) / 2.0;
}

ArrayXcd compute_phi(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                     const ArrayXcd& gp, PhiBackend backend) {
  require_channel(pr, g);
  if (gp.size() != g.ny())
    throw error(errc::grid_mismatch, "compute_phi: profile length != grid size");
  const double lam = lambda_checked(pr, n);
  const double h = g.h();
  if (backend == PhiBackend::fd) {
    const ArrayXcd p = p_profile(f, pr, g).cast<cd>();
    const ArrayXcd q = q_profile(f, g).cast<cd>();
    ArrayXcd rhs = p * gp - 2.0 * deriv(ArrayXcd(q * gp), h);
    return solve_bvp_numerov(lam * lam, g, rhs);
  }
  const EtaXi ex = eta_xi(f, pr, g, n);
  const ArrayXcd P = exp_prefix(ArrayXcd(ex.eta_t.cast<cd>() * gp), lam, h);
  const ArrayXcd Qr =
      exp_prefix(ArrayXcd((ex.xi_t.cast<cd>() * gp).reverse()), lam, h);
  const ArrayXcd Q = Qr.reverse();
  const ArrayXd E = (-2.0 * lam * g.y()).exp();
  const ArrayXd F = (-2.0 * lam * (g.L() - g.y())).exp();
  const double pref = 2.0 / (lam * (-std::expm1(-2.0 * lam * g.L())));
  return pref * ((1.0 - F).cast<cd>() * P + (1.0 - E).cast<cd>() * Q);
}

double kn_integral(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                   const ArrayXcd& gp) {
  require_channel(pr, g);
  if (gp.size() != g.ny())
    throw error(errc::grid_mismatch, "kn_integral: profile length != grid size");
  return kn_integral_impl(f, pr, g, n, gp).k;
}

double kn_green(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                const ArrayXcd& gp) {
  require_channel(pr, g);
  if (gp.size() != g.ny())
    throw error(errc::grid_mismatch, "kn_green: profile length != grid size");
  const double lam = lambda_checked(pr, n);
  const EtaXi ex = eta_xi(f, pr, g, n);
  const ArrayXcd B = exp_prefix(ArrayXcd(ex.eta_t.cast<cd>() * gp.conjugate()), lam, g.h());
  const double T = integrate(g, ArrayXd(ex.xi_t * (gp * B).real()));
  return 4.0 / (lam * (-std::expm1(-2.0 * lam * g.L()))) * T;
}

double kn_arnold(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                 const ArrayXcd& gp) {
  require_channel(pr, g);
  const int nmax = std::abs(n);
  const AlgebraElement X = shear_element(f, pr, g, nmax);
  Perturbation pt;
  pt.modes.push_back(ModeProfile{n, gp});
  const AlgebraElement Y = perturbation_element(pt, g, nmax);
  return curvature_arnold(X, Y, pr) / (4.0 * kPi * double(n) * double(n));
}

CurvatureReport total_curvature(const ShearFlow& f, const Params& pr, const Grid1D& g,
                                const Perturbation& pert) {
  require_channel(pr, g);
  validate_perturbation(pert, g);
  CurvatureReport rep;
  for (const auto& m : pert.modes) {
    const KnParts ki = kn_integral_impl(f, pr, g, m.n, m.g);
    const double kg = kn_green(f, pr, g, m.n, m.g);
    CurvatureRow row;
    row.n = m.n;
    row.k_integral = ki.k;
    row.k_green = kg;
    row.err_est = std::abs(ki.k - kg);
    row.below_noise = std::abs(ki.k) < 1e-13 * ki.mass;
    rep.rows.push_back(row);
    rep.total += 2.0 * double(m.n) * double(m.n) * ki.k;
  }
  return rep;
}

double curvature_arnold(const AlgebraElement& X, const AlgebraElement& Y,
                        const Params& pr) {
  const AlgebraElement cXY = coad(X, Y, pr);
  const AlgebraElement cYX = coad(Y, X, pr);
  const AlgebraElement aXY = ad(X, Y);
  const AlgebraElement cXX = coad(X, X, pr);
  const AlgebraElement cYY = coad(Y, Y, pr);
  const AlgebraElement sum = cXY + cYX;
  const AlgebraElement dif = cYX - cXY;
  return 0.25 * (metric_inner(sum, sum, pr) + 2.0 * metric_inner(aXY, dif, pr) -
                 3.0 * metric_inner(aXY, aXY, pr) - 4.0 * metric_inner(cXX, cYY, pr));
}

AlgebraElement deformation_D(const AlgebraElement& X, const AlgebraElement& Y,
                             const Params& pr) {
  return coad(X, Y, pr) + ad(X, Y);
}

double curvature_two_term(const AlgebraElement& X, const AlgebraElement& Y,
                          const Params& pr) {
  const AlgebraElement dXY = deformation_D(X, Y, pr);
  const AlgebraElement v = coad(Y, X, pr) + dXY;
  const AlgebraElement aXY = ad(X, Y);
  const AlgebraElement dXX = deformation_D(X, X, pr);
  const AlgebraElement dYY = deformation_D(Y, Y, pr);
  return 0.25 * metric_inner(v, v, pr) - metric_inner(aXY, dXY, pr) -
         metric_inner(dXX, dYY, pr);
}

double normalized_sectional(const AlgebraElement& X, const AlgebraElement& Y,
                            const Params& pr) {
  const double xx = metric_inner(X, X, pr);
  const double yy = metric_inner(Y, Y, pr);
  const double xy = metric_inner(X, Y, pr);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-14 * xx * yy) || !(xx > 0.0) || !(yy > 0.0))
    throw error(errc::degenerate_plane, "normalized_sectional: degenerate span");
  return curvature_arnold(X, Y, pr) / gram;
}

} // namespace qgc
