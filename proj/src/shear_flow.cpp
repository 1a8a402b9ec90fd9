#include "qgcurv/shear_flow.hpp"

#include <algorithm>

namespace qgc {

namespace {
constexpr int kFinePoints = 8193; // critsinh quadrature resolution (odd)
}

ShearFlow ShearFlow::poly(std::vector<double> coeffs) {
  for (double c : coeffs)
    if (!std::isfinite(c)) throw error(errc::config, "poly: non-finite coefficient");
  if (coeffs.empty()) coeffs.push_back(0.0);
  ShearFlow f;
  f.fam_ = family::poly;
  f.c_ = std::move(coeffs);
  return f;
}

ShearFlow ShearFlow::critical_sinh(double alpha2, double y0, double z0, int sign_p,
                                   double beta, double L) {
  if (!(alpha2 > 0.0) || !std::isfinite(alpha2))
    throw error(errc::config, "critical_sinh: alpha2 must be > 0");
  if (!(L > 0.0)) throw error(errc::config, "critical_sinh: L must be > 0");
  if (sign_p != 1 && sign_p != -1)
    throw error(errc::config, "critical_sinh: sign_p must be +1 or -1");
  if (z0 == 0.0 || !std::isfinite(z0) || !std::isfinite(y0) || !std::isfinite(beta))
    throw error(errc::config, "critical_sinh: bad y0/z0/beta");
  const double lam = std::sqrt(alpha2 + 1.0);
  const double Z0 = z0 * std::sinh(lam * (0.0 - y0));
  const double ZL = z0 * std::sinh(lam * (L - y0));
  if (!(Z0 > 0.0) || !(ZL > 0.0))
    throw error(errc::config, "critical_sinh: Z must be positive on [0,L] (y0 outside the channel, z0 sign matching)");

  ShearFlow f;
  f.fam_ = family::critsinh;
  f.cs_alpha2_ = alpha2;
  f.cs_y0_ = y0;
  f.cs_z0_ = z0;
  f.cs_sign_ = sign_p;
  f.cs_beta_ = beta;
  f.cs_L_ = L;
  // psi' sampled on a fine grid, then prefix-integrated once
  f.cs_h_ = L / double(kFinePoints - 1);
  ArrayXd dpsi(kFinePoints);
  for (int j = 0; j < kFinePoints; ++j) {
    const double y = double(j) * f.cs_h_;
    dpsi(j) = f.eval_critsinh(y, 1);
  }
  f.cs_psi_ = cumsimpson(dpsi, f.cs_h_);
  return f;
}

ShearFlow ShearFlow::from_samples(const ArrayXd& y, const ArrayXd& psi) {
  const Eigen::Index n = y.size();
  if (n < 4 || psi.size() != n)
    throw error(errc::config, "from_samples: need >= 4 matching samples");
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(y(i + 1) > y(i))) throw error(errc::config, "from_samples: y must increase");

  // natural cubic spline: second derivatives M solve a tridiagonal system
  ArrayXd hseg = y.tail(n - 1) - y.head(n - 1);
  const Eigen::Index m = n - 2; // interior nodes
  ArrayXd sub(m - 1), dia(m), sup(m - 1), rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double hl = hseg(i), hr = hseg(i + 1);
    dia(i) = 2.0 * (hl + hr);
    if (i > 0) sub(i - 1) = hl;
    if (i < m - 1) sup(i) = hr;
    rhs(i) = 6.0 * ((psi(i + 2) - psi(i + 1)) / hr - (psi(i + 1) - psi(i)) / hl);
  }
  ArrayXd Mi = thomas_solve(sub, dia, sup, rhs);
  ArrayXd M = ArrayXd::Zero(n);
  M.segment(1, m) = Mi;

  ShearFlow f;
  f.fam_ = family::spline;
  f.sp_y_ = y;
  f.sp_a_ = ArrayXd(n - 1);
  f.sp_b_ = ArrayXd(n - 1);
  f.sp_c_ = ArrayXd(n - 1);
  f.sp_d_ = ArrayXd(n - 1);
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    const double hi = hseg(i);
    f.sp_a_(i) = psi(i);
    f.sp_b_(i) = (psi(i + 1) - psi(i)) / hi - hi * (2.0 * M(i) + M(i + 1)) / 6.0;
    f.sp_c_(i) = M(i) / 2.0;
    f.sp_d_(i) = (M(i + 1) - M(i)) / (6.0 * hi);
  }
  return f;
}

double ShearFlow::eval_poly(double y, int k) const {
  // k-th derivative of sum c_i y^i: falling-factorial weights on the shifted series
  double val = 0.0, yp = 1.0;
  for (size_t i = size_t(k); i < c_.size(); ++i) {
    double fall = 1.0;
    for (int j = 0; j < k; ++j) fall *= double(i) - double(j);
    val += fall * c_[i] * yp;
    yp *= y;
  }
  return val;
}

double ShearFlow::eval_critsinh(double y, int k) const {
  const double a2 = cs_alpha2_;
  const double lam = std::sqrt(a2 + 1.0);
  const double mexp = a2 / (2.0 * (a2 + 1.0));
  const double Z = cs_z0_ * std::sinh(lam * (y - cs_y0_));
  const double Zp = cs_z0_ * lam * std::cosh(lam * (y - cs_y0_));
  const double s = double(cs_sign_);
  const double p = s * std::pow(Z, -mexp);
  switch (k) {
    case 0: {
      // interpolate the precomputed prefix integral (4-point Lagrange)
      const Eigen::Index n = cs_psi_.size();
      double t = y / cs_h_;
      Eigen::Index j = std::clamp<Eigen::Index>(Eigen::Index(std::floor(t)) - 1, 0, n - 4);
      const double x = t - double(j);
      const double w0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
      const double w1 = x * (x - 2.0) * (x - 3.0) / 2.0;
      const double w2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
      const double w3 = x * (x - 1.0) * (x - 2.0) / 6.0;
      return w0 * cs_psi_(j) + w1 * cs_psi_(j + 1) + w2 * cs_psi_(j + 2) + w3 * cs_psi_(j + 3);
    }
    case 1: return (p + cs_beta_) / a2;
    case 2: return -s * mexp * std::pow(Z, -mexp - 1.0) * Zp / a2;
    case 3: {
      const double r = Zp / Z;
      const double pdd = p * (mexp * (mexp + 1.0) * r * r - mexp * lam * lam);
      return pdd / a2;
    }
    default: throw error(errc::config, "ShearFlow::eval: k must be 0..3");
  }
}

double ShearFlow::eval_spline(double y, int k) const {
  const Eigen::Index n = sp_y_.size();
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (sp_y_(mid) <= y) lo = mid; else hi = mid;
  }
  if (y <= sp_y_(0)) lo = 0;
  if (y >= sp_y_(n - 1)) lo = n - 2;
  const double t = y - sp_y_(lo);
  const double a = sp_a_(lo), b = sp_b_(lo), c = sp_c_(lo), d = sp_d_(lo);
  switch (k) {
    case 0: return a + t * (b + t * (c + t * d));
    case 1: return b + t * (2.0 * c + 3.0 * t * d);
    case 2: return 2.0 * c + 6.0 * t * d;
    case 3: return 6.0 * d;
    default: throw error(errc::config, "ShearFlow::eval: k must be 0..3");
  }
}

double ShearFlow::eval(double y, int k) const {
  if (k < 0 || k > 3) throw error(errc::config, "ShearFlow::eval: k must be 0..3");
  switch (fam_) {
    case family::poly: return eval_poly(y, k);
    case family::critsinh: return eval_critsinh(y, k);
    case family::spline: return eval_spline(y, k);
  }
  return 0.0;
}

ArrayXd ShearFlow::eval(const Grid1D& g, int k) const {
  ArrayXd out(g.ny());
  for (int j = 0; j < g.ny(); ++j) out(j) = eval(g.y()(j), k);
  return out;
}

double ShearFlow::cs_alpha2() const {
  if (fam_ != family::critsinh) throw error(errc::config, "not a critsinh flow");
  return cs_alpha2_;
}
double ShearFlow::cs_beta() const {
  if (fam_ != family::critsinh) throw error(errc::config, "not a critsinh flow");
  return cs_beta_;
}

ArrayXd p_profile(const ShearFlow& f, const Params& pr, const Grid1D& g) {
  return pr.alpha2 * f.eval(g, 1) - pr.beta;
}

ArrayXd q_profile(const ShearFlow& f, const Grid1D& g) { return f.eval(g, 2); }

AlgebraElement shear_element(const ShearFlow& f, const Params& pr, const Grid1D& g,
                             int nmax) {
  Field2D psi(nmax, g, true);
  psi.mode(0) = f.eval(g, 0).cast<cd>();
  return AlgebraElement{std::move(psi), -pr.beta};
}

} // namespace qgc
