#include "qgcurv/greens.hpp"

namespace qgc {

HelmholtzKernel make_kernel(double lambda, double L) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw error(errc::config, "HelmholtzKernel: lambda must be > 0");
  if (!(L > 0.0) || !std::isfinite(L))
    throw error(errc::config, "HelmholtzKernel: L must be > 0");
  return HelmholtzKernel{lambda, L};
}

double green_eval(const HelmholtzKernel& k, double y, double s) {
  if (y < 0.0 || y > k.L || s < 0.0 || s > k.L)
    throw error(errc::config, "green_eval: arguments outside [0,L]");
  const double lo = std::min(y, s), hi = std::max(y, s);
  const double lam = k.lambda;
  // sinh(a) sinh(b) / sinh(c) = e^{a+b-c} (1-e^{-2a})(1-e^{-2b})/(2 (1-e^{-2c}))
  // with a = lam*lo, b = lam*(L-hi), c = lam*L, so a+b-c = -lam*(hi-lo) <= 0.
  const double num = std::expm1(-2.0 * lam * lo) * std::expm1(-2.0 * lam * (k.L - hi));
  const double den = -std::expm1(-2.0 * lam * k.L);
  return std::exp(-lam * (hi - lo)) * num / (2.0 * lam * den);
}

namespace {

// Composite quadrature of f over the node range [j0, j1] that never places a
// panel across a kink endpoint: even interval counts use Simpson, odd ones a
// 3/8 tail (count >= 3) or a single trapezoid (count == 1).
template <typename Scalar>
Scalar panel_integral(const Eigen::Array<Scalar, Eigen::Dynamic, 1>& f, int j0, int j1,
                      double h) {
  const int cnt = j1 - j0;
  Scalar acc = Scalar(0);
  if (cnt <= 0) return acc;
  if (cnt == 1) return Scalar(0.5 * h) * (f(j0) + f(j1));
  int jstart = j0;
  if (cnt % 2 == 1) {
    // 3/8 rule on the first three intervals keeps the stencil one-sided
    acc += Scalar(3.0 * h / 8.0) * (f(j0) + Scalar(3.0) * f(j0 + 1) + Scalar(3.0) * f(j0 + 2) + f(j0 + 3));
    jstart = j0 + 3;
  }
  for (int j = jstart; j < j1; j += 2)
    acc += Scalar(h / 3.0) * (f(j) + Scalar(4.0) * f(j + 1) + f(j + 2));
  return acc;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> solve_green_impl(
    const HelmholtzKernel& k, const Grid1D& g,
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs) {
  const int n = g.ny();
  if (rhs.size() != n) throw error(errc::grid_mismatch, "solve_bvp_green: rhs size");
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  Arr u = Arr::Zero(n);
  Arr row(n);
  for (int i = 1; i < n - 1; ++i) {
    const double yi = g.y()(i);
    for (int j = 0; j < n; ++j) row(j) = Scalar(green_eval(k, yi, g.y()(j))) * rhs(j);
    u(i) = panel_integral(row, 0, i, g.h()) + panel_integral(row, i, n - 1, g.h());
  }
  return u;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> solve_fd_impl(
    const HelmholtzKernel& k, const Grid1D& g,
    const Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs) {
  const int n = g.ny();
  if (rhs.size() != n) throw error(errc::grid_mismatch, "solve_bvp_fd: rhs size");
  const int m = n - 2;
  const double h2 = g.h() * g.h();
  ArrayXd sub = ArrayXd::Constant(m - 1, -1.0 / h2);
  ArrayXd dia = ArrayXd::Constant(m, 2.0 / h2 + k.lambda * k.lambda);
  ArrayXd sup = ArrayXd::Constant(m - 1, -1.0 / h2);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> inner = rhs.segment(1, m);
  auto sol = thomas_solve(sub, dia, sup, inner);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> u =
      Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n);
  u.segment(1, m) = sol;
  return u;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> numerov_impl(
    double lam2, const Grid1D& g, const Eigen::Array<Scalar, Eigen::Dynamic, 1>& rhs) {
  const int n = g.ny();
  if (rhs.size() != n) throw error(errc::grid_mismatch, "solve_bvp_numerov: rhs size");
  if (!std::isfinite(lam2) || lam2 < 0.0)
    throw error(errc::config, "solve_bvp_numerov: lam2 must be finite and >= 0");
  const int m = n - 2;
  const double h2 = g.h() * g.h();
  // (lam2/12 - 1/h^2) off-diagonal, (2/h^2 + 10 lam2/12) diagonal: strictly
  // diagonally dominant for lam2 > 0, the plain Dirichlet Laplacian at lam2 = 0
  ArrayXd sub = ArrayXd::Constant(m - 1, lam2 / 12.0 - 1.0 / h2);
  ArrayXd dia = ArrayXd::Constant(m, 2.0 / h2 + 10.0 * lam2 / 12.0);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> inner(m);
  for (int j = 0; j < m; ++j)
    inner(j) = (rhs(j) + Scalar(10.0) * rhs(j + 1) + rhs(j + 2)) / Scalar(12.0);
  auto sol = thomas_solve(sub, dia, sub, inner);
  Eigen::Array<Scalar, Eigen::Dynamic, 1> u =
      Eigen::Array<Scalar, Eigen::Dynamic, 1>::Zero(n);
  u.segment(1, m) = sol;
  return u;
}

template <typename Scalar>
Eigen::Array<Scalar, Eigen::Dynamic, 1> compact_deriv2_impl(
    const Grid1D& g, const Eigen::Array<Scalar, Eigen::Dynamic, 1>& u) {
  const int n = g.ny();
  if (u.size() != n) throw error(errc::grid_mismatch, "compact_deriv2: profile size");
  const int m = n - 2;
  const double h2 = g.h() * g.h();
  using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  Arr v = Arr::Zero(n);
  // wall rows: one-sided 6-point (4th order) where the grid allows, else the
  // short 4-point closure; either choice cancels exactly in the numerov pair
  if (n >= 6) {
    v(0) = (Scalar(45.0) * u(0) - Scalar(154.0) * u(1) + Scalar(214.0) * u(2) -
            Scalar(156.0) * u(3) + Scalar(61.0) * u(4) - Scalar(10.0) * u(5)) /
           Scalar(12.0 * h2);
    v(n - 1) = (Scalar(45.0) * u(n - 1) - Scalar(154.0) * u(n - 2) +
                Scalar(214.0) * u(n - 3) - Scalar(156.0) * u(n - 4) +
                Scalar(61.0) * u(n - 5) - Scalar(10.0) * u(n - 6)) /
               Scalar(12.0 * h2);
  } else {
    v(0) = (Scalar(2.0) * u(0) - Scalar(5.0) * u(1) + Scalar(4.0) * u(2) - u(3)) / Scalar(h2);
    v(n - 1) =
        (Scalar(2.0) * u(n - 1) - Scalar(5.0) * u(n - 2) + Scalar(4.0) * u(n - 3) - u(n - 4)) /
        Scalar(h2);
  }
  Eigen::Array<Scalar, Eigen::Dynamic, 1> rhs(m);
  for (int j = 0; j < m; ++j)
    rhs(j) = (u(j) - Scalar(2.0) * u(j + 1) + u(j + 2)) / Scalar(h2);
  rhs(0) -= v(0) / Scalar(12.0);
  rhs(m - 1) -= v(n - 1) / Scalar(12.0);
  ArrayXd sub = ArrayXd::Constant(m - 1, 1.0 / 12.0);
  ArrayXd dia = ArrayXd::Constant(m, 10.0 / 12.0);
  v.segment(1, m) = thomas_solve(sub, dia, sub, rhs);
  return v;
}

} // namespace

ArrayXd solve_bvp_green(const HelmholtzKernel& k, const Grid1D& g, const ArrayXd& rhs) {
  return solve_green_impl<double>(k, g, rhs);
}
ArrayXcd solve_bvp_green(const HelmholtzKernel& k, const Grid1D& g, const ArrayXcd& rhs) {
  return solve_green_impl<cd>(k, g, rhs);
}
ArrayXd solve_bvp_fd(const HelmholtzKernel& k, const Grid1D& g, const ArrayXd& rhs) {
  return solve_fd_impl<double>(k, g, rhs);
}
ArrayXcd solve_bvp_fd(const HelmholtzKernel& k, const Grid1D& g, const ArrayXcd& rhs) {
  return solve_fd_impl<cd>(k, g, rhs);
}
ArrayXd solve_bvp_numerov(double lam2, const Grid1D& g, const ArrayXd& rhs) {
  return numerov_impl<double>(lam2, g, rhs);
}
ArrayXcd solve_bvp_numerov(double lam2, const Grid1D& g, const ArrayXcd& rhs) {
  return numerov_impl<cd>(lam2, g, rhs);
}
ArrayXd compact_deriv2(const Grid1D& g, const ArrayXd& u) {
  return compact_deriv2_impl<double>(g, u);
}
ArrayXcd compact_deriv2(const Grid1D& g, const ArrayXcd& u) {
  return compact_deriv2_impl<cd>(g, u);
}

namespace {

template <typename Arr>
Arr exp_prefix_impl(const Arr& f, double lam, double h) {
  using Scalar = typename Arr::Scalar;
  const Eigen::Index n = f.size();
  if (n < 3) throw error(errc::config, "exp_prefix: need at least 3 nodes");
  if (!(lam >= 0.0) || !(h > 0.0)) throw error(errc::config, "exp_prefix: bad lambda or h");
  Arr B = Arr::Zero(n);
  const double w1 = std::exp(-lam * h), w2 = std::exp(-2.0 * lam * h);
  const double x = lam * h;
  const double M0 = (lam > 0.0) ? -std::expm1(-x) / lam : h;
  double M1, M2;
  if (x < 1e-3) {
    // closed forms below lose digits to cancellation; truncation < 1e-15 rel
    M1 = h * h * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
    M2 = h * h * h * (1.0 / 3.0 - x / 12.0 + x * x / 60.0 - x * x * x / 360.0);
  } else {
    M1 = (h - M0) / lam;
    M2 = (h * h - 2.0 * M1) / lam;
  }
  // first panel: exact kernel moments against the quadratic through f0,f1,f2
  const double c0 = (M2 - 3.0 * h * M1 + 2.0 * h * h * M0) / (2.0 * h * h);
  const double c1 = (2.0 * h * M1 - M2) / (h * h);
  const double c2 = (M2 - h * M1) / (2.0 * h * h);
  B(1) = Scalar(c0) * f(0) + Scalar(c1) * f(1) + Scalar(c2) * f(2);
  for (Eigen::Index i = 2; i < n; ++i) {
    if (i % 2 == 0)
      B(i) = Scalar(w2) * B(i - 2) +
             Scalar(h / 3.0) * (Scalar(w2) * f(i - 2) + Scalar(4.0 * w1) * f(i - 1) + f(i));
    else
      B(i) = Scalar(w1) * B(i - 1) +
             Scalar(h / 12.0) *
                 (Scalar(-w2) * f(i - 2) + Scalar(8.0 * w1) * f(i - 1) + Scalar(5.0) * f(i));
  }
  return B;
}

} // namespace

ArrayXd exp_prefix(const ArrayXd& f, double lambda, double h) {
  return exp_prefix_impl<ArrayXd>(f, lambda, h);
}
ArrayXcd exp_prefix(const ArrayXcd& f, double lambda, double h) {
  return exp_prefix_impl<ArrayXcd>(f, lambda, h);
}

} // namespace qgc
