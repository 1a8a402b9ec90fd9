#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qgcurv/error.hpp"

namespace qgc {

using Eigen::ArrayXcd;
using Eigen::ArrayXd;
using cd = std::complex<double>;

// Uniform grid on [0,L].  ny is odd and >= 5 so composite Simpson panels tile
// the interval exactly.  Simpson weights are positive and sum to L.
class Grid1D {
public:
  Grid1D(int ny, double L);

  int ny() const { return ny_; }
  double L() const { return L_; }
  double h() const { return h_; }
  const ArrayXd& y() const { return y_; }
  const ArrayXd& simpson_weights() const { return wsimp_; }
  const ArrayXd& trapezoid_weights() const { return wtrap_; }
  bool same(const Grid1D& o) const;

private:
  int ny_;
  double L_, h_;
  ArrayXd y_, wsimp_, wtrap_;
};

inline void require_same(const Grid1D& a, const Grid1D& b) {
  if (!a.same(b)) throw error(errc::grid_mismatch, "grids differ (ny or L)");
}

inline double integrate(const Grid1D& g, const ArrayXd& f) {
  return (g.simpson_weights() * f).sum();
}
inline cd integrate(const Grid1D& g, const ArrayXcd& f) {
  return (g.simpson_weights().cast<cd>() * f).sum();
}

// First derivative, fourth order: 5-point centered interior, one-sided and
// offset 5-point closures at the walls (exact through quartics).  Arrays
// shorter than 5 nodes fall back to the 3-point second-order scheme.
template <typename Derived>
typename Derived::PlainObject deriv(const Eigen::ArrayBase<Derived>& f, double h) {
  using Out = typename Derived::PlainObject;
  const Eigen::Index n = f.size();
  Out d(n);
  if (n < 5) {
    d.segment(1, n - 2) = (f.segment(2, n - 2) - f.segment(0, n - 2)) / (2.0 * h);
    d(0) = (-3.0 * f(0) + 4.0 * f(1) - f(2)) / (2.0 * h);
    d(n - 1) = (3.0 * f(n - 1) - 4.0 * f(n - 2) + f(n - 3)) / (2.0 * h);
    return d;
  }
  const double c = 1.0 / (12.0 * h);
  d.segment(2, n - 4) = c * (f.segment(0, n - 4) - 8.0 * f.segment(1, n - 4) +
                             8.0 * f.segment(3, n - 4) - f.segment(4, n - 4));
  d(0) = c * (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4));
  d(1) = c * (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4));
  d(n - 2) = c * (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) +
                  6.0 * f(n - 4) - f(n - 5));
  d(n - 1) = c * (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) -
                  16.0 * f(n - 4) + 3.0 * f(n - 5));
  return d;
}

// Second derivative, fourth order: 5-point centered interior, one-sided and
// offset 6-point closures at the walls (exact through quintics).  Arrays
// shorter than 6 nodes fall back to the 3-point second-order scheme.
template <typename Derived>
typename Derived::PlainObject deriv2(const Eigen::ArrayBase<Derived>& f, double h) {
  using Out = typename Derived::PlainObject;
  const Eigen::Index n = f.size();
  const double h2 = h * h;
  Out d(n);
  if (n < 6) {
    d.segment(1, n - 2) =
        (f.segment(2, n - 2) - 2.0 * f.segment(1, n - 2) + f.segment(0, n - 2)) / h2;
    d(0) = (2.0 * f(0) - 5.0 * f(1) + 4.0 * f(2) - f(3)) / h2;
    d(n - 1) = (2.0 * f(n - 1) - 5.0 * f(n - 2) + 4.0 * f(n - 3) - f(n - 4)) / h2;
    return d;
  }
  const double c = 1.0 / (12.0 * h2);
  d.segment(2, n - 4) = c * (-f.segment(0, n - 4) + 16.0 * f.segment(1, n - 4) -
                             30.0 * f.segment(2, n - 4) + 16.0 * f.segment(3, n - 4) -
                             f.segment(4, n - 4));
  d(0) = c * (45.0 * f(0) - 154.0 * f(1) + 214.0 * f(2) - 156.0 * f(3) +
              61.0 * f(4) - 10.0 * f(5));
  d(1) = c * (10.0 * f(0) - 15.0 * f(1) - 4.0 * f(2) + 14.0 * f(3) - 6.0 * f(4) + f(5));
  d(n - 2) = c * (10.0 * f(n - 1) - 15.0 * f(n - 2) - 4.0 * f(n - 3) +
                  14.0 * f(n - 4) - 6.0 * f(n - 5) + f(n - 6));
  d(n - 1) = c * (45.0 * f(n - 1) - 154.0 * f(n - 2) + 214.0 * f(n - 3) -
                  156.0 * f(n - 4) + 61.0 * f(n - 5) - 10.0 * f(n - 6));
  return d;
}

// Summation-by-parts first derivative: centered interior, first-order
// one-sided boundary rows.  Satisfies <Df,g> + <f,Dg> = f g |_0^L exactly in
// the trapezoid inner product; the simulator's conservation proof rests on it.
template <typename Derived>
typename Derived::PlainObject deriv_sbp(const Eigen::ArrayBase<Derived>& f, double h) {
  using Out = typename Derived::PlainObject;
  const Eigen::Index n = f.size();
  Out d(n);
  d.segment(1, n - 2) = (f.segment(2, n - 2) - f.segment(0, n - 2)) / (2.0 * h);
  d(0) = (f(1) - f(0)) / h;
  d(n - 1) = (f(n - 1) - f(n - 2)) / h;
  return d;
}

// Prefix integral F(y_j) = int_0^{y_j} f: composite Simpson on even nodes,
// third-order closures (5,8,-1)/12 and (-1,8,5)/12 on the odd ones.
template <typename Derived>
typename Derived::PlainObject cumsimpson(const Eigen::ArrayBase<Derived>& f, double h) {
  using Out = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  Out F(n);
  F(0) = Scalar(0);
  if (n > 1) F(1) = (h / 12.0) * (5.0 * f(0) + 8.0 * f(1) - f(2));
  for (Eigen::Index j = 2; j < n; ++j) {
    if (j % 2 == 0)
      F(j) = F(j - 2) + (h / 3.0) * (f(j - 2) + 4.0 * f(j - 1) + f(j));
    else
      F(j) = F(j - 1) + (h / 12.0) * (-f(j - 2) + 8.0 * f(j - 1) + 5.0 * f(j));
  }
  return F;
}

// Tridiagonal solve (Thomas).  sub has size n-1 (row i couples x_{i-1}),
// sup has size n-1 (row i couples x_{i+1}).  Strict diagonal dominance is
// the caller's responsibility; zero pivots throw.
template <typename Derived>
typename Derived::PlainObject thomas_solve(const ArrayXd& sub, const ArrayXd& diag,
                                           const ArrayXd& sup,
                                           const Eigen::ArrayBase<Derived>& rhs) {
  using Out = typename Derived::PlainObject;
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = diag.size();
  if (sub.size() != n - 1 || sup.size() != n - 1 || rhs.size() != n)
    throw error(errc::config, "thomas_solve: inconsistent band sizes");
  ArrayXd c(n);
  Out d(n);
  double piv = diag(0);
  if (piv == 0.0) throw error(errc::numerical, "thomas_solve: zero pivot");
  c(0) = sup(0) / piv;
  d(0) = rhs(0) / piv;
  for (Eigen::Index i = 1; i < n; ++i) {
    piv = diag(i) - sub(i - 1) * c(i - 1);
    if (piv == 0.0) throw error(errc::numerical, "thomas_solve: zero pivot");
    c(i) = (i < n - 1) ? sup(i) / piv : 0.0;
    d(i) = (rhs(i) - Scalar(sub(i - 1)) * d(i - 1)) / piv;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) d(i) -= Scalar(c(i)) * d(i + 1);
  return d;
}

} // namespace qgc
