#include "qgcurv/algebra.hpp"

#include <numbers>
#include <vector>

#include "qgcurv/greens.hpp"

namespace qgc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// int_N y {psi,g} dnu for an already-computed bracket; only the x-mean mode
// survives the x integral.
double cocycle_of_bracket(const Field2D& bra) {
  const Grid1D& gr = bra.grid();
  ArrayXcd m0 = gr.y().cast<cd>() * bra.mode(0);
  return kTwoPi * integrate(gr, m0).real();
}

// d/dx as a mode-wise multiplier i n
Field2D x_derivative(const Field2D& f) {
  Field2D out(f.nmax(), f.grid(), f.is_real());
  for (int n = -f.nmax(); n <= f.nmax(); ++n) {
    if (n == 0 || f.mode_is_zero(n)) continue;
    out.mode(n) = cd(0.0, double(n)) * f.mode(n);
  }
  return out;
}

} // namespace

Field2D poisson_bracket(const Field2D& a, const Field2D& b) {
  require_same_layout(a, b);
  const int nmax = a.nmax();
  const Grid1D& gr = a.grid();
  const double h = gr.h();
  const int nm = 2 * nmax + 1;

  const size_t nms = size_t(nm);
  std::vector<ArrayXcd> da(nms), db(nms);
  std::vector<char> az(nms), bz(nms);
  for (int n = -nmax; n <= nmax; ++n) {
    az[size_t(n + nmax)] = a.mode_is_zero(n);
    bz[size_t(n + nmax)] = b.mode_is_zero(n);
    if (!az[size_t(n + nmax)]) da[size_t(n + nmax)] = deriv(a.mode(n), h);
    if (!bz[size_t(n + nmax)]) db[size_t(n + nmax)] = deriv(b.mode(n), h);
  }

  Field2D out(nmax, gr, a.is_real() && b.is_real());
  for (int m = -nmax; m <= nmax; ++m) {
    ArrayXcd acc = ArrayXcd::Zero(gr.ny());
    bool any = false;
    const int lo = std::max(-nmax, m - nmax), hi = std::min(nmax, m + nmax);
    for (int n = lo; n <= hi; ++n) {
      const int k = m - n;
      if (az[size_t(n + nmax)] || bz[size_t(k + nmax)]) continue;
      // a_x b_y - a_y b_x at modes (n,k): i n a_n db_k - i k da_n b_k
      acc += cd(0.0, 1.0) * (double(n) * a.mode(n) * db[size_t(k + nmax)] -
                             double(k) * da[size_t(n + nmax)] * b.mode(k));
      any = true;
    }
    if (any) out.mode(m) = acc;
  }
  if (out.is_real()) out.enforce_reality();
  return out;
}

// laplacian, apply_Lambda, and invert_Lambda share the compact Numerov pair:
// invert(apply(f)) is exact to roundoff on wall-vanishing fields, so the
// operator-level cancellations behind the isometry identities survive the
// jump to fourth order.
Field2D laplacian(const Field2D& f) {
  Field2D out(f.nmax(), f.grid(), f.is_real());
  for (int n = -f.nmax(); n <= f.nmax(); ++n) {
    if (f.mode_is_zero(n)) continue;
    out.mode(n) =
        compact_deriv2(f.grid(), f.mode(n)) - double(n) * double(n) * f.mode(n);
  }
  return out;
}

Field2D apply_Lambda(const Field2D& f, const Params& pr) {
  validate(pr);
  Field2D out(f.nmax(), f.grid(), f.is_real());
  for (int n = -f.nmax(); n <= f.nmax(); ++n) {
    if (f.mode_is_zero(n)) continue;
    out.mode(n) = (pr.alpha2 + double(n) * double(n)) * f.mode(n) -
                  compact_deriv2(f.grid(), f.mode(n));
  }
  return out;
}

Field2D invert_Lambda(const Field2D& f, const Params& pr) {
  validate(pr);
  const Grid1D& gr = f.grid();
  const double h = gr.h();
  Field2D out(f.nmax(), gr, f.is_real());
  for (int n = -f.nmax(); n <= f.nmax(); ++n) {
    if (f.mode_is_zero(n)) continue;
    const double lam2 = pr.alpha2 + double(n) * double(n);
    if (n == 0 && pr.alpha2 == 0.0) {
      // pure Neumann-free Poisson: x-mean forcing must be orthogonal to
      // constants up to quadrature dust, otherwise no solution exists
      const double mean = std::abs(integrate(gr, f.mode(0)));
      const double cap = std::max(1e-3, 100.0 * h * h) * gr.L() * f.mode(0).abs().maxCoeff();
      if (mean > cap)
        throw error(errc::singular_operator,
                    "invert_Lambda: mean-mode forcing not solvable at alpha2 = 0");
    }
    out.mode(n) = solve_bvp_numerov(lam2, gr, f.mode(n));
  }
  return out;
}

AlgebraElement ad(const AlgebraElement& X, const AlgebraElement& Y) {
  Field2D bra = poisson_bracket(X.stream, Y.stream);
  const double b = cocycle_of_bracket(bra);
  bra *= -1.0;
  return AlgebraElement{std::move(bra), -b};
}

double cocycle_b(const Field2D& psi, const Field2D& g) {
  return cocycle_of_bracket(poisson_bracket(psi, g));
}

AlgebraElement coad(const AlgebraElement& X, const AlgebraElement& Y, const Params& pr) {
  validate(pr);
  const Field2D& psi = X.stream;
  const Field2D& g = Y.stream;
  Field2D arg = pr.alpha2 * poisson_bracket(psi, g) - poisson_bracket(psi, laplacian(g));
  if (Y.charge != 0.0) {
    Field2D cx = x_derivative(psi);  // {psi, y} = psi_x
    cx *= Y.charge;
    arg += cx;
  }
  return AlgebraElement{invert_Lambda(arg, pr), 0.0};
}

double metric_inner(const AlgebraElement& X, const AlgebraElement& Y, const Params& pr) {
  validate(pr);
  require_same_layout(X.stream, Y.stream);
  const Grid1D& gr = X.stream.grid();
  const double h = gr.h();
  double s = 0.0;
  for (int n = -X.stream.nmax(); n <= X.stream.nmax(); ++n) {
    if (X.stream.mode_is_zero(n) || Y.stream.mode_is_zero(n)) continue;
    const ArrayXcd& pn = X.stream.mode(n);
    const ArrayXcd& gn = Y.stream.mode(n);
    ArrayXcd integrand = (pr.alpha2 + double(n) * double(n)) * pn * gn.conjugate() +
                         deriv(pn, h) * deriv(gn, h).conjugate();
    s += integrate(gr, integrand).real();
  }
  return kTwoPi * s + X.charge * Y.charge;
}

ContactLift contact_lift(const Field2D& psi) {
  const Grid1D& gr = psi.grid();
  const double h = gr.h();
  ContactLift out{Field2D(psi.nmax(), gr, psi.is_real()),
                  Field2D(psi.nmax(), gr, psi.is_real()),
                  Field2D(psi.nmax(), gr, psi.is_real())};
  const ArrayXcd yc = gr.y().cast<cd>();
  for (int n = -psi.nmax(); n <= psi.nmax(); ++n) {
    if (psi.mode_is_zero(n)) continue;
    ArrayXcd dp = deriv(psi.mode(n), h);
    out.vx.mode(n) = -dp;
    if (n != 0) out.vy.mode(n) = cd(0.0, double(n)) * psi.mode(n);
    out.vz.mode(n) = psi.mode(n) - yc * dp;
  }
  return out;
}

Field2D contact_pairing(const ContactLift& X) {
  require_same_layout(X.vx, X.vz);
  Field2D out(X.vz.nmax(), X.vz.grid(), X.vz.is_real());
  const ArrayXcd yc = X.vz.grid().y().cast<cd>();
  for (int n = -out.nmax(); n <= out.nmax(); ++n)
    out.mode(n) = X.vz.mode(n) - yc * X.vx.mode(n);
  return out;
}

double steady_residual(const Field2D& psi, const Params& pr) {
  validate(pr);
  // potential vorticity omega = Delta psi - alpha^2 psi + beta y
  Field2D w = laplacian(psi) + (-pr.alpha2) * psi;
  w.mode(0) += pr.beta * psi.grid().y().cast<cd>();
  return sup_physical(poisson_bracket(psi, w));
}

double steady_residual(const ShearFlow& f, const Params& pr, const Grid1D& g, int nmax) {
  Field2D psi(nmax, g, true);
  psi.mode(0) = f.eval(g, 0).cast<cd>();
  return steady_residual(psi, pr);
}

} // namespace qgc
