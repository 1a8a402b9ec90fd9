#pragma once

#include "qgcurv/grid.hpp"

namespace qgc {

// Dirichlet Green's function of lambda^2 - d^2/dy^2 on [0,L]:
//   G(y,s) = sinh(lambda min) sinh(lambda (L - max)) / (lambda sinh(lambda L)),
// evaluated via scaled exponentials so lambda*L ~ 700 stays finite.
struct HelmholtzKernel {
  double lambda = 1.0;
  double L = 1.0;
};

HelmholtzKernel make_kernel(double lambda, double L);

double green_eval(const HelmholtzKernel& k, double y, double s);

// u(y_i) = int_0^L G(y_i,s) rhs(s) ds by composite Simpson, with panels split
// at the diagonal so the C^0 kink never sits inside a panel.
ArrayXd solve_bvp_green(const HelmholtzKernel& k, const Grid1D& g, const ArrayXd& rhs);
ArrayXcd solve_bvp_green(const HelmholtzKernel& k, const Grid1D& g, const ArrayXcd& rhs);

// second-order tridiagonal solve of -u'' + lambda^2 u = rhs, u(0)=u(L)=0
ArrayXd solve_bvp_fd(const HelmholtzKernel& k, const Grid1D& g, const ArrayXd& rhs);
ArrayXcd solve_bvp_fd(const HelmholtzKernel& k, const Grid1D& g, const ArrayXcd& rhs);

// Fourth-order compact (Numerov) solve of lam2 u - u'' = rhs, u(0)=u(L)=0.
// Same tridiagonal cost as solve_bvp_fd; the rhs is filtered through the
// (1,10,1)/12 mass stencil, which is what buys the extra two orders.
ArrayXd solve_bvp_numerov(double lam2, const Grid1D& g, const ArrayXd& rhs);
ArrayXcd solve_bvp_numerov(double lam2, const Grid1D& g, const ArrayXcd& rhs);

// Compact fourth-order second derivative: v solving M v = A u with the
// Numerov mass/stiffness pair, wall rows closed one-sidedly.  On profiles that
// vanish at the walls, solve_bvp_numerov(lam2, g, lam2*u - compact_deriv2(g,u))
// reproduces u to roundoff for every lam2: the two routines share one matrix
// identity, so operator-level cancellations stay exact.
ArrayXd compact_deriv2(const Grid1D& g, const ArrayXd& u);
ArrayXcd compact_deriv2(const Grid1D& g, const ArrayXcd& u);

// I(y_i) = int_0^{y_i} e^{-lambda (y_i - z)} f(z) dz: exponentially weighted
// Simpson panels with third-order odd-node closures and a product-moment rule
// for the first panel.  The decaying weight keeps every step bounded, so
// one-pass Green-kernel convolutions stay stable for large lambda.
ArrayXd exp_prefix(const ArrayXd& f, double lambda, double h);
ArrayXcd exp_prefix(const ArrayXcd& f, double lambda, double h);

} // namespace qgc
