#pragma once

#include "qgcurv/field.hpp"
#include "qgcurv/params.hpp"
#include "qgcurv/shear_flow.hpp"

namespace qgc {

// {a,b} = a_x b_y - a_y b_x: exact mode-wise x-derivatives, second-order
// finite differences in y, products by direct mode convolution truncated back
// to nmax (Galerkin truncation; alias-free by construction).
Field2D poisson_bracket(const Field2D& a, const Field2D& b);

// Delta f, mode-wise -n^2 f_n + f_n''
Field2D laplacian(const Field2D& f);

// Lambda f = alpha^2 f - Delta f
Field2D apply_Lambda(const Field2D& f, const Params& pr);

// Mode-wise Dirichlet solve of (alpha^2 + n^2) u - u'' = f_n.  For the
// n = 0 mode at alpha2 = 0 the continuum operator is singular on the range
// orthogonal to constants, so the profile must have (near-)zero integral;
// the Dirichlet convention then pins the remaining constant.
Field2D invert_Lambda(const Field2D& f, const Params& pr);

// ad_X Y = -({psi,g}, b(psi,g))
AlgebraElement ad(const AlgebraElement& X, const AlgebraElement& Y);

// b(psi,g) = int_N y {psi,g} dnu
double cocycle_b(const Field2D& psi, const Field2D& g);

// Metric adjoint of ad: coad(X,Y) = (Lambda^{-1}(alpha^2 {psi,g} - {psi,Delta g}
// + gamma {psi,y}), 0) with gamma the charge of Y.  The cocycle term carries
// the second argument's charge; that is what <<coad(X,Y),Z>> = <<Y,ad(X,Z)>>
// forces, and it reproduces p = alpha^2 psi' - beta in the shear pipeline.
AlgebraElement coad(const AlgebraElement& X, const AlgebraElement& Y, const Params& pr);

// <<X,Y>> = int_N (alpha^2 psi g + grad psi . grad g) dnu + beta gamma
double metric_inner(const AlgebraElement& X, const AlgebraElement& Y, const Params& pr);

// Contact lift S_theta psi = (-psi_y, psi_x, psi - y psi_y) for theta = dz - y dx.
// The third component is pinned by theta(S_theta psi) = psi, which holds here
// as an exact algebraic identity in the discrete representation.
struct ContactLift {
  Field2D vx, vy, vz;
};
ContactLift contact_lift(const Field2D& psi);

// theta(X) = X_z - y X_x for a lifted triple; identity check helper.
Field2D contact_pairing(const ContactLift& X);

// sup-norm of {psi, omega} with omega = Delta psi - alpha^2 psi + beta y.
double steady_residual(const Field2D& psi, const Params& pr);
double steady_residual(const ShearFlow& f, const Params& pr, const Grid1D& g, int nmax);

} // namespace qgc
