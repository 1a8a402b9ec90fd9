#pragma once

#include <vector>

#include "qgcurv/algebra.hpp"
#include "qgcurv/greens.hpp"
#include "qgcurv/shear_flow.hpp"

namespace qgc {

// One x-Fourier component of a perturbation: mode index n != 0 with a complex
// profile on the grid, zero at the walls.  The physical field is
// g(y) e^{inx} + conjugate.
struct ModeProfile {
  int n = 1;
  ArrayXcd g;
};

struct Perturbation {
  std::vector<ModeProfile> modes;
  double charge = 0.0;
};

void validate_perturbation(const Perturbation& p, const Grid1D& g);

inline void require_channel(const Params& pr, const Grid1D& g) {
  validate(pr);
  if (g.L() != pr.L)
    throw error(errc::config, "grid interval and Params.L disagree");
}

// Sum the mode profiles into a real algebra element on a truncation nmax.
AlgebraElement perturbation_element(const Perturbation& p, const Grid1D& g, int nmax);

// Kernel factors of the curvature quadratic form at mode n, in overflow-safe
// scaled form:  eta = e^{lambda y} eta_t,  xi = e^{lambda (L-y)} xi_t,  with
//   eta = p/2 sinh(lambda y) + lambda q cosh(lambda y),
//   xi  = p/2 sinh(lambda (L-y)) - lambda q cosh(lambda (L-y)),
// p = alpha2 psi' - beta, q = psi''.  deta_t/dxi_t are d/dy of the scaled
// factors, so eta' = e^{lambda y} (lambda eta_t + deta_t) and
// xi' = e^{lambda (L-y)} (-lambda xi_t + dxi_t).
struct EtaXi {
  Grid1D grid;
  double lambda = 1.0;
  ArrayXd eta_t, xi_t, deta_t, dxi_t;
};

EtaXi eta_xi(const ShearFlow& f, const Params& pr, const Grid1D& g, int n);

// pointwise scaled factors, for root bracketing off the grid
double eta_scaled_at(const ShearFlow& f, const Params& pr, int n, double y);
double xi_scaled_at(const ShearFlow& f, const Params& pr, int n, double y);

// Dirichlet solve of lambda^2 phi - phi'' = p g - 2 (q g)', the potential of
// the mode-n quadratic form.  fd assembles the right side with second-order
// differences and solves the tridiagonal system; green integrates the
// equivalent eta/xi representation with exponentially weighted prefix sums
// (derivative moved onto the kernel, so no differencing of q g).
enum class PhiBackend { fd, green };
ArrayXcd compute_phi(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                     const ArrayXcd& gp, PhiBackend backend = PhiBackend::fd);

// Mode-n sectional curvature number along the shear, two independent routes:
//   kn_integral: K_n = 1/4 int Re(conj(phi) p g) + 1/2 int Re(conj(phi') q g)
//                      - int q^2 |g|^2
//   kn_green:    K_n as the double integral of the factorized kernel
//                xi(max) eta(min) against Re(conj(g) g) over the triangle.
double kn_integral(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                   const ArrayXcd& gp);
double kn_green(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                const ArrayXcd& gp);

// Same number through the algebra operations: assemble X = shear element and
// Y = profile pair, evaluate the full curvature expression, and peel off the
// plane normalization 4 pi n^2.
double kn_arnold(const ShearFlow& f, const Params& pr, const Grid1D& g, int n,
                 const ArrayXcd& gp);

struct CurvatureRow {
  int n = 0;
  double k_integral = 0.0; // primary value
  double k_green = 0.0;    // cross-check value
  double err_est = 0.0;    // |k_integral - k_green|
  bool below_noise = false; // magnitude under 1e-13 of the quadrature mass
};

// total = sum over supplied modes of 2 n^2 K_n.  The metric curvature of the
// corresponding plane pair carries one more factor 2 pi from the x measure;
// serialization reports that factor alongside.
struct CurvatureReport {
  std::vector<CurvatureRow> rows;
  double total = 0.0;
};

CurvatureReport total_curvature(const ShearFlow& f, const Params& pr, const Grid1D& g,
                                const Perturbation& pert);

// Unnormalized sectional curvature numerator <R(X,Y)Y,X> from the four-term
// commutator/coadjoint expression.
double curvature_arnold(const AlgebraElement& X, const AlgebraElement& Y,
                        const Params& pr);

// D(X,Y) = coad(X,Y) + ad(X,Y); vanishing of D(X,.) makes X generate a
// one-parameter isometry family.
AlgebraElement deformation_D(const AlgebraElement& X, const AlgebraElement& Y,
                             const Params& pr);

// Rearranged numerator: 1/4 |coad(Y,X) + D(X,Y)|^2 - <ad(X,Y), D(X,Y)>
// - <D(X,X), D(Y,Y)>.  Agrees with curvature_arnold up to the second-order
// adjointness residual of the discretization.
double curvature_two_term(const AlgebraElement& X, const AlgebraElement& Y,
                          const Params& pr);

// numerator / Gram determinant; throws degenerate_plane when X, Y are
// (numerically) collinear.
double normalized_sectional(const AlgebraElement& X, const AlgebraElement& Y,
                            const Params& pr);

} // namespace qgc
