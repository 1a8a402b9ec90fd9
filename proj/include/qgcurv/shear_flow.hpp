#pragma once

#include <vector>

#include "qgcurv/field.hpp"
#include "qgcurv/grid.hpp"
#include "qgcurv/params.hpp"

namespace qgc {

// Steady shear stream function psi(y) with analytic derivatives per family.
// p(y) = alpha2 psi'(y) - beta and q(y) = psi''(y) derive from it for any
// Params; the criterion inequalities need p'' and hence psi''' as well.
class ShearFlow {
public:
  enum class family { poly, critsinh, spline };

  // psi = sum_i c_i y^i
  static ShearFlow poly(std::vector<double> coeffs);

  // |p| = Z^{-alpha2/(2 lambda^2)} with Z = z0 sinh(lambda (y - y0)) and
  // lambda^2 = alpha2 + 1; psi' = (sign_p |p| + beta)/alpha2.  Z must be
  // positive on [0,L] (so y0 outside [0,L] with matching z0 sign) and
  // alpha2 > 0.  psi itself comes from cumulative Simpson on a fine grid.
  static ShearFlow critical_sinh(double alpha2, double y0, double z0, int sign_p,
                                 double beta, double L);

  // natural cubic spline through (y, psi) samples; third derivative is
  // piecewise constant, and meromorphy-based criterion verdicts get flagged.
  static ShearFlow from_samples(const ArrayXd& y, const ArrayXd& psi);

  family fam() const { return fam_; }
  bool analytic() const { return fam_ != family::spline; }

  // k-th derivative of psi at y, k = 0..3
  double eval(double y, int k) const;
  ArrayXd eval(const Grid1D& g, int k) const;

  // critsinh construction parameters (throws for other families)
  double cs_alpha2() const;
  double cs_beta() const;

private:
  ShearFlow() = default;
  double eval_poly(double y, int k) const;
  double eval_critsinh(double y, int k) const;
  double eval_spline(double y, int k) const;

  family fam_ = family::poly;
  std::vector<double> c_; // poly coefficients

  // critsinh
  double cs_alpha2_ = 0, cs_y0_ = 0, cs_z0_ = 0, cs_beta_ = 0, cs_L_ = 0;
  int cs_sign_ = 1;
  ArrayXd cs_psi_; // fine-grid cumulative integral of psi'
  double cs_h_ = 0;

  // spline: on [y_i, y_{i+1}], s = a + b t + c t^2 + d t^3, t = y - y_i
  ArrayXd sp_y_, sp_a_, sp_b_, sp_c_, sp_d_;
};

inline double p_at(const ShearFlow& f, const Params& pr, double y) {
  return pr.alpha2 * f.eval(y, 1) - pr.beta;
}
inline double dp_at(const ShearFlow& f, const Params& pr, double y) {
  return pr.alpha2 * f.eval(y, 2);
}
inline double d2p_at(const ShearFlow& f, const Params& pr, double y) {
  return pr.alpha2 * f.eval(y, 3);
}
inline double q_at(const ShearFlow& f, double y) { return f.eval(y, 2); }
inline double dq_at(const ShearFlow& f, double y) { return f.eval(y, 3); }

ArrayXd p_profile(const ShearFlow& f, const Params& pr, const Grid1D& g);
ArrayXd q_profile(const ShearFlow& f, const Grid1D& g);

// Algebra element of a shear flow: stream = psi(y) as the zero mode and
// charge = -beta.  With this pairing the coadjoint pipeline reproduces the
// combination p = alpha2 psi' - beta and the geodesic equation carries the
// Rossby term with its textbook sign.
AlgebraElement shear_element(const ShearFlow& f, const Params& pr, const Grid1D& g,
                             int nmax);

} // namespace qgc
