#pragma once

#include <vector>

#include "qgcurv/grid.hpp"

namespace qgc {

// Function on the cylinder S^1 x [0,L] stored as truncated Fourier
// coefficients in x times complex profiles sampled on a Grid1D in y:
//   f(x,y) = sum_{|n| <= nmax} f_n(y) e^{inx}.
// With the reality flag set, mode(-n) = conj(mode(n)) is maintained by
// enforce_reality(); nonzero modes of stream functions vanish at the walls.
class Field2D {
public:
  Field2D(int nmax, Grid1D grid, bool real_valued = true);

  int nmax() const { return nmax_; }
  const Grid1D& grid() const { return grid_; }
  bool is_real() const { return real_; }
  void set_real(bool r) { real_ = r; }

  ArrayXcd& mode(int n) { return modes_[size_t(n + nmax_)]; }
  const ArrayXcd& mode(int n) const { return modes_[size_t(n + nmax_)]; }

  // project onto the conjugate-symmetric part
  void enforce_reality();
  double max_abs() const;
  bool mode_is_zero(int n) const { return modes_[size_t(n + nmax_)].abs().maxCoeff() == 0.0; }

  Field2D& operator+=(const Field2D& o);
  Field2D& operator-=(const Field2D& o);
  Field2D& operator*=(double c);

private:
  int nmax_;
  Grid1D grid_;
  bool real_;
  std::vector<ArrayXcd> modes_;
};

Field2D operator+(Field2D a, const Field2D& b);
Field2D operator-(Field2D a, const Field2D& b);
Field2D operator*(double c, Field2D a);

void require_same_layout(const Field2D& a, const Field2D& b);

// Real part of the field at nx equispaced x stations; column j is the
// y-profile at x = 2 pi j / nx.
Eigen::ArrayXXd physical_samples(const Field2D& f, int nx);

// Pointwise sup estimate of a real field over the cylinder, sampled at
// enough x stations to resolve the truncation.
double sup_physical(const Field2D& f);

// Tangent vector of the centrally extended algebra: a stream function on the
// cylinder plus the real central component.
struct AlgebraElement {
  Field2D stream;
  double charge = 0.0;
};

inline AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
  a.stream += b.stream;
  a.charge += b.charge;
  return a;
}
inline AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
  a.stream -= b.stream;
  a.charge -= b.charge;
  return a;
}
inline AlgebraElement operator*(double c, AlgebraElement a) {
  a.stream *= c;
  a.charge *= c;
  return a;
}

} // namespace qgc
