#include "qgcurv/field.hpp"

#include <cmath>
#include <numbers>

namespace qgc {

Field2D::Field2D(int nmax, Grid1D grid, bool real_valued)
    : nmax_(nmax), grid_(std::move(grid)), real_(real_valued) {
  if (nmax < 0) throw error(errc::config, "Field2D: nmax must be >= 0");
  modes_.assign(size_t(2 * nmax_ + 1), ArrayXcd::Zero(grid_.ny()));
}

void Field2D::enforce_reality() {
  mode(0).imag() = ArrayXd::Zero(grid_.ny());
  for (int n = 1; n <= nmax_; ++n) {
    ArrayXcd sym = 0.5 * (mode(n) + mode(-n).conjugate());
    mode(n) = sym;
    mode(-n) = sym.conjugate();
  }
  real_ = true;
}

double Field2D::max_abs() const {
  double m = 0.0;
  for (const auto& p : modes_) m = std::max(m, p.abs().maxCoeff());
  return m;
}

Field2D& Field2D::operator+=(const Field2D& o) {
  require_same_layout(*this, o);
  for (int n = -nmax_; n <= nmax_; ++n) mode(n) += o.mode(n);
  real_ = real_ && o.real_;
  return *this;
}

Field2D& Field2D::operator-=(const Field2D& o) {
  require_same_layout(*this, o);
  for (int n = -nmax_; n <= nmax_; ++n) mode(n) -= o.mode(n);
  real_ = real_ && o.real_;
  return *this;
}

Field2D& Field2D::operator*=(double c) {
  for (auto& p : modes_) p *= c;
  return *this;
}

Field2D operator+(Field2D a, const Field2D& b) { a += b; return a; }
Field2D operator-(Field2D a, const Field2D& b) { a -= b; return a; }
Field2D operator*(double c, Field2D a) { a *= c; return a; }

void require_same_layout(const Field2D& a, const Field2D& b) {
  if (a.nmax() != b.nmax())
    throw error(errc::grid_mismatch, "Field2D: truncations differ");
  require_same(a.grid(), b.grid());
}

Eigen::ArrayXXd physical_samples(const Field2D& f, int nx) {
  if (nx < 1) throw error(errc::config, "physical_samples: nx must be >= 1");
  const int ny = f.grid().ny();
  Eigen::ArrayXXd out(ny, nx);
  for (int jx = 0; jx < nx; ++jx) {
    const double x = 2.0 * std::numbers::pi * double(jx) / double(nx);
    ArrayXcd acc = f.mode(0);
    for (int n = 1; n <= f.nmax(); ++n) {
      const cd ep(std::cos(n * x), std::sin(n * x));
      if (!f.mode_is_zero(n)) acc += f.mode(n) * ep;
      if (!f.mode_is_zero(-n)) acc += f.mode(-n) * std::conj(ep);
    }
    out.col(jx) = acc.real();
  }
  return out;
}

double sup_physical(const Field2D& f) {
  const int nx = std::max(64, 4 * f.nmax() + 1);
  return physical_samples(f, nx).abs().maxCoeff();
}

} // namespace qgc
