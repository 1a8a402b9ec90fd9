#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qgcurv/field.hpp"

using namespace qgc;
using std::numbers::pi;

namespace {

Field2D two_mode_field(const Grid1D& g) {
  Field2D f(2, g, true);
  f.mode(0) = g.y().square().cast<cd>();
  f.mode(1) = ((pi * g.y() / g.L()).sin() * 0.5).cast<cd>() * cd(1.0, -0.3);
  f.mode(2) = ((2.0 * pi * g.y() / g.L()).sin() * 0.1).cast<cd>() * cd(0.2, 0.7);
  f.enforce_reality();
  return f;
}

} // namespace

TEST_CASE("reality projection pins mode(-n) to the conjugate") {
  Grid1D g(33, 1.0);
  Field2D f = two_mode_field(g);
  CHECK((f.mode(-1) - f.mode(1).conjugate()).abs().maxCoeff() == 0.0);
  CHECK((f.mode(-2) - f.mode(2).conjugate()).abs().maxCoeff() == 0.0);
  CHECK(f.mode(0).imag().abs().maxCoeff() == 0.0);
}

TEST_CASE("field arithmetic is mode-wise and layout-checked") {
  Grid1D g(33, 1.0);
  Field2D a = two_mode_field(g), b = two_mode_field(g);
  Field2D c = a + b;
  CHECK((c.mode(1) - 2.0 * a.mode(1)).abs().maxCoeff() < 1e-15);
  c -= a;
  c *= 3.0;
  CHECK((c.mode(2) - 3.0 * a.mode(2)).abs().maxCoeff() < 1e-15);

  Field2D other(1, g, true);
  CHECK_THROWS_AS(require_same_layout(a, other), error);
  Grid1D g2(65, 1.0);
  Field2D wrong_grid(2, g2, true);
  CHECK_THROWS_AS(require_same_layout(a, wrong_grid), error);
}

TEST_CASE("physical samples reproduce the analytic mode sum") {
  Grid1D g(33, 1.0);
  Field2D f = two_mode_field(g);
  const int nx = 16;
  const Eigen::ArrayXXd smp = physical_samples(f, nx);
  REQUIRE(smp.rows() == g.ny());
  REQUIRE(smp.cols() == nx);
  for (int j = 0; j < nx; ++j) {
    const double x = 2.0 * pi * j / nx;
    for (int i = 0; i < g.ny(); i += 7) {
      cd v = f.mode(0)(i);
      for (int n = 1; n <= 2; ++n)
        v += f.mode(n)(i) * std::exp(cd(0.0, n * x)) +
             f.mode(-n)(i) * std::exp(cd(0.0, -n * x));
      CHECK(smp(i, j) == doctest::Approx(v.real()).epsilon(1e-13));
      CHECK(std::abs(v.imag()) < 1e-13); // reality held
    }
  }
}

TEST_CASE("sup estimate dominates every sampled value and is tight for band-limited data") {
  Grid1D g(33, 1.0);
  Field2D f = two_mode_field(g);
  const double sup = sup_physical(f);
  const Eigen::ArrayXXd smp = physical_samples(f, 64);
  CHECK(sup >= smp.abs().maxCoeff() - 1e-12);
  CHECK(sup <= smp.abs().maxCoeff() * 1.01 + 1e-12);
  CHECK(f.max_abs() >= f.mode(1).abs().maxCoeff());
}

TEST_CASE("algebra elements carry the charge through arithmetic") {
  Grid1D g(33, 1.0);
  AlgebraElement X{two_mode_field(g), 2.0};
  AlgebraElement Y{two_mode_field(g), -0.5};
  AlgebraElement Z = X + Y;
  CHECK(Z.charge == doctest::Approx(1.5).epsilon(1e-15));
  Z = Z - Y;
  CHECK(Z.charge == doctest::Approx(2.0).epsilon(1e-15));
  Z = 3.0 * Z;
  CHECK(Z.charge == doctest::Approx(6.0).epsilon(1e-15));
  CHECK((Z.stream.mode(1) - 3.0 * X.stream.mode(1)).abs().maxCoeff() < 1e-14);
}
