#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qgcurv/algebra.hpp"

using namespace qgc;
using std::numbers::pi;

namespace {

// smooth random-ish field: wall-vanishing nonzero modes plus a free zero mode
Field2D smooth_field(const Grid1D& g, int nmax, unsigned seed) {
  Field2D f(nmax, g, true);
  const ArrayXd s1 = (pi * g.y() / g.L()).sin();
  const ArrayXd s2 = (2.0 * pi * g.y() / g.L()).sin();
  for (int n = 1; n <= nmax; ++n) {
    const double a = std::sin(1.3 * seed + 2.1 * n), b = std::cos(0.7 * seed + n);
    f.mode(n) = (a * s1 + 0.4 * b * s2).cast<cd>() * cd(1.0, 0.3 * b);
  }
  f.mode(0) = (0.5 * std::cos(double(seed)) * g.y().square() +
               std::sin(seed * 0.9) * g.y())
                  .cast<cd>();
  f.enforce_reality();
  return f;
}

double field_dist(const Field2D& a, const Field2D& b) {
  Field2D d = a - b;
  return d.max_abs();
}

} // namespace

TEST_CASE("poisson bracket against the analytic single-mode formula") {
  Grid1D g(257, 1.0);
  Field2D a(2, g, true), b(2, g, true);
  a.mode(1) = (pi * g.y()).sin().cast<cd>() * cd(0.6, 0.2);
  a.enforce_reality();
  b.mode(0) = g.y().pow(3).cast<cd>(); // b = y^3, b_y = 3y^2
  b.enforce_reality();

  // {a,b} = a_x b_y with b x-independent: mode 1 = i a_1 b0'
  Field2D br = poisson_bracket(a, b);
  const ArrayXcd want = cd(0.0, 1.0) * a.mode(1) * (3.0 * g.y().square()).cast<cd>();
  CHECK((br.mode(1) - want).abs().maxCoeff() < 1e-11); // b0' exact: stencils differentiate cubics exactly
  CHECK(br.mode(2).abs().maxCoeff() < 1e-14);
  CHECK(br.mode(0).abs().maxCoeff() < 1e-14);
}

TEST_CASE("poisson bracket is antisymmetric and bilinear") {
  Grid1D g(65, 1.0);
  Field2D a = smooth_field(g, 3, 1), b = smooth_field(g, 3, 2);
  Field2D ab = poisson_bracket(a, b);
  Field2D ba = poisson_bracket(b, a);
  CHECK(field_dist(ab, -1.0 * ba) < 1e-13 * std::max(1.0, ab.max_abs()));

  Field2D sum = poisson_bracket(a + b, b);
  Field2D parts = poisson_bracket(a, b) + poisson_bracket(b, b);
  CHECK(field_dist(sum, parts) < 1e-12 * std::max(1.0, sum.max_abs()));
}

TEST_CASE("jacobi residual shrinks under grid refinement") {
  // containers carry nmax 8 so the nested brackets (content <= 2, sums reach
  // mode 6) are never truncated in x; the residual is then pure y-stencil error
  auto widen = [](const Field2D& s, const Grid1D& g) {
    Field2D f(8, g, true);
    for (int n = 0; n <= s.nmax(); ++n) f.mode(n) = s.mode(n);
    f.enforce_reality();
    return f;
  };
  auto resid = [&](int ny) {
    Grid1D g(ny, 1.0);
    Field2D a = widen(smooth_field(g, 2, 3), g);
    Field2D b = widen(smooth_field(g, 2, 4), g);
    Field2D c = widen(smooth_field(g, 2, 5), g);
    Field2D r = poisson_bracket(a, poisson_bracket(b, c)) +
                poisson_bracket(b, poisson_bracket(c, a)) +
                poisson_bracket(c, poisson_bracket(a, b));
    return r.max_abs();
  };
  const double r1 = resid(65), r2 = resid(129);
  CHECK(r1 / r2 > 3.0);
}

TEST_CASE("laplacian of a separated mode matches the eigenvalue") {
  Grid1D g(129, 1.0);
  Field2D f(2, g, true);
  f.mode(2) = (pi * g.y()).sin().cast<cd>();
  f.enforce_reality();
  Field2D lap = laplacian(f);
  const ArrayXcd want = -(4.0 + pi * pi) * f.mode(2);
  // interior check: wall rows close one-sidedly with a larger constant
  const auto seg = [&](const ArrayXcd& v) { return v.segment(2, g.ny() - 4); };
  CHECK((seg(lap.mode(2)) - seg(want)).abs().maxCoeff() < 1e-5);
}

TEST_CASE("Lambda inversion undoes Lambda exactly on wall-vanishing fields") {
  Grid1D g(65, 1.0);
  Params pr{1.0, 0.7, 0.0};
  Field2D f(3, g, true);
  f.mode(1) = ((pi * g.y()).sin() * 0.8).cast<cd>() * cd(0.5, 0.1);
  f.mode(3) = ((2.0 * pi * g.y()).sin() * 0.2).cast<cd>();
  f.mode(0) = (g.y() * (g.L() - g.y())).cast<cd>();
  f.enforce_reality();
  Field2D back = invert_Lambda(apply_Lambda(f, pr), pr);
  CHECK(field_dist(back, f) < 1e-11 * std::max(1.0, f.max_abs()));
}

TEST_CASE("Lambda inversion solves the continuum problem at fourth order") {
  Params pr{1.0, 2.0, 0.0};
  auto err = [&](int ny) {
    Grid1D g(ny, 1.0);
    Field2D rhs(1, g, true);
    // (alpha2 + n^2 + pi^2) sin(pi y) inverts to sin(pi y) on mode 1;
    // assign the +-1 pair so reality enforcement does not rescale mode 1
    const ArrayXcd v = ((2.0 + 1.0 + pi * pi) * (pi * g.y()).sin()).cast<cd>();
    rhs.mode(1) = v;
    rhs.mode(-1) = v.conjugate();
    rhs.enforce_reality();
    Field2D u = invert_Lambda(rhs, pr);
    return (u.mode(1) - (pi * g.y()).sin().cast<cd>()).abs().maxCoeff();
  };
  const double e1 = err(65), e2 = err(129);
  CHECK(e1 / e2 > 10.0);
}

TEST_CASE("zero-mode inversion at alpha2 = 0 needs a mean-free profile") {
  Grid1D g(65, 1.0);
  Params pr{1.0, 0.0, 0.0};
  Field2D bad(1, g, true);
  bad.mode(0) = ArrayXcd::Constant(g.ny(), cd(1.0, 0.0));
  bad.enforce_reality();
  CHECK_THROWS_AS(invert_Lambda(bad, pr), error);

  Field2D ok(1, g, true);
  ok.mode(0) = (2.0 * pi * g.y()).sin().cast<cd>(); // mean-free over [0,1]
  ok.enforce_reality();
  Field2D u = invert_Lambda(ok, pr);
  // -u'' = f with Dirichlet: u = sin(2 pi y)/(4 pi^2)
  CHECK((u.mode(0) - ok.mode(0) / (4.0 * pi * pi)).abs().maxCoeff() < 1e-4);
}

TEST_CASE("ad is minus the bracket with the cocycle as charge") {
  Grid1D g(65, 1.0);
  AlgebraElement X{smooth_field(g, 2, 6), 0.3};
  AlgebraElement Y{smooth_field(g, 2, 7), -1.1};
  AlgebraElement Z = ad(X, Y);
  Field2D want = -1.0 * poisson_bracket(X.stream, Y.stream);
  CHECK(field_dist(Z.stream, want) == 0.0);
  CHECK(Z.charge == doctest::Approx(-cocycle_b(X.stream, Y.stream)).epsilon(1e-14));
  // central directions are invisible to ad
  CHECK(std::abs(cocycle_b(X.stream, Y.stream) + cocycle_b(Y.stream, X.stream)) < 1e-12);
}

TEST_CASE("coad is metric-adjoint to ad up to discretization order") {
  // the identity integrates by parts in y, so every mode of every element
  // must vanish at the walls; containers carry nmax 4 so single brackets of
  // content <= 2 are never truncated in x
  Params pr{1.0, 1.3, 0.6};
  auto elem = [](const Grid1D& g, unsigned seed, double q) {
    Field2D f(4, g, true);
    const ArrayXd s1 = (pi * g.y() / g.L()).sin();
    const ArrayXd s2 = (2.0 * pi * g.y() / g.L()).sin();
    for (int n = 1; n <= 2; ++n) {
      const double a = std::sin(1.3 * seed + 2.1 * n), b = std::cos(0.7 * seed + n);
      const ArrayXcd v = (a * s1 + 0.4 * b * s2).cast<cd>() * cd(1.0, 0.3 * b);
      f.mode(n) = v;
      f.mode(-n) = v.conjugate();
    }
    f.mode(0) = (std::cos(double(seed)) * g.y() * (g.L() - g.y())).cast<cd>();
    f.enforce_reality();
    return AlgebraElement{std::move(f), q};
  };
  auto resid = [&](int ny) {
    Grid1D g(ny, 1.0);
    AlgebraElement X = elem(g, 8, 0.2);
    AlgebraElement Y = elem(g, 9, -0.4);
    AlgebraElement Z = elem(g, 10, 1.0);
    const double lhs = metric_inner(coad(X, Y, pr), Z, pr);
    const double rhs = metric_inner(Y, ad(X, Z), pr);
    const double scl = std::abs(lhs) + std::abs(rhs) + 1.0;
    return std::abs(lhs - rhs) / scl;
  };
  const double r1 = resid(129), r2 = resid(257);
  CHECK(r1 / r2 > 3.0);
  CHECK(r2 < 1e-6);
}

TEST_CASE("metric of a single sine mode matches the closed form") {
  const double L = 1.0;
  Params pr{L, 0.5, 0.9};
  Grid1D g(129, L);
  Field2D f(1, g, true);
  const ArrayXcd v = (pi * g.y() / L).sin().cast<cd>();
  f.mode(1) = v;
  f.mode(-1) = v.conjugate();
  f.enforce_reality();
  AlgebraElement X{f, 2.0};
  // both n = 1 and n = -1 contribute (alpha2 + 1) L/2 + (pi/L)^2 L/2,
  // times the 2 pi x-measure, plus the plain product of charges
  const double per_mode = (pr.alpha2 + 1.0) * L / 2.0 + (pi / L) * (pi / L) * L / 2.0;
  const double want = 2.0 * pi * 2.0 * per_mode + 2.0 * 2.0;
  CHECK(metric_inner(X, X, pr) == doctest::Approx(want).epsilon(1e-6));

  // symmetry
  AlgebraElement Y{smooth_field(g, 1, 11), -0.7};
  CHECK(metric_inner(X, Y, pr) == doctest::Approx(metric_inner(Y, X, pr)).epsilon(1e-12));
}

TEST_CASE("contact lift reproduces the stream function through the contact form") {
  Grid1D g(65, 1.0);
  Field2D psi = smooth_field(g, 3, 12);
  ContactLift X = contact_lift(psi);
  Field2D theta = contact_pairing(X);
  CHECK(field_dist(theta, psi) < 1e-13 * std::max(1.0, psi.max_abs()));
  // vy is the exact mode-wise x-derivative
  CHECK((X.vy.mode(2) - cd(0.0, 2.0) * psi.mode(2)).abs().maxCoeff() < 1e-14);
}

TEST_CASE("steady residual vanishes for shear and not for x-dependent states") {
  Params pr{1.0, 1.0, 1.5};
  Grid1D g(65, 1.0);
  ShearFlow f = ShearFlow::poly({0.0, 0.1, 0.3, -0.2});
  CHECK(steady_residual(f, pr, g, 4) < 1e-12);

  Field2D wavy(2, g, true);
  wavy.mode(1) = (pi * g.y()).sin().cast<cd>();
  wavy.enforce_reality();
  CHECK(steady_residual(wavy, pr) > 1e-2);
}
