#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qgcurv/curvature.hpp"

using namespace qgc;
using std::numbers::pi;

namespace {

ArrayXcd sine_profile(const Grid1D& g, int k, cd amp = cd(1.0, 0.0)) {
  return (double(k) * pi * g.y() / g.L()).sin().cast<cd>() * amp;
}

} // namespace

TEST_CASE("eta and xi carry their boundary values and closed forms") {
  Params pr{1.0, 1.5, 0.4};
  Grid1D g(129, 1.0);
  ShearFlow f = ShearFlow::poly({0.2, 0.7, -0.3, 0.15});
  const int n = 2;
  EtaXi ex = eta_xi(f, pr, g, n);
  const double lam = lambda_of(pr, n);
  CHECK(ex.lambda == doctest::Approx(lam).epsilon(1e-15));

  const ArrayXd p = p_profile(f, pr, g);
  const ArrayXd q = q_profile(f, g);
  const ArrayXd E = (-2.0 * lam * g.y()).exp();
  const ArrayXd F = (-2.0 * lam * (g.L() - g.y())).exp();
  CHECK((ex.eta_t - (p * (1.0 - E) / 4.0 + lam * q * (1.0 + E) / 2.0)).abs().maxCoeff() < 1e-13);
  CHECK((ex.xi_t - (p * (1.0 - F) / 4.0 - lam * q * (1.0 + F) / 2.0)).abs().maxCoeff() < 1e-13);

  // endpoint collapses: eta(0) = lam q(0), xi(L) = -lam q(L)
  CHECK(ex.eta_t(0) == doctest::Approx(lam * q(0)).epsilon(1e-13));
  CHECK(ex.xi_t(g.ny() - 1) == doctest::Approx(-lam * q(g.ny() - 1)).epsilon(1e-13));
}

TEST_CASE("phi solves the forced problem: eigenfunction case") {
  // q = 0, p = 1 via psi' = (1 + beta)/alpha2: rhs reduces to p g = g
  const double a2 = 2.0, beta = 0.5;
  ShearFlow f = ShearFlow::poly({0.0, (1.0 + beta) / a2});
  Params pr{1.0, a2, beta};
  const int n = 1;
  const double lam2 = a2 + 1.0;

  auto err = [&](int ny, PhiBackend bk) {
    Grid1D g(ny, 1.0);
    const ArrayXcd gp = sine_profile(g, 1);
    const ArrayXcd phi = compute_phi(f, pr, g, n, gp, bk);
    const ArrayXcd want = gp / (lam2 + pi * pi);
    return (phi - want).abs().maxCoeff();
  };
  CHECK(err(257, PhiBackend::fd) < 1e-7);
  CHECK(err(257, PhiBackend::green) < 1e-7);
  CHECK(err(65, PhiBackend::fd) / err(129, PhiBackend::fd) > 3.4);
}

TEST_CASE("phi backends agree under refinement on a generic flow") {
  Params pr{1.0, 0.8, 0.2};
  ShearFlow f = ShearFlow::poly({0.0, 0.4, 0.3, -0.2});
  auto gap = [&](int ny) {
    Grid1D g(ny, 1.0);
    const ArrayXcd gp = sine_profile(g, 1, cd(0.7, 0.4)) + sine_profile(g, 2, cd(-0.1, 0.2));
    const ArrayXcd a = compute_phi(f, pr, g, 2, gp, PhiBackend::fd);
    const ArrayXcd b = compute_phi(f, pr, g, 2, gp, PhiBackend::green);
    return (a - b).abs().maxCoeff();
  };
  CHECK(gap(65) / gap(129) > 8.0);
}

TEST_CASE("curvature contributions are phase-invariant, quadratic, and even in n") {
  Params pr{1.0, 1.0, 0.3};
  ShearFlow f = ShearFlow::poly({0.0, 0.5, -0.25, 0.4});
  Grid1D g(129, 1.0);
  const ArrayXcd gp = sine_profile(g, 1, cd(0.6, -0.2));
  const int n = 2;

  const double base = kn_integral(f, pr, g, n, gp);
  CHECK(kn_integral(f, pr, g, n, ArrayXcd(gp * std::exp(cd(0.0, 1.1)))) ==
        doctest::Approx(base).epsilon(1e-12));
  CHECK(kn_integral(f, pr, g, n, ArrayXcd(2.5 * gp)) ==
        doctest::Approx(6.25 * base).epsilon(1e-12));
  CHECK(kn_integral(f, pr, g, -n, gp) == doctest::Approx(base).epsilon(1e-12));
  CHECK(kn_green(f, pr, g, -n, gp) == doctest::Approx(kn_green(f, pr, g, n, gp)).epsilon(1e-12));

  CHECK(kn_integral(f, pr, g, n, ArrayXcd(ArrayXcd::Zero(g.ny()))) == 0.0);
}

TEST_CASE("the three curvature routes agree within cross-check tolerance") {
  Params pr{1.0, 0.25, 1.0};
  ShearFlow f = ShearFlow::poly({0.0, 0.3, 0.2, -0.35, 0.1});
  Grid1D g(513, 1.0);
  for (int n : {1, 3}) {
    const ArrayXcd gp = sine_profile(g, 1, cd(0.8, 0.1)) + sine_profile(g, 3, cd(0.0, -0.3));
    const double ki = kn_integral(f, pr, g, n, gp);
    const double kg = kn_green(f, pr, g, n, gp);
    const double ka = kn_arnold(f, pr, g, n, gp);
    const double scl = std::max({std::abs(ki), std::abs(kg), std::abs(ka)});
    CHECK(std::abs(ki - kg) <= 1e-4 * scl);
    CHECK(std::abs(ki - ka) <= 1e-4 * scl);
  }
}

TEST_CASE("flat shear makes every mode contribution vanish") {
  // p = 0 and q = 0: psi' = beta/alpha2
  Params pr{1.0, 2.0, 0.8};
  ShearFlow f = ShearFlow::poly({0.0, pr.beta / pr.alpha2});
  Grid1D g(129, 1.0);
  const ArrayXcd gp = sine_profile(g, 1);
  CHECK(std::abs(kn_integral(f, pr, g, 1, gp)) < 1e-14);
  CHECK(std::abs(kn_green(f, pr, g, 1, gp)) < 1e-14);
  CHECK(std::abs(kn_arnold(f, pr, g, 1, gp)) < 1e-10);
}

TEST_CASE("linear shear generates an isometry family: D(X,.) = 0") {
  Params pr{1.0, 1.5, 0.7};
  ShearFlow f = ShearFlow::poly({0.1, 0.6}); // psi'' = 0, p nonzero constant
  Grid1D g(65, 1.0);
  AlgebraElement X = shear_element(f, pr, g, 3);

  Perturbation pert;
  pert.modes = {{1, sine_profile(g, 1, cd(0.5, 0.2))}, {3, sine_profile(g, 2)}};
  pert.charge = 0.4;
  AlgebraElement Y = perturbation_element(pert, g, 3);

  AlgebraElement D = deformation_D(X, Y, pr);
  const double scl = std::max(1.0, metric_inner(Y, Y, pr));
  CHECK(metric_inner(D, D, pr) < 1e-16 * scl);

  // and the sectional curvature against such Y is nonnegative
  CHECK(curvature_arnold(X, Y, pr) >= -1e-10 * scl);
}

TEST_CASE("arnold and rearranged two-term forms agree") {
  Params pr{1.0, 0.7, 0.5};
  Grid1D g(257, 1.0);
  ShearFlow f = ShearFlow::poly({0.0, 0.25, 0.3, -0.1});
  AlgebraElement X = shear_element(f, pr, g, 4);
  Perturbation pert;
  pert.modes = {{2, sine_profile(g, 1, cd(0.4, 0.6))}};
  AlgebraElement Y = perturbation_element(pert, g, 4);
  const double a = curvature_arnold(X, Y, pr);
  const double b = curvature_two_term(X, Y, pr);
  CHECK(a == doctest::Approx(b).epsilon(1e-4));
}

TEST_CASE("normalized sectional curvature rejects collinear planes") {
  Params pr{1.0, 1.0, 0.0};
  Grid1D g(33, 1.0);
  Field2D f(2, g, true);
  f.mode(1) = sine_profile(g, 1);
  f.enforce_reality();
  AlgebraElement X{f, 0.0};
  AlgebraElement Y = 2.0 * X;
  CHECK_THROWS_AS(normalized_sectional(X, Y, pr), error);
  AlgebraElement Z{f, 1.0}; // same stream, independent charge direction
  CHECK_NOTHROW(normalized_sectional(X, Z, pr));
}

TEST_CASE("per-mode report weights contributions by 2 n^2") {
  Params pr{1.0, 0.5, 0.0};
  ShearFlow f = ShearFlow::poly({0.0, 0.0, 0.5});
  Grid1D g(129, 1.0);
  Perturbation pert;
  pert.modes = {{1, sine_profile(g, 1)}, {2, sine_profile(g, 1, cd(0.3, 0.3))}};
  CurvatureReport rep = total_curvature(f, pr, g, pert);
  REQUIRE(rep.rows.size() == 2);
  double acc = 0.0;
  for (const auto& r : rep.rows) {
    CHECK(r.err_est <= 1e-6 * std::max(1.0, std::abs(r.k_integral)));
    acc += 2.0 * double(r.n) * double(r.n) * r.k_integral;
  }
  CHECK(rep.total == doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("perturbation elements validate wall values and mode range") {
  Grid1D g(33, 1.0);
  Perturbation bad;
  bad.modes = {{1, ArrayXcd::Ones(g.ny())}}; // nonzero at the walls
  CHECK_THROWS_AS(validate_perturbation(bad, g), error);
  Perturbation ok;
  ok.modes = {{1, sine_profile(g, 1)}};
  CHECK_NOTHROW(validate_perturbation(ok, g));
  AlgebraElement Y = perturbation_element(ok, g, 4);
  CHECK(Y.stream.mode(1).abs().maxCoeff() > 0.0);
  CHECK(Y.stream.mode(2).abs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(perturbation_element(ok, g, 0), error);
}
