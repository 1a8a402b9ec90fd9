#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "qgcurv/criterion.hpp"
#include "qgcurv/curvature.hpp"

using namespace qgc;
using std::numbers::pi;

namespace {

ArrayXcd sine_profile(const Grid1D& g, int k, cd amp = cd(1.0, 0.0)) {
  return (double(k) * pi * g.y() / g.L()).sin().cast<cd>() * amp;
}

// q = 0, p = 1: psi = ((1 + beta)/alpha2) y
ShearFlow unit_p_flow(const Params& pr) {
  return ShearFlow::poly({0.0, (1.0 + pr.beta) / pr.alpha2});
}

} // namespace

TEST_CASE("ratio profile of the constant-p flow matches sinh quotients") {
  Params pr{1.0, 1.0, 0.0};
  ShearFlow f = unit_p_flow(pr);
  Grid1D g(257, 1.0);
  const int n = 1;
  RatioProfile rp = ratio_R(f, pr, g, n);
  const double lam = rp.lambda;
  CHECK(rp.eta_zeros.empty());
  for (int i = 8; i < g.ny(); i += 16) {
    const double y = g.y()(i);
    const double want = std::sinh(lam * (g.L() - y)) / std::sinh(lam * y);
    CHECK(rp.R(i) == doctest::Approx(want).epsilon(1e-10));
  }
  // R falls monotonically away from the benign y = 0 pole: the decrease test fails
  CHECK(rp.dR.segment(1, g.ny() - 2).maxCoeff() < 0.0);
  TheoremCheck tc = check_theorem(f, pr, g, n);
  CHECK(tc.verdict == Verdict::fails);
}

TEST_CASE("critical family: constant ratio, boundary verdict, flipped substitution") {
  Params pr{1.0, 1.0, 0.0};
  CriticalFamily cf;
  cf.y0 = -0.25;
  ShearFlow f = critical_family(cf, pr);
  Grid1D g(513, 1.0);

  RatioProfile rp = ratio_R(f, pr, g, 1);
  const double lam = rp.lambda;
  const double want = -std::cosh(lam * (g.L() - cf.y0)) / std::cosh(lam * cf.y0);
  double dev = 0.0;
  for (int i = 0; i < g.ny(); ++i)
    dev = std::max(dev, std::abs(rp.R(i) - want) / std::abs(want));
  CHECK(dev < 1e-8);

  TheoremCheck tc = check_theorem(f, pr, g, 1);
  CHECK(tc.verdict == Verdict::holds);
  CHECK(tc.boundary_case);
  CHECK(std::abs(tc.min_dR) < 1e-7);

  ZCheck zc = z_substitution_check(f, pr, g);
  CHECK(zc.direction_flipped);
  CHECK(zc.holds);
  CHECK(zc.boundary_case);
  CHECK(zc.z_residual.abs().maxCoeff() < 1e-7 * zc.z.abs().maxCoeff());
  // closed-form boundary value: lam^2 z0^2 cosh(lam(L - y0)) cosh(lam y0) > 0
  const double bc = lam * lam * std::cosh(lam * (g.L() - cf.y0)) * std::cosh(lam * cf.y0) /
                    std::cosh(lam * g.L());
  CHECK(zc.bc_value == doctest::Approx(bc).epsilon(1e-6));

  IneqReport ir = ineq_per_n(f, pr, g, 1);
  CHECK(std::abs(ir.margin_de) <= 1e-7);
  CHECK(ir.margin_bc > 0.0);
}

TEST_CASE("flat-q substitution: constant p gives Z = 1 and a failed direction test") {
  Params pr{1.0, 2.0, 0.3};
  ShearFlow f = unit_p_flow(pr);
  Grid1D g(129, 1.0);
  ZCheck zc = z_substitution_check(f, pr, g);
  CHECK((zc.z - 1.0).abs().maxCoeff() < 1e-12);
  // Z'' - lam^2 Z = -lam^2 < 0 everywhere: the flipped inequality fails
  CHECK_FALSE(zc.holds);
}

TEST_CASE("green route equals the bilinear kernel over lambda sinh(lambda L)") {
  Params pr{1.0, 1.0, 0.5};
  ShearFlow f = ShearFlow::poly({0.0, 0.3, -0.4, 0.25});
  Grid1D g(257, 1.0);
  const int n = 2;
  const ArrayXcd gp = sine_profile(g, 1, cd(0.7, 0.4));
  EtaXi ex = eta_xi(f, pr, g, n);
  const double kg = kn_green(f, pr, g, n, gp);
  const double B = bilinear_B(ex, gp);
  CHECK(kg == doctest::Approx(B / (ex.lambda * std::sinh(ex.lambda * g.L()))).epsilon(1e-13));
}

TEST_CASE("telescoped identity residual shrinks at second order") {
  Params pr{1.0, 1.0, 0.0};
  CriticalFamily cf;
  cf.y0 = -0.4;
  ShearFlow f = critical_family(cf, pr);
  auto resid = [&](int ny) {
    Grid1D g(ny, 1.0);
    const ArrayXcd gp = sine_profile(g, 1, cd(0.8, 0.3));
    IdentityCheck ic = bilinear_identity_check(f, pr, g, 2, gp);
    REQUIRE_FALSE(ic.skipped);
    return ic.residual / std::max(std::abs(ic.quad_form), 1e-300);
  };
  const double r1 = resid(257), r2 = resid(513);
  CHECK(r1 / r2 > 3.0);
  CHECK(r2 < 1e-5);
}

TEST_CASE("identity check reports zero-crossing kernels as skipped") {
  Params pr{1.0, 1.0, 0.0};
  ShearFlow f = ShearFlow::poly({-0.125, 1.75, -1.5, 1.0}); // q crosses zero
  Grid1D g(129, 1.0);
  IdentityCheck ic = bilinear_identity_check(f, pr, g, 1, sine_profile(g, 1));
  CHECK(ic.skipped);
}

TEST_CASE("spectral oracle matches a dense eigensolve on both verdict sides") {
  Grid1D g(129, 1.0);
  struct Case {
    ShearFlow f;
    Params pr;
  };
  Case holds{ShearFlow::poly({0.0, 0.0, 0.5}), Params{1.0, 0.25, 1.0}};
  Case fails{ShearFlow::poly({0.0, 1.0}), Params{1.0, 1.0, 0.0}};

  for (const Case& c : {holds, fails}) {
    for (int n : {1, 2}) {
      EtaXi ex = eta_xi(c.f, c.pr, g, n);
      const EigReport er = definiteness_eig(ex);
      CHECK(er.converged);

      // dense reference on the same weighted kernel matrix
      const ArrayXd sw = g.simpson_weights().sqrt();
      Eigen::MatrixXd M(g.ny(), g.ny());
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i <= j; ++i) {
          const double s =
              std::exp(-ex.lambda * (g.y()(j) - g.y()(i))) * ex.xi_t(j) * ex.eta_t(i);
          M(i, j) = sw(i) * sw(j) * s;
          M(j, i) = M(i, j);
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
      const double dense = es.eigenvalues()(g.ny() - 1);
      CHECK(std::abs(er.lambda_max - dense) <= 1e-7 * er.scale);
      const bool oracle_fails = er.lambda_max > 1e-8 * er.scale;
      const bool dense_fails = dense > 1e-8 * er.scale;
      CHECK(oracle_fails == dense_fails);
      if (oracle_fails) {
        REQUIRE(er.witness.size() == g.ny());
        CHECK(bilinear_B(ex, er.witness.cast<cd>()) > 0.0);
      }
    }
  }
}

TEST_CASE("per-mode inequality margins on the unit shear") {
  // psi = y, alpha2 = 1, beta = 0: p = 1, p' = p'' = 0
  Params pr{1.0, 1.0, 0.0};
  ShearFlow f = ShearFlow::poly({0.0, 1.0});
  Grid1D g(65, 1.0);
  IneqReport ir = ineq_per_n(f, pr, g, 2);
  CHECK(ir.n == 2);
  // interior form alpha^4 p^2 + 2 alpha^2 p p'' - (6 alpha^2 + 4 n^2) p'^2 = 1
  CHECK(ir.margin_de == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(ir.holds);
  // wall form alpha^2 p(L) p'(L) + 2 lam coth(lam L) p'(L)^2 = 0: borderline
  CHECK(std::abs(ir.margin_bc) < 1e-12);

  CHECK_THROWS_AS(ineq_per_n(f, Params{1.0, 0.0, 0.0}, g, 1), error);
  CHECK_THROWS_AS(ineq_per_n(f, pr, g, 0), error);
}

TEST_CASE("corollary check routes by alpha2") {
  Grid1D g(129, 1.0);
  ShearFlow f = ShearFlow::poly({0.0, 0.4, -0.7, 0.2});

  CorollaryReport a0 = corollary_check(f, Params{1.0, 0.0, 1.3}, g);
  CHECK(a0.verdict == Verdict::holds);
  CHECK(a0.degenerate_alpha0);

  CorollaryReport a1 = corollary_check(ShearFlow::poly({0.0, 1.0}), Params{1.0, 1.0, 0.0}, g);
  CHECK(a1.verdict == Verdict::fails);
  CHECK_FALSE(a1.degenerate_alpha0);
}

TEST_CASE("witness search finds a positive direction exactly when one exists") {
  Grid1D g(129, 1.0);
  // p constant, q = 0: kernel is positive semidefinite with positive part
  Params pr{1.0, 1.0, 0.0};
  EtaXi bad = eta_xi(ShearFlow::poly({0.0, 1.0}), pr, g, 1);
  auto w = positivity_witness_search(bad);
  REQUIRE(w.has_value());
  CHECK(bilinear_B(bad, w->cast<cd>()) > 0.0);

  CriticalFamily cf;
  cf.y0 = -0.25;
  EtaXi good = eta_xi(critical_family(cf, pr), pr, g, 2);
  CHECK_FALSE(positivity_witness_search(good).has_value());
}
