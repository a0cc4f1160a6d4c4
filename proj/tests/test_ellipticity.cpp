#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgcalc/ellipticity.hpp"
#include "sgcalc/errors.hpp"

using namespace sgcalc;

namespace {

const cplx I(0.0, 1.0);

Expr laplace_plus_one(int n) {
  Expr s(1.0);
  for (int i = 0; i < n; ++i) s = s + pow(Expr::xi(i), 2);
  return s;
}

BVProblem dirichlet(int n, const Expr& symbol, SGOrder order) {
  BVProblem p;
  p.name = "dirichlet";
  p.P = DiffSymbol::from_expr(symbol, n, order);
  BoundaryRow row;
  row.m1j = 0;
  row.m2j = 0.0;
  row.B = {Expr(1.0), Expr(0.0)};
  p.rows.push_back(row);
  return p;
}

RadialGridSpec small_grid() {
  RadialGridSpec g;
  g.radii = 6;
  g.rays = 8;
  return g;
}

}  // namespace

TEST(SgElliptic, BracketProductMarginIsOne) {
  const Expr a = Expr::bracket(BracketGroup::X, 1, 2.0) * Expr::bracket(BracketGroup::Xi, 1, 2.0);
  const auto r = sg_elliptic_check(DiffSymbol::from_expr(a, 1, {2, 2}), 1.0, {});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 1.0, 1e-14);
}

TEST(SgElliptic, ShiftedLaplacianMarginIsOne) {
  const auto r = sg_elliptic_check(DiffSymbol::from_expr(laplace_plus_one(1), 1, {2, 0}), 1.0, {});
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.margin, 1.0, 1e-14);
}

TEST(SgElliptic, MisdeclaredOrderFails) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const auto r = sg_elliptic_check(DiffSymbol::from_expr(1.0 + x * x + k * k, 1, {2, 2}), 1.0, {});
  EXPECT_FALSE(r.pass);
  // Along x = xi = t the ratio is (1 + 2t^2)/(1 + t^2)^2 ~ 2/t^2.
  EXPECT_LT(r.outer_slope, -1.5);
  const double t = 1e3 / std::sqrt(2.0);
  EXPECT_NEAR(r.margin, (1 + 2 * t * t) / ((1 + t * t) * (1 + t * t)), 1e-9);
}

TEST(RootBound, ShiftedLaplacian) {
  const DiffSymbol a = DiffSymbol::from_expr(laplace_plus_one(2), 2, {2, 0});
  // <xi'> = 5 needs |xi'|^2 = 24.
  const std::vector<double> xi_t{std::sqrt(24.0)};
  EXPECT_NEAR(root_bound(a, {0.0, 0.0}, xi_t), std::sqrt(50.0), 1e-12);
  const auto roots = poly_roots(normal_polynomial(a, {0.0, 0.0}, xi_t));
  for (const cplx& z : roots) EXPECT_NEAR(std::abs(z), 5.0, 1e-12);
}

TEST(RootBound, DoubleRootAtZero) {
  const DiffSymbol a = DiffSymbol::from_expr(pow(Expr::xi(0), 2), 1, {2, 0});
  EXPECT_EQ(root_bound(a, {0.0}, {}), 0.0);
  for (const cplx& z : poly_roots(normal_polynomial(a, {0.0}, {}))) EXPECT_EQ(z, 0.0);
}

TEST(RootBound, DominatesCompanionRoots) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int t = 0; t < 300; ++t) {
    const int deg = 1 + t % 6;
    Poly p;
    for (int k = 0; k < deg; ++k) p.push_back(cplx(g(rng), g(rng)) * std::pow(10.0, g(rng)));
    p.push_back(1.0);
    const double R = poly_root_bound(p);
    for (const cplx& z : poly_roots(p)) EXPECT_LE(std::abs(z), R);
  }
}

TEST(RootBound, LeadingCoefficientVanishes) {
  const DiffSymbol a = DiffSymbol::from_expr(Expr::x(0) * pow(Expr::xi(0), 2) + 1.0, 1, {2, 1});
  try {
    root_bound(a, {0.0}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LeadingCoeffVanishes);
  }
}

TEST(Roots, NormalizedShiftedLaplacian) {
  const DiffSymbol a = DiffSymbol::from_expr(laplace_plus_one(2), 2, {2, 0});
  for (double xi : {0.0, 1.0, -7.5, 300.0}) {
    const RootProfile prof = roots_in_normal(a, {2.0}, {xi});
    ASSERT_EQ(prof.upper.size(), 1u);
    EXPECT_NEAR(std::abs(prof.upper[0] - I), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(prof.a_plus[0] + I), 0.0, 1e-12);
  }
}

TEST(Roots, WeightsNormalizeAway) {
  const Expr a = Expr::bracket(BracketGroup::X, 2, 2.0) * Expr::bracket(BracketGroup::Xi, 2, 2.0);
  const RootProfile prof = roots_in_normal(DiffSymbol::from_expr(a, 2, {2, 2}), {3.0}, {-4.0});
  ASSERT_EQ(prof.roots.size(), 2u);
  EXPECT_NEAR(std::abs(prof.upper.at(0) - I), 0.0, 1e-12);
}

TEST(Roots, RealRootsAreDetected) {
  const Expr z = Expr::xi(1), k = Expr::xi(0);
  const DiffSymbol a = DiffSymbol::from_expr((z - k) * (z - 2.0 * k), 2, {2, 0});
  try {
    roots_in_normal(a, {0.0}, {1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RealRootDetected);
  }
}

TEST(ProperEllipticity, Examples) {
  EXPECT_TRUE(properly_elliptic_check(DiffSymbol::from_expr(laplace_plus_one(2), 2, {2, 0}), 1.0, small_grid()).pass);
  const Expr half_line = Expr::bracket(BracketGroup::X, 1, 2.0) * laplace_plus_one(1);
  EXPECT_TRUE(properly_elliptic_check(DiffSymbol::from_expr(half_line, 1, {2, 2}), 1.0, small_grid()).pass);
  const Expr hyperbolic = pow(Expr::xi(1), 2) - Expr::bracket(BracketGroup::XiTangential, 2, 2.0);
  const auto rep = properly_elliptic_check(DiffSymbol::from_expr(hyperbolic, 2, {2, 0}), 1.0, small_grid());
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.reason.empty());
  EXPECT_EQ(rep.witness.size(), 2u);
}

TEST(ProperEllipticity, InvariantUnderNonvanishingFactor) {
  const DiffSymbol a = DiffSymbol::from_expr(laplace_plus_one(2), 2, {2, 0});
  const DiffSymbol b = DiffSymbol::from_expr(3.5 * laplace_plus_one(2), 2, {2, 0});
  const DiffSymbol c = DiffSymbol::from_expr(Expr(-2.0) * laplace_plus_one(2) * Expr::bracket(BracketGroup::X, 2, 0.0), 2, {2, 0});
  const Expr hyperbolic = pow(Expr::xi(1), 2) - Expr::bracket(BracketGroup::XiTangential, 2, 2.0);
  const DiffSymbol h = DiffSymbol::from_expr(hyperbolic, 2, {2, 0});
  const DiffSymbol h2 = DiffSymbol::from_expr(7.0 * hyperbolic, 2, {2, 0});
  EXPECT_EQ(properly_elliptic_check(a, 1.0, small_grid()).pass, properly_elliptic_check(b, 1.0, small_grid()).pass);
  EXPECT_EQ(properly_elliptic_check(a, 1.0, small_grid()).pass, properly_elliptic_check(c, 1.0, small_grid()).pass);
  EXPECT_EQ(properly_elliptic_check(h, 1.0, small_grid()).pass, properly_elliptic_check(h2, 1.0, small_grid()).pass);
}

TEST(LsMatrix, DirichletIsIdentity) {
  const BVProblem p = dirichlet(2, laplace_plus_one(2), {2, 0});
  const auto m = ls_matrix(p, {1.0}, {4.0});
  ASSERT_EQ(m.rows(), 1);
  EXPECT_EQ(m(0, 0), cplx(1.0));
}

TEST(LsMatrix, NeumannRowReducesToI) {
  BVProblem p = dirichlet(1, laplace_plus_one(1), {2, 0});
  p.rows[0].m1j = 1;
  p.rows[0].B = {Expr(0.0), Expr(1.0)};
  const auto m = ls_matrix(p, {}, {});
  EXPECT_NEAR(std::abs(m(0, 0) - I), 0.0, 1e-12);
  const LSReport rep = ls_check(p, 1.0, small_grid());
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.min_det, 1.0, 1e-12);
}

TEST(LsMatrix, RowEqualToAPlusVanishes) {
  // b(z) = z - i = a+(z): B_{1,1} = <xi'>^{-1}... with m1j = 1 and n = 1 the
  // normalization is trivial, so B = (-i, 1).
  BVProblem p = dirichlet(1, laplace_plus_one(1), {2, 0});
  p.rows[0].m1j = 1;
  p.rows[0].B = {Expr(-I), Expr(1.0)};
  EXPECT_NEAR(std::abs(ls_matrix(p, {}, {})(0, 0)), 0.0, 1e-12);
  EXPECT_FALSE(ls_check(p, 1.0, small_grid()).pass);
}

TEST(LsMatrix, InvariantUnderMultiplesOfAPlus) {
  // r = 2: a = (1 + |xi|^2)^2 in n = 2, rows Dirichlet and Neumann shifted by q a+.
  const Expr sym = pow(laplace_plus_one(2), 2);
  BVProblem p;
  p.P = DiffSymbol::from_expr(sym, 2, {4, 0});
  BoundaryRow r0, r1;
  r0.m1j = 0;
  r0.B = {Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)};
  r1.m1j = 1;
  r1.B = {Expr(0.0), Expr(1.0), Expr(0.0), Expr(0.0)};
  p.rows = {r0, r1};
  const std::vector<double> x_t{0.5}, xi_t{2.0};
  const RootProfile prof = roots_in_normal(p.P, x_t, xi_t);
  const auto base = ls_matrix(p, prof);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const double c = std::sqrt(5.0);
  for (int t = 0; t < 10; ++t) {
    // add q(z) a+(z) with q(z) = q0 + q1 z, expressed in the raw covariable of degree <= 3
    const Poly q{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
    const Poly add = poly_mul(q, prof.a_plus);  // normalized z
    BVProblem p2 = p;
    // Same Neumann row declared with m1j = 3: B_{1,1} = <xi'>^2 keeps b(z) = z.
    p2.rows[1].m1j = 3;
    p2.rows[1].B[1] = Expr::bracket(BracketGroup::XiTangential, 2, 2.0);
    for (std::size_t k = 0; k < add.size(); ++k) {
      p2.rows[1].B[k] = p2.rows[1].B[k] + Expr(add[k] * std::pow(c, 3.0 - static_cast<double>(k)));
    }
    const auto m = ls_matrix(p2, prof);
    EXPECT_LT((m - base).norm(), 1e-10);
  }
}

TEST(LsCheck, DirichletMinDetIsOne) {
  const BVProblem p = dirichlet(2, laplace_plus_one(2), {2, 0});
  const LSReport rep = ls_check(p, 1.0, {});
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.min_det, 1.0, 1e-12);
}

TEST(LsCheck, DuplicatedRowsAreDegenerate) {
  const Expr sym = pow(laplace_plus_one(2), 2);
  BVProblem p;
  p.P = DiffSymbol::from_expr(sym, 2, {4, 0});
  BoundaryRow r0;
  r0.m1j = 0;
  r0.B = {Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)};
  p.rows = {r0, r0};
  const LSReport rep = ls_check(p, 1.0, small_grid());
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.min_det, 0.0, 1e-12);
}

TEST(LsCheck, DeterminantContinuousAlongRays) {
  // Robin-type row u' + u gives a determinant varying with xi'.
  BVProblem p = dirichlet(2, laplace_plus_one(2), {2, 0});
  p.rows[0].m1j = 1;
  p.rows[0].B = {Expr(1.0), Expr(1.0)};
  RadialGridSpec g;
  g.radii = 40;
  g.rays = 8;
  const LSReport rep = ls_check(p, 1.0, g);
  const auto radii = log_space(g.r_min, g.r_max, g.radii);
  for (std::size_t ray = 0; ray * radii.size() < rep.det.size(); ++ray) {
    for (std::size_t k = 1; k + 1 < radii.size(); ++k) {
      const std::size_t i = ray * radii.size() + k;
      const double left = std::abs(rep.det[i] - rep.det[i - 1]) / (radii[k] - radii[k - 1]);
      const double right = std::abs(rep.det[i + 1] - rep.det[i]) / (radii[k + 1] - radii[k]);
      const double lip = std::max(left, right);
      EXPECT_LE(std::abs(rep.det[i + 1] - rep.det[i]), 10.0 * std::max(lip, 1e-12) * (radii[k + 1] - radii[k]) + 1e-12);
    }
  }
}
