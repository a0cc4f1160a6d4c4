#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgcalc/boundary.hpp"
#include "sgcalc/calculus.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/seminorm.hpp"

using namespace sgcalc;

namespace {

const cplx I(0.0, 1.0);

Expr inv_laplace(int n) {
  return Expr(1.0) / (pow(Expr::xi(n - 1), 2) + Expr::bracket(BracketGroup::XiTangential, n, 2.0));
}

double bracket(double v) { return std::sqrt(1.0 + v * v); }

BVProblem dirichlet_laplace(int n) {
  BVProblem p;
  Expr s(1.0);
  for (int i = 0; i < n; ++i) s = s + pow(Expr::xi(i), 2);
  p.P = DiffSymbol::from_expr(s, n, {2, 0});
  BoundaryRow row;
  row.m1j = 0;
  row.B = {Expr(1.0), Expr(0.0)};
  p.rows = {row};
  return p;
}

BoundarySymbolOptions with(BoundaryMethod m) {
  BoundarySymbolOptions o;
  o.method = m;
  return o;
}

RadialGridSpec small_grid() {
  RadialGridSpec g;
  g.radii = 6;
  g.rays = 8;
  return g;
}

}  // namespace

TEST(Contour, SemicircleAndBridges) {
  const auto semi = make_contour(ContourKind::Semicircle, 2.0, {std::sqrt(3.0)});
  ASSERT_EQ(semi.segments.size(), 1u);
  EXPECT_DOUBLE_EQ(semi.segments[0].radius, 4.0);
  const auto bridged = make_contour(ContourKind::Bridged, 2.0, {std::sqrt(3.0)}, 3, 1.5, 1.5);
  ASSERT_EQ(bridged.segments.size(), 3u);
  EXPECT_DOUBLE_EQ(bridged.segments[0].a.real(), 2.0 * std::pow(3.0, 2.0));
  EXPECT_DOUBLE_EQ(bridged.segments[0].b.real(), 4.0);
  EXPECT_DOUBLE_EQ(bridged.segments[2].a.real(), -4.0);
  const auto clipped = make_contour(ContourKind::Clipped, 2.0, {std::sqrt(3.0)}, 3, 1.5, 1.5);
  EXPECT_DOUBLE_EQ(clipped.segments[0].a.real(), std::sqrt(4.0 * 81.0 - 4.0));
  const auto clipped0 = make_contour(ContourKind::Clipped, 2.0, {30.0}, 1, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(clipped0.segments[0].a.real(), 0.0);
}

TEST(Contour, CauchyOnClosedPath) {
  // integral of 1/(z - i) around the closed upper half disc of radius 3 is 2 pi i.
  auto path = make_contour(ContourKind::Semicircle, 3.0, {});
  ContourSegment seg;
  seg.a = -3.0;
  seg.b = 3.0;
  path.segments.push_back(seg);
  const cplx v = integrate([](cplx z) { return 1.0 / (z - I); }, path, 1e-12);
  EXPECT_NEAR(std::abs(v - 2.0 * std::numbers::pi * I), 0.0, 1e-10);
}

TEST(Contour, CircleResidue) {
  const cplx r = circle_residue([](cplx z) { return std::exp(z) / ((z - 1.0) * (z + 2.0)); }, 1.0, 1.0);
  EXPECT_NEAR(std::abs(r - std::exp(1.0) / 3.0), 0.0, 1e-14);
}

TEST(BoundarySymbol, InverseLaplacianQ00) {
  for (double xi : {0.0, 0.5, 3.0, -20.0}) {
    const double expected = 1.0 / (2.0 * bracket(xi));
    for (auto m : {BoundaryMethod::Residue, BoundaryMethod::Quadrature}) {
      const cplx v = boundary_symbol(inv_laplace(2), 2, 0, 0, {0.3}, {xi}, with(m));
      EXPECT_NEAR(std::abs(v - expected), 0.0, 1e-10);
    }
  }
}

TEST(BoundarySymbol, InverseLaplacianQ10) {
  const cplx v = boundary_symbol(inv_laplace(2), 2, 1, 0, {0.0}, {2.0});
  EXPECT_NEAR(std::abs(v - 0.5 * I), 0.0, 1e-12);
  BoundarySymbolOptions o;
  o.allow_polynomial_part = true;
  const cplx q11 = boundary_symbol(inv_laplace(2), 2, 1, 1, {0.0}, {2.0}, o);
  EXPECT_NEAR(std::abs(q11 + 0.5 * std::sqrt(5.0)), 0.0, 1e-12);
}

TEST(BoundarySymbol, NoNormalDependenceIsTooHigh) {
  const Expr t = Expr(1.0) / (1.0 + pow(Expr::xi(0), 2));
  try {
    boundary_symbol(t, 2, 0, 0, {0.0}, {1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegreeTooHigh);
  }
}

TEST(BoundarySymbol, RealPoleRejected) {
  const Expr t = Expr(1.0) / (pow(Expr::xi(0), 2) - 4.0);
  try {
    boundary_symbol(t, 1, 0, 0, {}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RealPoleOnPath);
  }
}

TEST(BoundarySymbol, OddBracketIsNotRational) {
  const Expr t = Expr::bracket(BracketGroup::Xi, 1, -3.0);
  EXPECT_THROW(boundary_symbol(t, 1, 0, 0, {}, {}), Error);
}

TEST(BoundarySymbol, ResidueMatchesQuadratureOnRandomRationals) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 1.5);
  const Expr z = Expr::xi(1), k = Expr::xi(0), x = Expr::x(0);
  const Expr c2 = Expr::bracket(BracketGroup::XiTangential, 2, 2.0);
  for (int t = 0; t < 20; ++t) {
    const double a = u(rng), b = u(rng), s = u(rng);
    // poles at +-i a<xi'> and at s +- i b (double), numerator of degree 1
    const Expr term = (1.0 + x * z + k) / ((z * z + a * a * c2) * pow((z - s) * (z - s) + b * b, 2));
    for (double xi : {0.0, 1.7}) {
      BoundarySymbolOptions q = with(BoundaryMethod::Quadrature);
      q.B = 4.0 + s;
      const cplx r1 = boundary_symbol(term, 2, 0, 1, {0.4}, {xi});
      const cplx r2 = boundary_symbol(term, 2, 0, 1, {0.4}, {xi}, q);
      EXPECT_LT(std::abs(r1 - r2), 1e-8);
    }
  }
}

TEST(BoundarySymbol, AgreesWithRealLineIntegral) {
  // Independent oracle: (1/2pi) int_R f over the real axis by quadrature.
  const Expr z = Expr::xi(0);
  const Expr term = (2.0 + z) / ((z * z + 1.0) * (z * z + 4.0));
  const cplx v = boundary_symbol(term, 1, 0, 0, {}, {});
  auto f = [](double t) { return 2.0 / ((t * t + 1.0) * (t * t + 4.0)); };  // odd part integrates to 0
  const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                         [&](double s) { return f(s / (1 - s * s)) * (1 + s * s) / ((1 - s * s) * (1 - s * s)); }, -1.0,
                         1.0, 15, 1e-14) /
                     (2.0 * std::numbers::pi);
  EXPECT_NEAR(std::abs(v - ref), 0.0, 1e-12);
}

TEST(BoundarySymbol, DeclaredOrdersBoundedOnGrid) {
  const FormalSum a = FormalSum::single(inv_laplace(2), 2, {-2, 0});
  BoundarySymbolOptions o;
  o.allow_polynomial_part = true;
  const auto table = BoundarySymbolTable::build(a, 2, o);
  const auto pts = boundary_grid(2, 1.0, {});
  for (int k = 0; k < 2; ++k) {
    for (int j = 0; j < 2; ++j) {
      const SGOrder ord = table.declared_order(k, j);
      double sup = 0.0;
      for (const auto& y : pts) {
        const double c = bracket(y[1]);
        sup = std::max(sup, std::abs(table.value(k, j, {y[0]}, {y[1]})) * std::pow(c, -ord.m1));
      }
      EXPECT_LT(sup, 1.0) << k << j;
    }
  }
}

TEST(Ptilde, SecondNormalDerivative) {
  const DiffSymbol P = DiffSymbol::from_expr(pow(Expr::xi(0), 2), 1, {2, 0});
  const auto t = assemble_Ptilde(P);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(eval(t.at({0, 1}), Point(std::vector<double>{0.0}, std::vector<double>{0.0})), -I);
  EXPECT_EQ(eval(t.at({1, 0}), Point(std::vector<double>{0.0}, std::vector<double>{0.0})), -I);
}

TEST(Ptilde, NoNormalDerivatives) {
  const DiffSymbol P = DiffSymbol::from_expr(1.0 + pow(Expr::xi(0), 2), 2, {2, 0});
  EXPECT_TRUE(assemble_Ptilde(P).empty());
}

TEST(Ptilde, ShiftedLaplacian) {
  const auto t = assemble_Ptilde(dirichlet_laplace(2).P);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_TRUE(t.count({0, 1}) && t.count({1, 0}));
}

TEST(Ptilde, JumpFormulaByWeakTesting) {
  // D^2(e+ u) = e+ D^2 u + (1/i)(gamma_1 delta + gamma_0 D delta) with
  // gamma_j = (D^j u)(0), tested against phi(x) = exp(-(x - 0.3)^2).
  using Q = boost::math::quadrature::gauss_kronrod<double, 61>;
  auto u = [](double x) { return std::exp(-x) * std::cos(x); };
  auto u2 = [](double x) { return 2.0 * std::exp(-x) * std::sin(x); };  // u''
  auto phi = [](double x) { return std::exp(-(x - 0.3) * (x - 0.3)); };
  auto phi2 = [](double x) { const double d = x - 0.3; return (4 * d * d - 2) * std::exp(-d * d); };
  const double lhs_re = Q::integrate([&](double x) { return -u(x) * phi2(x); }, 0.0, 40.0, 20, 1e-14);
  const double rhs_re = Q::integrate([&](double x) { return -u2(x) * phi(x); }, 0.0, 40.0, 20, 1e-14);
  const auto t = assemble_Ptilde(DiffSymbol::from_expr(pow(Expr::xi(0), 2), 1, {2, 0}));
  const Point o(std::vector<double>{0.0}, std::vector<double>{0.0});
  const cplx g0 = u(0.0), g1 = -I * (-1.0);  // u'(0) = -1
  const cplx dphi0 = 2 * 0.3 * std::exp(-0.09);
  // <delta, phi> = phi(0); <D delta, phi> = -<delta, D phi> = i phi'(0)
  const cplx jump = eval(t.at({1, 0}), o) * g1 * phi(0.0) + eval(t.at({0, 1}), o) * g0 * (I * dphi0);
  EXPECT_NEAR(std::abs(cplx(lhs_re) - (cplx(rhs_re) + jump)), 0.0, 1e-10);
}

TEST(System, DirichletLaplacianLeadingOrder) {
  const BVProblem p = dirichlet_laplace(2);
  const FormalSum b = parametrix(p.P, 1, 1.0);
  const BoundarySystem sys = assemble_system(p, b, 1);
  EXPECT_EQ(sys.rows(), 3);
  EXPECT_EQ(sys.cols(), 2);
  for (double xi : {0.0, 2.0, 50.0}) {
    const auto q = sys.qbar({1.0}, {xi});
    EXPECT_NEAR(std::abs(q(0, 0) - 0.5), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(q(0, 1) + 0.5 * I), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(q(1, 0) - 0.5 * I), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(q(1, 1) - 0.5), 0.0, 1e-12);
    // Qbar is a projector.
    EXPECT_LT((q * q - q).norm(), 1e-12);
    const auto m = sys({1.0}, {xi});
    EXPECT_EQ(m(2, 0), cplx(1.0));
    EXPECT_EQ(m(2, 1), cplx(0.0));
  }
  const auto rep = left_elliptic_check(sys, 10.0, small_grid());
  EXPECT_TRUE(rep.pass);
  EXPECT_GE(rep.min_singular_value, 0.1);
}

TEST(System, ZeroBoundaryOperatorFails) {
  BVProblem p = dirichlet_laplace(2);
  p.rows[0].B = {Expr(0.0), Expr(0.0)};
  const BoundarySystem sys = assemble_system(p, parametrix(p.P, 1, 1.0), 1);
  const auto rep = left_elliptic_check(sys, 10.0, small_grid());
  EXPECT_FALSE(rep.pass);
  EXPECT_LT(rep.min_singular_value, 1e-10);
}

TEST(LeftElliptic, TrivialMatrices) {
  const MatrixSymbol padded = [](const auto&, const auto&) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 2);
    m.topRows(2) = Eigen::MatrixXcd::Identity(2, 2);
    return m;
  };
  const auto a = left_elliptic_check(padded, 2, 1.0, small_grid());
  EXPECT_TRUE(a.pass);
  EXPECT_NEAR(a.min_singular_value, 1.0, 1e-15);
  const MatrixSymbol deficient = [](const auto&, const auto&) {
    Eigen::MatrixXcd m(3, 2);
    m << 1, 2, 1, 2, 2, 4;
    return m;
  };
  const auto b = left_elliptic_check(deficient, 2, 1.0, small_grid());
  EXPECT_FALSE(b.pass);
  EXPECT_LT(b.min_singular_value, 1e-12);
}

TEST(AssumptionA, ParametrixOfShiftedLaplacian) {
  const BVProblem p = dirichlet_laplace(2);
  const FormalSum b = parametrix(p.P, 2, 1.0);
  const auto prof = audit_assumption_a(b, 2.0, 1.5, 1.0, small_grid());
  EXPECT_TRUE(prof.pass);
  EXPECT_NEAR(prof.max_pole_ratio.at(0), 1.0, 1e-9);
}
