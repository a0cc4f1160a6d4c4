#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sgcalc/calculus.hpp"
#include "sgcalc/cutoff.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/remainder.hpp"
#include "support/poly_oracle.hpp"

using namespace sgcalc;

namespace {

const cplx I(0.0, 1.0);

Point pt(double x, double xi) { return Point(std::vector<double>{x}, std::vector<double>{xi}); }

double max_rel_diff(const Expr& a, const Expr& b, int n = 1, int samples = 100, unsigned seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3, 3);
  const CompiledExpr fa(a), fb(b);
  double m = 0.0;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x(static_cast<std::size_t>(n)), xi(static_cast<std::size_t>(n));
    for (auto& v : x) v = u(rng);
    for (auto& v : xi) v = u(rng);
    const Point p(x, xi);
    const cplx va = fa(p), vb = fb(p);
    m = std::max(m, std::abs(va - vb) / std::max(1.0, std::abs(vb)));
  }
  return m;
}

FormalSum fs(const Expr& e, SGOrder o, int N = 1) { return FormalSum::single(e, 1, o, N); }

DiffSymbol sym(const Expr& e, SGOrder o) { return DiffSymbol::from_expr(e, 1, o); }

}  // namespace

TEST(Compose, XiThenX) {
  const FormalSum c = compose(fs(Expr::xi(0), {1, 0}), fs(Expr::x(0), {0, 1}), 2);
  EXPECT_LT(max_rel_diff(c.raw_sum(), Expr::x(0) * Expr::xi(0) - I), 1e-15);
}

TEST(Compose, XiSquaredThenXSquared) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const FormalSum c = compose(fs(k * k, {2, 0}), fs(x * x, {0, 2}), 3);
  EXPECT_LT(max_rel_diff(c.raw_sum(), x * x * k * k - 4.0 * I * x * k - 2.0), 1e-14);
}

TEST(Compose, IdentityIsNeutral) {
  const Expr b = Expr::bracket(BracketGroup::X, 1, 2.0) / (1.0 + Expr::xi(0) * Expr::xi(0)) + Expr::x(0) * Expr::xi(0);
  const FormalSum B = fs(b, {0, 2}, 3);
  const FormalSum one = fs(Expr(1.0), {0, 0}, 3);
  const FormalSum l = compose(one, B, 3), r = compose(B, one, 3);
  for (int t = 0; t < 3; ++t) {
    EXPECT_LT(max_rel_diff(l.terms[t], B.terms[t]), 1e-12);
    EXPECT_LT(max_rel_diff(r.terms[t], B.terms[t]), 1e-12);
  }
}

TEST(Compose, AssociativeUpToTruncation) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const FormalSum a = fs(x * k + k * k, {2, 1}, 3);
  const FormalSum b = fs(Expr::bracket(BracketGroup::X, 1, 2.0) * k, {1, 2}, 3);
  const FormalSum c = fs(Expr(1.0) / (2.0 + k * k + x * x), {-2, -2}, 3);
  const FormalSum l = compose(compose(a, b, 3), c, 3);
  const FormalSum r = compose(a, compose(b, c, 3), 3);
  for (int t = 0; t < 3; ++t) EXPECT_LT(max_rel_diff(l.terms[t], r.terms[t]), 1e-9) << "term " << t;
}

TEST(Compose, ExactForDifferentialOperators) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::Poly2 p = oracle::random_poly(rng, 3, 3), q = oracle::random_poly(rng, 2, 3);
    const FormalSum a = fs(p.to_expr(), {3, 3}, 4), b = fs(q.to_expr(), {2, 3}, 4);
    const FormalSum c = compose(a, b, 4);
    EXPECT_LT(max_rel_diff(c.raw_sum(), oracle::product_symbol(p, q).to_expr()), 1e-12);
  }
}

TEST(Compose, TruncationCap) {
  EXPECT_THROW(compose(fs(Expr::xi(0), {1, 0}), fs(Expr::x(0), {0, 1}), 7), Error);
  try {
    compose(fs(Expr::xi(0), {1, 0}), fs(Expr::x(0), {0, 1}), 7);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationCap);
  }
}

TEST(Adjoint, Examples) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  EXPECT_LT(max_rel_diff(adjoint(fs(x * k, {1, 1}), 2).raw_sum(), x * k - I), 1e-15);
  const Expr real_sym = 1.0 + k * k;
  EXPECT_LT(max_rel_diff(adjoint(fs(real_sym, {2, 0}), 3).raw_sum(), real_sym), 1e-15);
  EXPECT_LT(max_rel_diff(adjoint(fs(I * x, {0, 1}), 2).raw_sum(), -I * x), 1e-15);
}

TEST(Adjoint, Involution) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const FormalSum a = fs(I * x * x * k + Expr::bracket(BracketGroup::Xi, 1, 2.0) * x, {2, 2}, 4);
  const FormalSum aa = adjoint(adjoint(a, 4), 4);
  for (int t = 0; t < 4; ++t) EXPECT_LT(max_rel_diff(aa.terms[t], a.terms[t]), 1e-12);
}

TEST(Parametrix, LeadingTermIsCutoffOverSymbol) {
  const Expr a = Expr::bracket(BracketGroup::X, 1, 2.0) * Expr::bracket(BracketGroup::Xi, 1, 2.0);
  const FormalSum b = parametrix(sym(a, {2, 2}), 1, 2.0);
  ASSERT_EQ(b.N(), 1);
  ASSERT_TRUE(b.cutoff.has_value());
  EXPECT_EQ(b.base_order, (SGOrder{-2, -2}));
  for (double r : {0.5, 3.0, 5.0, 40.0}) {
    const Point p = pt(r * 0.6, r * 0.8);
    const double chi = (*b.cutoff)(p);
    EXPECT_NEAR(std::abs(b.eval(p) - chi / eval(a, p)), 0.0, 1e-15);
  }
}

TEST(Parametrix, ConstantSymbol) {
  const FormalSum b = parametrix(sym(Expr(4.0), {0, 0}), 3, 1.0);
  EXPECT_LT(max_rel_diff(b.terms[0], Expr(0.25)), 1e-15);
  EXPECT_TRUE(b.terms[1].is_zero());
  EXPECT_TRUE(b.terms[2].is_zero());
}

TEST(Parametrix, RejectsNonElliptic) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  try {
    parametrix(sym(1.0 + x * x + k * k, {2, 2}), 2, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotElliptic);
  }
}

TEST(Parametrix, RemainderDecays) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const DiffSymbol a = sym(Expr::bracket(BracketGroup::X, 1, 2.0) * (1.0 + k * k), {2, 2});
  for (int N = 1; N <= 3; ++N) {
    const FormalSum b = parametrix(a, N, 2.0);
    const RemainderFit f = remainder_order(parametrix_defect(b, a));
    EXPECT_LE(f.slope_x, -(N - 1) + 0.2) << N;
    EXPECT_LE(f.slope_xi, -(N - 1) + 0.2) << N;
  }
  (void)x;
}

TEST(Remainder, ExactPowerLaw) {
  const RemainderFit f = remainder_order(Expr::bracket(BracketGroup::Xi, 1, -3.0), 1);
  EXPECT_NEAR(f.slope_xi, -3.0, 0.1);
  EXPECT_NEAR(f.slope_x, 0.0, 1e-12);
}

TEST(Remainder, ZeroIsDegeneratePass) {
  const RemainderFit f = remainder_order(Expr(0.0), 1);
  EXPECT_TRUE(f.degenerate_x && f.degenerate_xi);
  EXPECT_TRUE(std::isinf(f.slope_x) && f.slope_x < 0);
  EXPECT_TRUE(f.within({-5, -5}, 0.0));
}

TEST(Remainder, NeedsTwoDecades) {
  RemainderProbe p;
  p.r_max = 50.0;
  EXPECT_THROW(remainder_order(Expr(1.0), 1, p), Error);
}

TEST(Cutoff, DeadZoneAndPlateau) {
  const GevreyCutoff chi(2.0, 2.0);
  EXPECT_EQ(chi.radial(1.0), 0.0);
  EXPECT_EQ(chi.radial(6.0), 1.0);
  double prev = 0.0;
  for (double r = 2.2; r < 3.8; r += 0.05) {
    const double v = chi.radial(r);
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(Cutoff, DerivativesMatchFiniteDifferences) {
  const GevreyCutoff chi(1.0, 2.5);
  const Point p = pt(0.9, 0.8);
  const double h = 1e-5;
  const double dx = (chi(pt(0.9 + h, 0.8)) - chi(pt(0.9 - h, 0.8))) / (2 * h);
  const double dxi = (chi(pt(0.9, 0.8 + h)) - chi(pt(0.9, 0.8 - h))) / (2 * h);
  EXPECT_NEAR(chi.derivative(p, std::vector<int>{0}, std::vector<int>{1}), dx, 1e-7);
  EXPECT_NEAR(chi.derivative(p, std::vector<int>{1}, std::vector<int>{0}), dxi, 1e-7);
  const double dxx = (chi(pt(0.9 + h, 0.8)) - 2 * chi(p) + chi(pt(0.9 - h, 0.8))) / (h * h);
  EXPECT_NEAR(chi.derivative(p, std::vector<int>{0}, std::vector<int>{2}), dxx, 1e-3);
}

TEST(Symbol, FromExprRecoversCoefficients) {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const DiffSymbol s = sym(Expr::bracket(BracketGroup::X, 1, 2.0) * (1.0 + k * k) + 3.0 * x * k, {2, 2});
  EXPECT_EQ(s.degree(), 2);
  EXPECT_EQ(s.coeffs.size(), 3u);
  EXPECT_LT(max_rel_diff(s.coeffs.at({1}), 3.0 * x), 1e-15);
  EXPECT_THROW(sym(Expr(1.0) / (1.0 + k * k), {-2, 0}), Error);
}

TEST(Symbol, FormalSumJsonRoundTrip) {
  const Expr a = Expr::bracket(BracketGroup::X, 1, 2.0) * Expr::bracket(BracketGroup::Xi, 1, 2.0);
  const FormalSum b = parametrix(sym(a, {2, 2}), 3, 2.0);
  nlohmann::json j = b;
  const FormalSum back = formal_sum_from_json(j);
  EXPECT_EQ(back.N(), 3);
  EXPECT_EQ(nlohmann::json(back).dump(), j.dump());
  const Point p = pt(7.0, -3.0);
  EXPECT_EQ(back.eval(p), b.eval(p));
}
