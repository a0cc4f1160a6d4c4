#include "sgcalc/solvers.hpp"

#include <cmath>
#include <exception>

#include <Eigen/Sparse>

#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"
#include "sgcalc/polynomial.hpp"
#include "sgcalc/spectral.hpp"

namespace sgcalc {

namespace {

const cplx kI(0.0, 1.0);

using Triplet = Eigen::Triplet<cplx>;

// Stencil weights (times 12 h or 12 h^2) on points offset..offset+len-1 relative to i.
struct Stencil {
  int offset;
  std::vector<double> w;
};

Stencil first_derivative(std::size_t i, std::size_t N) {
  if (i == 0) return {0, {-25, 48, -36, 16, -3}};
  if (i == 1) return {-1, {-3, -10, 18, -6, 1}};
  if (i + 1 == N) return {-3, {-1, 6, -18, 10, 3}};
  return {-2, {1, -8, 0, 8, -1}};
}

Stencil second_derivative(std::size_t i, std::size_t N) {
  if (i == 1) return {-1, {10, -15, -4, 14, -6, 1}};
  if (i + 1 == N) return {-4, {1, -6, 14, -4, -15, 10}};
  return {-2, {-1, 16, -30, 16, -1}};
}

void add_stencil(std::vector<Triplet>& t, std::size_t row, const Stencil& s, cplx scale) {
  for (std::size_t q = 0; q < s.w.size(); ++q) {
    if (s.w[q] == 0.0) continue;
    const auto col = static_cast<std::ptrdiff_t>(row) + s.offset + static_cast<std::ptrdiff_t>(q);
    t.emplace_back(static_cast<int>(row), static_cast<int>(col), scale * s.w[q]);
  }
}

cplx eval_x(const CompiledExpr& c, const std::vector<double>& x) {
  return c(Point(x, std::vector<double>(x.size(), 0.0)));
}

std::vector<cplx> coefficient_row(const BVProblem& bvp, std::size_t row, const std::vector<double>& xi_t) {
  const int n = bvp.n();
  std::vector<cplx> out;
  for (const Expr& b : bvp.rows[row].B) {
    if (b.depends_on_any(VarKind::X)) fail(ErrorCode::InvalidArgument, "boundary operators must not depend on x'");
    std::vector<double> xi(xi_t);
    xi.resize(static_cast<std::size_t>(n), 0.0);
    out.push_back(CompiledExpr(b)(Point(std::vector<double>(static_cast<std::size_t>(n), 0.0), xi)));
  }
  return out;
}

}  // namespace

OdeSolution solve_normal_ode(const NormalOde& ode, const Axis& grid) {
  const std::size_t N = grid.count - 1;
  if (grid.count < 7) fail(ErrorCode::InvalidArgument, "normal ODE grid needs at least 7 points");
  if (std::abs(grid.start) > 1e-14) fail(ErrorCode::InvalidArgument, "normal ODE grid starts at 0");
  const double h = grid.step;
  std::vector<Triplet> t;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(N + 1));

  add_stencil(t, 0, first_derivative(0, N), ode.b1 * (-kI) / (12.0 * h));
  t.emplace_back(0, 0, ode.b0);
  rhs(0) = ode.g;
  for (std::size_t i = 1; i < N; ++i) {
    const double x = grid.at(i);
    const cplx c2 = ode.c2 ? ode.c2(x) : 0.0;
    const cplx c1 = ode.c1 ? ode.c1(x) : 0.0;
    const cplx c0 = ode.c0 ? ode.c0(x) : 0.0;
    // D^2 = -d^2/dx^2, D = -i d/dx
    if (c2 != cplx(0.0)) add_stencil(t, i, second_derivative(i, N), -c2 / (12.0 * h * h));
    if (c1 != cplx(0.0)) add_stencil(t, i, first_derivative(i, N), -kI * c1 / (12.0 * h));
    t.emplace_back(static_cast<int>(i), static_cast<int>(i), c0);
    rhs(static_cast<Eigen::Index>(i)) = ode.f ? ode.f(x) : 0.0;
  }
  t.emplace_back(static_cast<int>(N), static_cast<int>(N), 1.0);

  Eigen::SparseMatrix<cplx> A(static_cast<Eigen::Index>(N + 1), static_cast<Eigen::Index>(N + 1));
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SingularDiscretization, "sparse LU failed: " + lu.lastErrorMessage());
  const Eigen::VectorXcd u = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !u.allFinite()) fail(ErrorCode::SingularDiscretization, "sparse solve failed");

  OdeSolution out;
  const double bn = rhs.norm();
  out.residual = bn > 0.0 ? (A * u - rhs).norm() / bn : (A * u).norm();
  out.u = GridFunction({grid}, std::vector<cplx>(u.data(), u.data() + u.size()));
  return out;
}

GridFunction solve_halfline(const ModelProblem& problem) {
  const auto& c = problem.config;
  return solve_halfline(problem, Axis::span(0.0, c.L, c.points));
}

GridFunction solve_halfline(const ModelProblem& problem, const Axis& grid) {
  const BVProblem& bvp = problem.bvp;
  if (bvp.n() != 1) fail(ErrorCode::InvalidArgument, "solve_halfline needs n = 1");
  if (bvp.P.normal_degree() != 2) fail(ErrorCode::InvalidArgument, "solve_halfline needs a second-order operator");
  if (bvp.rows.size() != 1) fail(ErrorCode::InvalidArgument, "solve_halfline needs one boundary row");

  std::vector<std::shared_ptr<CompiledExpr>> coef(3);
  for (int k = 0; k <= 2; ++k) {
    auto it = bvp.P.coeffs.find(MultiIndex{k});
    if (it != bvp.P.coeffs.end()) coef[static_cast<std::size_t>(k)] = std::make_shared<CompiledExpr>(it->second);
  }
  auto at = [&](int k) -> std::function<cplx(double)> {
    auto c = coef[static_cast<std::size_t>(k)];
    if (!c) return {};
    return [c](double x) { return eval_x(*c, {x}); };
  };
  NormalOde ode;
  ode.c0 = at(0);
  ode.c1 = at(1);
  ode.c2 = at(2);
  if (!problem.f.is_zero()) {
    const DataFunction f = problem.f;
    ode.f = [f](double x) { return f({x}); };
  }
  const auto b = coefficient_row(bvp, 0, {});
  ode.b0 = b.size() > 0 ? b[0] : 0.0;
  ode.b1 = b.size() > 1 ? b[1] : 0.0;
  ode.g = problem.g.at(0)({0.0});

  OdeSolution s = solve_normal_ode(ode, grid);
  if (s.residual > 1e-8) {
    fail(ErrorCode::SingularDiscretization, "linear residual " + std::to_string(s.residual) + " above 1e-8");
  }
  s.u.meta()["source"] = "solve_halfline";
  s.u.meta()["problem"] = problem.name();
  s.u.meta()["residual"] = std::to_string(s.residual);
  return s.u;
}

std::vector<cplx> upper_normal_roots(const DiffSymbol& P, double xi_t) {
  const int m = P.normal_degree();
  Poly p(static_cast<std::size_t>(m) + 1, 0.0);
  const Point pt(std::vector<double>(static_cast<std::size_t>(P.n), 0.0),
                 P.n == 2 ? std::vector<double>{xi_t, 0.0} : std::vector<double>{0.0});
  for (int j = 0; j <= m; ++j) p[static_cast<std::size_t>(j)] = CompiledExpr(P.normal_coefficient(j))(pt);
  std::vector<cplx> upper;
  for (const cplx& z : poly_roots(p)) {
    if (std::abs(z.imag()) <= kRealRootBand * std::max(1.0, std::abs(z))) {
      fail(ErrorCode::RealRootDetected,
           "real root " + std::to_string(z.real()) + " of the normal polynomial at xi' = " + std::to_string(xi_t));
    }
    if (z.imag() > 0.0) upper.push_back(z);
  }
  return upper;
}

GridFunction solve_halfplane_ct(const ModelProblem& problem) {
  const auto& c = problem.config;
  const std::size_t N = c.tangential_points;
  return solve_halfplane_ct(problem, Axis{-c.half_width, 2.0 * c.half_width / static_cast<double>(N), N},
                            Axis::span(0.0, c.normal_length, c.normal_points));
}

GridFunction solve_halfplane_ct(const ModelProblem& problem, const Axis& tangential, const Axis& normal) {
  const BVProblem& bvp = problem.bvp;
  if (bvp.n() != 2) fail(ErrorCode::InvalidArgument, "solve_halfplane_ct needs n = 2");
  if (normal.start != 0.0) fail(ErrorCode::InvalidArgument, "normal axis starts at x_n = 0");
  for (const auto& [alpha, coef] : bvp.P.coeffs) {
    if (coef.depends_on_any(VarKind::X)) fail(ErrorCode::InvalidArgument, "solve_halfplane_ct needs x-independent P");
  }
  const int m1 = bvp.m1();
  const std::size_t r = static_cast<std::size_t>(bvp.r());
  if (bvp.rows.size() != r) fail(ErrorCode::InvalidArgument, "need m1/2 boundary rows");
  const bool forced = !problem.f.is_zero();
  if (forced && m1 != 2) fail(ErrorCode::InvalidArgument, "a nonzero f is supported for second-order P only");

  const std::size_t N = tangential.count;
  const std::size_t M = normal.count;
  const FourierPlan plan(N);
  const auto freq = fft_frequencies(N, tangential.step);

  std::vector<std::vector<cplx>> G(r);
  for (std::size_t j = 0; j < r; ++j) {
    std::vector<cplx> g(N);
    for (std::size_t i = 0; i < N; ++i) g[i] = problem.g[j]({tangential.at(i)});
    G[j] = plan.forward(g);
  }
  // F[j][m]: transform of f(., x_n_j)
  std::vector<std::vector<cplx>> F;
  if (forced) {
    F.resize(M);
    parallel_for(M, [&](std::size_t j) {
      std::vector<cplx> row(N);
      for (std::size_t i = 0; i < N; ++i) row[i] = problem.f({tangential.at(i), normal.at(j)});
      F[j] = plan.forward(row);
    });
  }

  std::vector<CompiledExpr> pc;
  for (int k = 0; k <= m1; ++k) pc.emplace_back(bvp.P.normal_coefficient(k));

  std::vector<cplx> modes(N * M, 0.0);
  std::vector<std::exception_ptr> errors(N);
  parallel_for(N, [&](std::size_t m) {
    try {
      const double xi = freq[m];
      const auto upper = upper_normal_roots(bvp.P, xi);
      if (upper.size() != r) {
        fail(ErrorCode::NotElliptic, "normal polynomial has " + std::to_string(upper.size()) + " upper roots, expected " +
                                         std::to_string(r));
      }
      if (!forced) {
        Eigen::MatrixXcd A(r, r);
        Eigen::VectorXcd b(r);
        for (std::size_t j = 0; j < r; ++j) {
          const auto row = coefficient_row(bvp, j, {xi});
          for (std::size_t l = 0; l < r; ++l) {
            cplx s = 0.0;
            cplx tk = 1.0;
            for (const cplx& bk : row) {
              s += bk * tk;
              tk *= upper[l];
            }
            A(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = s;
          }
          b(static_cast<Eigen::Index>(j)) = G[j][m];
        }
        const Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
        if (!lu.isInvertible()) fail(ErrorCode::SingularDiscretization, "modal boundary system is singular");
        const Eigen::VectorXcd coefs = lu.solve(b);
        for (std::size_t j = 0; j < M; ++j) {
          cplx s = 0.0;
          for (std::size_t l = 0; l < r; ++l) s += coefs(static_cast<Eigen::Index>(l)) * std::exp(kI * upper[l] * normal.at(j));
          modes[m * M + j] = s;
        }
      } else {
        const Point pt({0.0, 0.0}, std::vector<double>{xi, 0.0});
        const cplx c0 = pc[0](pt);
        const cplx c1 = pc[1](pt);
        const cplx c2 = pc[2](pt);
        NormalOde ode;
        ode.c0 = [c0](double) { return c0; };
        ode.c1 = [c1](double) { return c1; };
        ode.c2 = [c2](double) { return c2; };
        const double h = normal.step;
        ode.f = [&, m, h](double x) {
          const auto j = static_cast<std::size_t>(std::lround(x / h));
          return F[j][m];
        };
        const auto row = coefficient_row(bvp, 0, {xi});
        ode.b0 = row.size() > 0 ? row[0] : 0.0;
        ode.b1 = row.size() > 1 ? row[1] : 0.0;
        ode.g = G[0][m];
        const OdeSolution s = solve_normal_ode(ode, normal);
        for (std::size_t j = 0; j < M; ++j) modes[m * M + j] = s.u[j];
      }
    } catch (...) {
      errors[m] = std::current_exception();
    }
  });
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  GridFunction u({tangential, normal});
  parallel_for(M, [&](std::size_t j) {
    std::vector<cplx> col(N);
    for (std::size_t m = 0; m < N; ++m) col[m] = modes[m * M + j];
    const auto back = plan.inverse(col);
    for (std::size_t i = 0; i < N; ++i) u.at(i, j) = back[i];
  });
  u.meta()["source"] = "solve_halfplane_ct";
  u.meta()["problem"] = problem.name();
  return u;
}

}  // namespace sgcalc
