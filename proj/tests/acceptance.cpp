// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgcalc/boundary.hpp"
#include "sgcalc/calculus.hpp"
#include "sgcalc/ellipticity.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/extension.hpp"
#include "sgcalc/fit.hpp"
#include "sgcalc/halfspace.hpp"
#include "sgcalc/polynomial.hpp"
#include "sgcalc/problem.hpp"
#include "sgcalc/regularity.hpp"
#include "sgcalc/remainder.hpp"
#include "sgcalc/solvers.hpp"
#include "support/poly_oracle.hpp"

using namespace sgcalc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double bracket(double v) { return std::sqrt(1.0 + v * v); }

std::string problem_path(const std::string& name) { return std::string(SGCALC_PROBLEMS) + "/" + name; }

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SGCALC_CLI) + " " + args + " --quiet";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// --- 1 ---------------------------------------------------------------------
Outcome composition() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(0, 3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    const int da = deg(rng), db = deg(rng);
    const oracle::Poly2 p = oracle::random_poly(rng, da, deg(rng));
    const oracle::Poly2 q = oracle::random_poly(rng, db, deg(rng));
    const int N = da + 1;
    const FormalSum c = compose(FormalSum::single(p.to_expr(), 1, {static_cast<double>(da), 3}, N),
                                FormalSum::single(q.to_expr(), 1, {static_cast<double>(db), 3}, N), N);
    const CompiledExpr f(c.raw_sum());
    const oracle::Poly2 ref = oracle::product_symbol(p, q);
    for (int s = 0; s < 100; ++s) {
      const double x = u(rng), xi = u(rng);
      const cplx want = ref.eval(x, xi);
      const cplx got = f(Point(std::vector<double>{x}, std::vector<double>{xi}));
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
  }
  return {worst <= 1e-12, "max rel err " + fmt(worst) + " (tol 1e-12)"};
}

// --- 2 ---------------------------------------------------------------------
Outcome parametrix_slopes() {
  const Expr x = Expr::x(0), k = Expr::xi(0);
  const Expr bx = Expr::bracket(BracketGroup::X, 1, 2.0);
  const std::vector<std::pair<std::string, DiffSymbol>> cases{
      {"1+xi^2", DiffSymbol::from_expr(1.0 + k * k, 1, {2, 0})},
      {"<x>^2<xi>^2", DiffSymbol::from_expr(bx * (1.0 + k * k), 1, {2, 2})}};
  bool pass = true;
  std::string detail;
  for (const auto& [name, a] : cases) {
    const RemainderFit f = remainder_order(parametrix_defect(parametrix(a, 3, 1.0), a));
    const bool ok = f.slope_x <= -2.0 + 0.2 && f.slope_xi <= -2.0 + 0.2;
    pass = pass && ok;
    auto s = [](double v, bool degenerate) { return degenerate ? std::string("exact zero") : fmt(v); };
    detail += name + ": x " + s(f.slope_x, f.degenerate_x) + ", xi " + s(f.slope_xi, f.degenerate_xi) + "; ";
  }
  return {pass, detail + "limit -1.8"};
}

// --- 3 ---------------------------------------------------------------------
Outcome root_enclosure() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> deg(1, 6);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const int d = deg(rng);
    Poly p;
    for (int j = 0; j < d; ++j) p.push_back(cplx(g(rng), g(rng)) * std::pow(10.0, g(rng)));
    p.push_back(cplx(g(rng), g(rng)) + cplx(0.1, 0.0));  // nonzero leading coefficient
    const double R = poly_root_bound(p);
    for (const cplx& z : poly_roots(p)) violations += std::abs(z) > R;
  }
  return {violations == 0, std::to_string(violations) + " violations in 1000 polynomials"};
}

// --- 4 ---------------------------------------------------------------------
Outcome ls_dirichlet() {
  const ModelProblem mp = load_model_problem(problem_path("dirichlet_laplace.json"));
  double worst = 0.0;
  bool pass = true;
  for (unsigned seed : {0u, 1u, 7u}) {
    RadialGridSpec g;
    g.seed = seed;
    g.radii = 10 + static_cast<int>(seed);
    g.rays = 8 + 2 * static_cast<int>(seed);
    const LSReport r = ls_check(mp.bvp, 1.0, g);
    pass = pass && r.pass;
    worst = std::max(worst, std::abs(r.min_det - 1.0));
  }
  const int code = run_cli("check-ls " + problem_path("dirichlet_laplace.json") + " --out acceptance_out/ls");
  pass = pass && worst <= 1e-12 && code == 0;
  return {pass, "|min_det - 1| " + fmt(worst) + " (tol 1e-12), cli exit " + std::to_string(code)};
}

// --- 5 ---------------------------------------------------------------------
Outcome residue_vs_quadrature() {
  const Expr term = Expr(1.0) / (pow(Expr::xi(1), 2) + Expr::bracket(BracketGroup::XiTangential, 2, 2.0));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  BoundarySymbolOptions quad;
  quad.method = BoundaryMethod::Quadrature;
  double disagree = 0.0, exact = 0.0;
  for (int s = 0; s < 50; ++s) {
    const std::vector<double> xi{u(rng)}, x{0.0};
    const cplx r = boundary_symbol(term, 2, 0, 0, x, xi);
    const cplx q = boundary_symbol(term, 2, 0, 0, x, xi, quad);
    disagree = std::max(disagree, std::abs(r - q));
    exact = std::max(exact, std::abs(r - 0.5 / bracket(xi[0])));
  }
  return {disagree <= 1e-8 && exact <= 1e-8,
          "residue vs quadrature " + fmt(disagree) + ", vs 1/(2<xi'>) " + fmt(exact) + " (tol 1e-8)"};
}

// --- 6 ---------------------------------------------------------------------
BoundaryJet exp_jet(int K) {
  std::vector<cplx> j;
  for (int k = 0; k <= K; ++k) j.emplace_back(k % 2 ? -1.0 : 1.0);
  return BoundaryJet::scalar(j, 1.0);
}

Outcome extension() {
  ExtensionParams p;
  p.mu = 2.0;
  p.K = 12;
  p.D = ExtensionParams::proof_D(1.0, p.r_exp);
  double match = 0.0;
  for (double e : jet_match_errors(exp_jet(p.K), p, 8)) match = std::max(match, e);

  const Axis ax{-2.0, 1.0 / 512, 1025};
  const GridFunction h = extend_half_space(exp_jet(p.K), p, ax);
  bool zero = true;
  for (std::size_t i = 0; i < ax.count; ++i) zero = zero && (ax.at(i) > -1.0 || h[i] == cplx(0.0));

  // linearity, also at D = 1 where the cutoffs are resolved on the grid
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  double lin = 0.0;
  for (double D : {p.D, 1.0}) {
    ExtensionParams q = p;
    q.D = D;
    std::vector<cplx> a, b, s;
    const double ca = 2 * u(rng), cb = 2 * u(rng);
    for (int k = 0; k <= q.K; ++k) {
      a.emplace_back(u(rng), u(rng));
      b.emplace_back(u(rng), u(rng));
      s.push_back(ca * a.back() + cb * b.back());
    }
    const auto ha = extend_half_space(BoundaryJet::scalar(a, 1.0), q, ax);
    const auto hb = extend_half_space(BoundaryJet::scalar(b, 1.0), q, ax);
    const auto hs = extend_half_space(BoundaryJet::scalar(s, 1.0), q, ax);
    for (std::size_t i = 0; i < ax.count; ++i) lin = std::max(lin, std::abs(hs[i] - ca * ha[i] - cb * hb[i]));
  }
  return {match <= 1e-6 && zero && lin <= 1e-12,
          "jet match " + fmt(match) + " (tol 1e-6), zero below -1 " + (zero ? "yes" : "no") + ", linearity " +
              fmt(lin) + " (tol 1e-12)"};
}

// --- 7 ---------------------------------------------------------------------
ModelProblem halfplane(const std::string& g) {
  json j = {{"name", "laplace"},
            {"n", 2},
            {"P", {{"orders", {2, 0}}, {"symbol", "(add 1 (pow (var xi 1) 2) (pow (var xi 2) 2))"}}},
            {"boundary", {{{"order", 0}, {"B", {"1", "0"}}}}},
            {"data", {{"f", "0"}, {"g", {g}}}}};
  return model_problem_from_json(j);
}

Outcome halfplane_dirichlet() {
  ModelProblem mp = halfplane("(sech (var x 1))");
  mp.config.tangential_points = 1024;
  mp.config.normal_length = 2.0;
  mp.config.normal_points = 5;
  const GridFunction u = solve_halfplane_ct(mp);
  // inverse transform of pi sech(pi xi / 2) e^{-<xi> x_n}
  auto modal = [](double x, double xn) {
    auto f = [&](double xi) {
      return std::cos(x * xi) * std::exp(-bracket(xi) * xn) / std::cosh(0.5 * std::numbers::pi * xi);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 60.0, 15, 1e-14);
  };
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < u.axis(0).count; i += 37) {
    for (std::size_t j = 0; j < u.axis(1).count; ++j) {
      const double ref = modal(u.axis(0).at(i), u.axis(1).at(j));
      err = std::max(err, std::abs(u.at(i, j) - ref));
      scale = std::max(scale, std::abs(ref));
    }
  }
  const double rel = err / scale;

  ModelProblem single = halfplane("(cos (mul 3 (var x 1)))");
  single.config.half_width = 20.0 * std::numbers::pi / 3.0;
  single.config.normal_length = 1.0;
  single.config.normal_points = 11;
  const GridFunction v = solve_halfplane_ct(single);
  const std::size_t last = v.axis(1).count - 1;
  double ratio = 0.0;
  for (std::size_t i = 0; i < v.axis(0).count; ++i) {
    if (std::abs(v.at(i, 0)) < 0.1) continue;
    ratio = std::max(ratio, std::abs(v.at(i, last) / v.at(i, 0) - std::exp(-std::sqrt(10.0))));
  }
  return {rel <= 1e-6 && ratio <= 1e-6,
          "modal rel err " + fmt(rel) + ", single-mode ratio err " + fmt(ratio) + " (tol 1e-6)"};
}

// --- 8 ---------------------------------------------------------------------
Outcome sg_halfline() {
  const ModelProblem mp = load_model_problem(problem_path("sg_halfline.json"));
  const RegularityReport rep = verify_regularity(mp);
  const DecayFit d = decay_fit(solve(mp), 2.0, 8.0, 1.0);

  // clamped -u'' + u = 0, u(0) = 1, u(L) = 0 solves the weighted problem with f = 0
  json j = read_json(problem_path("sg_halfline.json"));
  j["data"]["f"] = "0";
  const ModelProblem hom = model_problem_from_json(j);
  const double L = hom.config.L;
  auto clamped = [L](double x) { return (std::exp(-x) - std::exp(x - 2.0 * L)) / (1.0 - std::exp(-2.0 * L)); };
  std::vector<double> errs;
  for (std::size_t N : {100u, 200u, 400u}) {
    const GridFunction u = solve_halfline(hom, Axis::span(0.0, L, N + 1));
    double e = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) e = std::max(e, std::abs(u[i] - clamped(u.axis(0).at(i))));
    errs.push_back(e);
  }
  const double order = std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));
  const bool pass = rep.pass() && d.epsilon >= 0.8 && d.residual <= 0.1 && order >= 3.5;
  return {pass, std::string("report ") + (rep.pass() ? "pass" : "fail") + ", eps " + fmt(d.epsilon) +
                    " (min 0.8), residual " + fmt(d.residual) + " (max 0.1), order " + fmt(order) + " (min 3.5)"};
}

// --- 9 ---------------------------------------------------------------------
BoundaryJet gaussian_jet(int K) {
  std::vector<cplx> j(static_cast<std::size_t>(K) + 1, 0.0);
  double fact = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) fact *= k;
    if (k % 2 == 0) {
      double half = 1.0;
      for (int m = 2; m <= k / 2; ++m) half *= m;
      j[static_cast<std::size_t>(k)] = ((k / 2) % 2 ? -1.0 : 1.0) * fact / half;
    }
  }
  return BoundaryJet::scalar(j, 1.0);
}

Outcome transmission() {
  const FormalSum a = FormalSum::single(Expr(1.0) / (pow(Expr::xi(0), 2) + 1.0), 1, {-2, 0});
  const Axis fx{0.0, 1.0 / 64, 64 * 20};
  GridFunction f({fx});
  for (std::size_t j = 0; j < fx.count; ++j) f[j] = std::exp(-fx.at(j) * fx.at(j));
  const GridFunction out = transmission_apply(a, f, gaussian_jet(12));
  // (1/2) int_0^inf e^{-|x-y|} e^{-y^2} dy
  auto oracle = [](double x) {
    const double c = std::exp(0.25) * std::sqrt(std::numbers::pi) / 2.0;
    return 0.5 * (std::exp(-x) * c * (std::erf(x - 0.5) - std::erf(-0.5)) + std::exp(x) * c * std::erfc(x + 0.5));
  };
  double artifact = 0.0;
  for (std::size_t j = 0; j < fx.count; ++j) artifact = std::max(artifact, std::abs(out[j] - oracle(fx.at(j))));
  const DecayFit d = decay_fit(out, 2.0, 8.0, 1.0);
  return {d.epsilon >= 0.5 && artifact <= 1e-6 && std::isfinite(out.max_abs()),
          "eps " + fmt(d.epsilon) + " (min 0.5), max deviation from oracle " + fmt(artifact) + " (tol 1e-6)"};
}

// --- 10 --------------------------------------------------------------------
Outcome determinism() {
  const std::vector<std::string> problems{"sg_halfline.json", "dirichlet_laplace.json", "exterior_demo.json",
                                          "real_roots.json", "bad_symbol.json"};
  bool same = true;
  std::size_t compared = 0;
  for (const auto& name : problems) {
    std::string first;
    for (int run = 0; run < 2; ++run) {
      const std::string dir = "acceptance_out/det" + std::to_string(run);
      run_cli("report " + problem_path(name) + " --seed 11 --out " + dir);
      const std::string text = slurp(fs::path(dir) / "report.json");
      if (run == 0) {
        first = text;
      } else {
        same = same && !text.empty() && text == first;
        ++compared;
      }
    }
  }
  // the extension report as well
  std::string first;
  for (int run = 0; run < 2; ++run) {
    const std::string dir = "acceptance_out/ext" + std::to_string(run);
    run_cli("extend " + problem_path("exp_jet.json") + " --seed 11 --out " + dir);
    const std::string text = slurp(fs::path(dir) / "report.json") + slurp(fs::path(dir) / "grids/extension.csv");
    if (run == 1) same = same && !text.empty() && text == first;
    first = text;
  }
  ++compared;
  return {same, std::to_string(compared) + " report pairs " + (same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "composition exactness", 10, composition},
      {2, "parametrix remainder", 30, parametrix_slopes},
      {3, "root bound", 0, root_enclosure},
      {4, "Lopatinski-Shapiro Dirichlet", 0, ls_dirichlet},
      {5, "boundary symbol residue vs quadrature", 5, residue_vs_quadrature},
      {6, "extension operator", 10, extension},
      {7, "half-plane Dirichlet", 0, halfplane_dirichlet},
      {8, "half-line SG problem", 60, sg_halfline},
      {9, "transmission", 0, transmission},
      {10, "determinism", 0, determinism}};

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt(secs) + " s";
    if (c.limit_s > 0) {
      timing += " (limit " + fmt(c.limit_s) + " s)";
      if (secs >= c.limit_s) o.pass = false;
    }
    failed += !o.pass;
    std::printf("criterion %2d %s  %s: %s; %s\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                timing.c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
