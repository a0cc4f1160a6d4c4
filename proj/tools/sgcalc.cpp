// sgcalc command-line front end.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgcalc/boundary.hpp"
#include "sgcalc/calculus.hpp"
#include "sgcalc/ellipticity.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/extension.hpp"
#include "sgcalc/expr.hpp"
#include "sgcalc/fit.hpp"
#include "sgcalc/problem.hpp"
#include "sgcalc/regularity.hpp"
#include "sgcalc/remainder.hpp"
#include "sgcalc/solvers.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sgcalc;

namespace {

enum Exit { kPass = 0, kCheckFailed = 1, kUsage = 2, kInternal = 3 };

struct Options {
  std::string input;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

// Input problems are reported as usage errors, everything after loading as check failures.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Run {
 public:
  explicit Run(const Options& o) : opt_(o) {}

  void progress(const std::string& msg) const {
    if (!opt_.quiet) std::cerr << "sgcalc: " << msg << "\n";
  }

  ModelProblem problem() const {
    try {
      ModelProblem mp = load_model_problem(opt_.input);
      if (opt_.seed) mp.config.seed = *opt_.seed;
      return mp;
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }

  json raw_input() const {
    try {
      return read_json(opt_.input);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
  }

  RadialGridSpec grid(const RunConfig& c) const {
    RadialGridSpec g = c.grid;
    g.seed = c.seed;
    return g;
  }

  void write_report(const std::string& command, json body, bool pass) const {
    fs::create_directories(opt_.out);
    body["command"] = command;
    body["input"] = fs::path(opt_.input).filename().string();
    body["pass"] = pass;
    std::ofstream os(fs::path(opt_.out) / "report.json");
    os << body.dump(2) << "\n";
    progress(std::string("report written to ") + (fs::path(opt_.out) / "report.json").string() +
             (pass ? " (pass)" : " (FAIL)"));
  }

  void write_grid(const std::string& name, const GridFunction& u) const {
    const fs::path dir = fs::path(opt_.out) / "grids";
    fs::create_directories(dir);
    u.write_csv((dir / (name + ".csv")).string());
  }

 private:
  Options opt_;
};

int check_elliptic(const Run& run) {
  const ModelProblem mp = run.problem();
  run.progress("SG-ellipticity sweep for " + mp.name());
  EllipticOptions eo;
  eo.C_min = mp.config.elliptic_C_min;
  const EllipticReport r = sg_elliptic_check(mp.bvp.P, mp.config.R, run.grid(mp.config), eo);
  run.write_report("check-elliptic", {{"problem", mp.name()}, {"elliptic", r}}, r.pass);
  return r.pass ? kPass : kCheckFailed;
}

int check_ls(const Run& run) {
  const ModelProblem mp = run.problem();
  run.progress("proper ellipticity and Lopatinski-Shapiro sweep for " + mp.name());
  const RadialGridSpec g = run.grid(mp.config);
  const ProperReport proper = properly_elliptic_check(mp.bvp.P, mp.config.R, g);
  const LSReport ls = ls_check(mp.bvp, mp.config.R, g, mp.config.ls_C_min);
  const bool pass = proper.pass && ls.pass;
  run.write_report("check-ls", {{"problem", mp.name()}, {"properly_elliptic", proper}, {"lopatinski_shapiro", ls},
                                {"min_det", ls.min_det}},
                   pass);
  return pass ? kPass : kCheckFailed;
}

int parametrix_cmd(const Run& run) {
  const ModelProblem mp = run.problem();
  const int N = mp.config.parametrix_N;
  run.progress("parametrix with " + std::to_string(N) + " terms for " + mp.name());
  const FormalSum b = parametrix(mp.bvp.P, N, mp.config.parametrix_B);
  const RemainderFit f = remainder_order(parametrix_defect(b, mp.bvp.P));
  const double expected = -(N - 1);
  const double tol = 0.2;
  const bool pass = f.slope_x <= expected + tol && f.slope_xi <= expected + tol;
  json terms = json::array();
  for (const Expr& t : b.terms) terms.push_back(to_prefix(t));
  run.write_report("parametrix",
                   {{"problem", mp.name()},
                    {"N", N},
                    {"terms", terms},
                    {"remainder", {{"slope_x", f.degenerate_x ? json(nullptr) : json(f.slope_x)},
                                   {"slope_xi", f.degenerate_xi ? json(nullptr) : json(f.slope_xi)},
                                   {"ci95_x", f.ci95_x},
                                   {"ci95_xi", f.ci95_xi},
                                   {"degenerate_x", f.degenerate_x},
                                   {"degenerate_xi", f.degenerate_xi},
                                   {"expected", expected},
                                   {"tolerance", tol}}}},
                   pass);
  return pass ? kPass : kCheckFailed;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

int boundary_reduce(const Run& run) {
  const ModelProblem mp = run.problem();
  const RunConfig& c = mp.config;
  run.progress("boundary reduction for " + mp.name());
  const FormalSum b = parametrix(mp.bvp.P, c.boundary_N, c.parametrix_B);
  const BoundarySystem sys = assemble_system(mp.bvp, b, c.boundary_N);
  const LeftEllipticReport left = left_elliptic_check(sys, c.R, run.grid(c), c.left_elliptic_min);
  json samples = json::array();
  const int n = mp.n();
  for (double r : {0.0, 1.0, 10.0, 100.0}) {
    const std::vector<double> x_t(static_cast<std::size_t>(n - 1), 0.0);
    const std::vector<double> xi_t(static_cast<std::size_t>(n - 1), r);
    samples.push_back({{"x_t", x_t}, {"xi_t", xi_t}, {"qbar", matrix_json(sys.qbar(x_t, xi_t))},
                       {"system", matrix_json(sys(x_t, xi_t))}});
    if (n == 1) break;
  }
  run.write_report("boundary-reduce", {{"problem", mp.name()}, {"left_elliptic", left}, {"samples", samples}}, left.pass);
  return left.pass ? kPass : kCheckFailed;
}

int extend(const Run& run) {
  const json in = run.raw_input();
  JetFile jf;
  std::optional<DataFunction> f;
  try {
    jf = jet_file_from_json(in);
    if (in.contains("f")) f = DataFunction::parse(in.at("f").get<std::string>(), 1);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const ExtensionParams& p = jf.params;
  run.progress("extension with K = " + std::to_string(p.K) + ", D = " + std::to_string(p.D));
  const double step = 1.0 / 256;
  const Axis neg{-1.25, step, 321};  // [-1.25, 0]
  const GridFunction h = extend_half_space(jf.jet, p, neg);
  GridFunction out = h;
  if (f) {
    GridFunction plus({Axis{step, step, 512}});
    for (std::size_t i = 0; i < plus.size(); ++i) plus[i] = (*f)({plus.axis(0).at(i)});
    out = glue(h, plus);
  }
  run.write_grid("extension", out);

  const int max_order = std::min(8, p.K);
  const auto match = jet_match_errors(jf.jet, p, max_order);
  double worst = 0.0;
  for (double e : match) worst = std::max(worst, e);
  const ExtensionTail tail = extension_tail(jf.jet.B, p);
  const EmpiricalT T = empirical_T(p);
  const auto derivs = extension_derivatives(jf.jet, p, neg, 8);
  const SeminormFit sf = seminorm_fit(derivs, 0);
  bool zero_below = true;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.axis(0).at(i) <= -1.0 && h[i] != cplx(0.0)) zero_below = false;
  }
  const double tol = in.value("jet_match_tol", 1e-6);
  const bool pass = worst <= tol && zero_below;
  run.write_report("extend",
                   {{"params", {{"mu", p.mu}, {"nu", p.nu}, {"D", p.D}, {"r", p.r_exp}, {"K", p.K}, {"a", p.a()}}},
                    {"jet_match", {{"errors", match}, {"max", worst}, {"tolerance", tol}}},
                    {"zero_below_minus_one", zero_below},
                    {"tail", {{"q", tail.q}, {"bound", std::isfinite(tail.bound) ? json(tail.bound) : json(nullptr)}}},
                    {"empirical_T", {{"T", T.T}, {"worst_k", T.worst_k}, {"worst_alpha", T.worst_alpha}}},
                    {"seminorm", {{"C", sf.C}, {"D", sf.D}, {"mu", sf.mu}, {"residual", sf.residual},
                                  {"resolved", p.sigma(p.K) > 4 * step}}}},
                   pass);
  return pass ? kPass : kCheckFailed;
}

int solve_cmd(const Run& run) {
  const ModelProblem mp = run.problem();
  run.progress("solving " + mp.name());
  const GridFunction u = solve(mp);
  run.write_grid("solution", u);
  json body = {{"problem", mp.name()}, {"max_abs", u.max_abs()}, {"samples", u.size()}};
  if (u.meta().count("residual")) body["linear_residual"] = std::stod(u.meta().at("residual"));
  bool pass = true;
  if (mp.exact && u.dims() == 1) {
    double err = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double x = u.axis(0).at(i);
      if (x > 0.5 * mp.config.L) break;
      err = std::max(err, std::abs(u[i] - (*mp.exact)({x})));
    }
    body["exact_error"] = err;
    pass = err <= 1e-6;
  }
  run.write_report("solve", body, pass);
  return pass ? kPass : kCheckFailed;
}

int verify_decay(const Run& run) {
  const ModelProblem mp = run.problem();
  const RunConfig& c = mp.config;
  const double p = c.decay_p.value_or(1.0 / mp.bvp.P.nu);
  run.progress("decay fit for " + mp.name());
  const GridFunction u = solve(mp);
  json fits = json::array();
  bool pass = true;
  for (const auto& d : solution_decay(u, c.decay_lo, c.decay_hi, p)) {
    fits.push_back({{"profile", d.profile}, {"epsilon", d.fit.epsilon}, {"residual", d.fit.residual}, {"p", d.fit.p},
                    {"window", {d.fit.lo, d.fit.hi}}});
    pass = pass && d.fit.epsilon > c.decay_eps_min && d.fit.residual <= c.decay_residual_max;
  }
  run.write_report("verify-decay",
                   {{"problem", mp.name()}, {"fits", fits}, {"eps_min", c.decay_eps_min},
                    {"residual_max", c.decay_residual_max}},
                   pass);
  return pass ? kPass : kCheckFailed;
}

int report(const Run& run) {
  const ModelProblem mp = run.problem();
  run.progress("full regularity verification for " + mp.name());
  const RegularityReport rep = verify_regularity(mp);
  if (rep.solution.size() > 0) run.write_grid("solution", rep.solution);
  run.write_report("report", rep.to_json(), rep.pass());
  return rep.pass() ? kPass : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SG pseudo-differential calculus and half-space boundary problem toolkit"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--out", opt.out, "output directory")->capture_default_str();
  app.add_option("--seed", opt.seed, "seed for randomized grids");
  app.add_flag("--quiet", opt.quiet, "suppress progress messages");
  app.fallthrough();

  const std::vector<std::pair<std::string, std::string>> commands{
      {"check-elliptic", "SG-ellipticity margin sweep of P"},
      {"check-ls", "proper ellipticity and Lopatinski-Shapiro sweep"},
      {"parametrix", "parametrix terms and remainder decay"},
      {"boundary-reduce", "boundary symbol system and its left ellipticity"},
      {"extend", "Gelfand-Shilov extension of a boundary jet"},
      {"solve", "solve the model problem, write grids/solution.csv"},
      {"verify-decay", "solve and fit exponential decay"},
      {"report", "full regularity report"}};
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("input", opt.input, "problem or jet JSON file")->required();
    subs[name] = s;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const Run run(opt);
  try {
    if (subs["check-elliptic"]->parsed()) return check_elliptic(run);
    if (subs["check-ls"]->parsed()) return check_ls(run);
    if (subs["parametrix"]->parsed()) return parametrix_cmd(run);
    if (subs["boundary-reduce"]->parsed()) return boundary_reduce(run);
    if (subs["extend"]->parsed()) return extend(run);
    if (subs["solve"]->parsed()) return solve_cmd(run);
    if (subs["verify-decay"]->parsed()) return verify_decay(run);
    if (subs["report"]->parsed()) return report(run);
  } catch (const InputError& e) {
    std::cerr << "sgcalc: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "sgcalc: check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "sgcalc: internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
