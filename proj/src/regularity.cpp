#include "sgcalc/regularity.hpp"

#include <cmath>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <fftw3.h>

#include "sgcalc/calculus.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"
#include "sgcalc/solvers.hpp"

namespace sgcalc {

namespace {

nlohmann::json decay_json(const DecayFit& d) {
  return {{"epsilon", d.epsilon}, {"log_C", d.log_C}, {"residual", d.residual}, {"p", d.p},
          {"window", {d.lo, d.hi}}, {"points", d.points}};
}

nlohmann::json seminorm_json(const SeminormFit& s) {
  return {{"C", s.C},   {"D", s.D},
          {"mu", s.mu}, {"nu", s.nu},
          {"residual", s.residual}, {"alpha_max", s.alpha_max},
          {"beta_max", s.beta_max}, {"sup", s.sup}};
}

std::string describe(const std::exception& e) {
  // Error messages already carry their code.
  if (dynamic_cast<const Error*>(&e)) return e.what();
  return std::string("internal: ") + e.what();
}

GridFunction line_at_origin(const GridFunction& u) {
  if (u.dims() == 1) return u;
  const Axis& t = u.axis(0);
  const auto i0 = static_cast<std::size_t>(std::lround(-t.start / t.step));
  return u.row(std::min(i0, t.count - 1));
}

}  // namespace

GridFunction solve(const ModelProblem& problem) {
  return problem.n() == 1 ? solve_halfline(problem) : solve_halfplane_ct(problem);
}

std::vector<GridFunction> stencil_derivatives(const GridFunction& u, int beta_max) {
  if (u.dims() != 1) fail(ErrorCode::InvalidArgument, "stencil_derivatives needs a 1-D grid function");
  std::vector<GridFunction> out{u};
  for (int b = 1; b <= beta_max; ++b) {
    const GridFunction& prev = out.back();
    const Axis& ax = prev.axis(0);
    if (ax.count < 5) fail(ErrorCode::InvalidArgument, "grid too short for derivative order " + std::to_string(b));
    GridFunction d({Axis{ax.at(2), ax.step, ax.count - 4}});
    for (std::size_t i = 0; i + 4 < ax.count; ++i) {
      d[i] = (prev[i] - 8.0 * prev[i + 1] + 8.0 * prev[i + 3] - prev[i + 4]) / (12.0 * ax.step);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<NamedDecay> solution_decay(const GridFunction& u, double lo, double hi, double p) {
  if (u.dims() == 1) return {{"x", decay_fit(u, lo, hi, p)}};
  const Axis& t = u.axis(0);
  const Axis& n = u.axis(1);
  GridFunction normal({n});
  for (std::size_t j = 0; j < n.count; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < t.count; ++i) m = std::max(m, std::abs(u.at(i, j)));
    normal[j] = m;
  }
  const auto i0 = static_cast<std::size_t>(std::ceil(-t.start / t.step - 1e-9));
  GridFunction tangential({Axis{t.at(i0), t.step, t.count - i0}});
  for (std::size_t i = i0; i < t.count; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < n.count; ++j) m = std::max(m, std::abs(u.at(i, j)));
    tangential[i - i0] = m;
  }
  return {{"x_n", decay_fit(normal, lo, hi, p)}, {"x'", decay_fit(tangential, lo, hi, p)}};
}

nlohmann::json tool_versions() {
  return {{"sgcalc", "0.1.0"},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"boost", BOOST_LIB_VERSION},
          {"fftw", std::string(fftw_version)},
          {"compiler", __VERSION__}};
}

bool RegularityReport::pass() const {
  if (passes.empty()) return false;
  for (const auto& [name, ok] : passes) {
    if (!ok) return false;
  }
  return true;
}

nlohmann::json RegularityReport::to_json() const {
  nlohmann::json j;
  j["problem"] = problem;
  if (!label.empty()) j["label"] = label;
  j["theta"] = theta;
  j["decay_p"] = decay_p;
  j["elliptic"] = elliptic ? nlohmann::json(*elliptic) : nlohmann::json(nullptr);
  j["properly_elliptic"] = proper ? nlohmann::json(*proper) : nlohmann::json(nullptr);
  j["lopatinski_shapiro"] = ls ? nlohmann::json(*ls) : nlohmann::json(nullptr);
  j["left_elliptic"] = system ? nlohmann::json(*system) : nlohmann::json(nullptr);
  nlohmann::json d = nlohmann::json::array();
  for (const auto& nd : decay) {
    auto e = decay_json(nd.fit);
    e["profile"] = nd.profile;
    d.push_back(e);
  }
  j["decay"] = d;
  j["seminorm"] = seminorm ? seminorm_json(*seminorm) : nlohmann::json(nullptr);
  j["truncation"] = truncation ? nlohmann::json(*truncation) : nlohmann::json(nullptr);
  j["passes"] = passes;
  j["errors"] = errors;
  j["pass"] = pass();
  j["tool_versions"] = tool_versions();
  j["config"] = config.to_json();
  return j;
}

RegularityReport verify_regularity(const ModelProblem& problem) {
  RegularityReport rep;
  const RunConfig& c = problem.config;
  rep.problem = problem.name();
  rep.label = problem.label;
  rep.config = c;
  const DiffSymbol& P = problem.bvp.P;
  rep.theta = c.theta.value_or(problem.mu + P.nu - 1.0);
  rep.decay_p = c.decay_p.value_or(1.0 / P.nu);
  RadialGridSpec grid = c.grid;
  grid.seed = c.seed;

  // Independent checks; each task owns its slots, errors keyed by check name.
  std::array<std::string, 5> error;
  parallel_for(5, [&](std::size_t task) {
    try {
      switch (task) {
        case 0: {
          EllipticOptions eo;
          eo.C_min = c.elliptic_C_min;
          rep.elliptic = sg_elliptic_check(P, c.R, grid, eo);
          break;
        }
        case 1: rep.proper = properly_elliptic_check(P, c.R, grid); break;
        case 2: rep.ls = ls_check(problem.bvp, c.R, grid, c.ls_C_min); break;
        case 3: {
          const FormalSum b = parametrix(P, c.boundary_N, c.parametrix_B);
          const BoundarySystem sys = assemble_system(problem.bvp, b, c.boundary_N);
          rep.system = left_elliptic_check(sys, c.R, grid, c.left_elliptic_min);
          break;
        }
        case 4: {
          rep.solution = solve(problem);
          rep.decay = solution_decay(rep.solution, c.decay_lo, c.decay_hi, rep.decay_p);
          rep.seminorm = seminorm_fit(stencil_derivatives(line_at_origin(rep.solution), c.seminorm_beta_max),
                                      c.seminorm_alpha_max);
          if (problem.n() == 1) {
            ModelProblem wide = problem;
            wide.config.L = 2.0 * c.L;
            wide.config.points = 2 * c.points - 1;
            const GridFunction u2 = solve(wide);
            double diff = 0.0;
            for (std::size_t i = 0; i < rep.solution.size(); ++i) {
              if (rep.solution.axis(0).at(i) > 0.5 * c.L) break;
              diff = std::max(diff, std::abs(rep.solution[i] - u2[i]));
            }
            rep.truncation = diff / rep.solution.max_abs();
          } else {
            const Axis& t = rep.solution.axis(0);
            double edge = 0.0;
            double peak = 0.0;
            for (const auto& g : problem.g) {
              edge = std::max({edge, std::abs(g({t.start})), std::abs(g({t.end()}))});
              for (std::size_t i = 0; i < t.count; ++i) peak = std::max(peak, std::abs(g({t.at(i)})));
            }
            rep.truncation = peak > 0.0 ? edge / peak : 0.0;
          }
          break;
        }
      }
    } catch (const std::exception& e) {
      error[task] = describe(e);
    }
  });

  static const std::array<const char*, 5> names{"sg_elliptic", "properly_elliptic", "lopatinski_shapiro",
                                                "left_elliptic", "solution"};
  for (std::size_t t = 0; t < names.size(); ++t) {
    if (!error[t].empty()) rep.errors[names[t]] = error[t];
  }
  rep.passes["sg_elliptic"] = rep.elliptic && rep.elliptic->pass;
  rep.passes["properly_elliptic"] = rep.proper && rep.proper->pass;
  rep.passes["lopatinski_shapiro"] = rep.ls && rep.ls->pass;
  rep.passes["left_elliptic"] = rep.system && rep.system->pass;
  bool decay_ok = !rep.decay.empty();
  for (const auto& d : rep.decay) {
    decay_ok = decay_ok && d.fit.epsilon > c.decay_eps_min && d.fit.residual <= c.decay_residual_max;
  }
  rep.passes["decay"] = error[4].empty() && decay_ok;
  rep.passes["seminorm"] = rep.seminorm && rep.seminorm->mu <= rep.theta + c.seminorm_slack &&
                           rep.seminorm->nu <= rep.theta + c.seminorm_slack;
  rep.passes["truncation"] = rep.truncation && *rep.truncation <= c.truncation_max;
  return rep;
}

}  // namespace sgcalc
