#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "sgcalc/boundary.hpp"
#include "sgcalc/ellipticity.hpp"
#include "sgcalc/fit.hpp"
#include "sgcalc/grid_function.hpp"
#include "sgcalc/problem.hpp"

namespace sgcalc {

struct NamedDecay {
  std::string profile;  // "x" (n = 1), "x_n" or "x'" (n = 2)
  DecayFit fit;
};

/// Measurable stand-ins for "u is Gelfand-Shilov of index theta": margins of
/// the symbol checks, exponential decay fits and seminorm growth fits of the
/// computed solution. Every pass flag is recomputable from the stored numbers
/// and the echoed config.
struct RegularityReport {
  std::string problem;
  std::string label;
  RunConfig config;
  double theta = 1.0;
  double decay_p = 1.0;

  std::optional<EllipticReport> elliptic;
  std::optional<ProperReport> proper;
  std::optional<LSReport> ls;
  std::optional<LeftEllipticReport> system;
  std::vector<NamedDecay> decay;
  std::optional<SeminormFit> seminorm;
  /// n = 1: max |u_L - u_2L| on [0, L/2]; n = 2: boundary data at the edges
  /// of the tangential grid relative to its maximum.
  std::optional<double> truncation;

  std::map<std::string, bool> passes;
  std::map<std::string, std::string> errors;
  GridFunction solution;

  bool pass() const;
  nlohmann::json to_json() const;
};

/// Runs every check; failures of one module are recorded and the remaining
/// checks still run.
RegularityReport verify_regularity(const ModelProblem& problem);

/// Solution by the solver matching the problem (half-line for n = 1,
/// constant-coefficient half-plane for n = 2).
GridFunction solve(const ModelProblem& problem);

/// Decay fits of a solution: |u| along x (n = 1), or the sup over x' as a
/// function of x_n and the sup over x_n as a function of x' >= 0 (n = 2).
std::vector<NamedDecay> solution_decay(const GridFunction& u, double lo, double hi, double p);

/// Finite-difference derivatives 0..beta_max of a 1-D solution (fourth-order
/// central stencils; each order drops two samples at each end).
std::vector<GridFunction> stencil_derivatives(const GridFunction& u, int beta_max);

/// Versions of the linked libraries and the compiler.
nlohmann::json tool_versions();

}  // namespace sgcalc
