#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sgcalc/ellipticity.hpp"
#include "sgcalc/extension.hpp"
#include "sgcalc/grid.hpp"

namespace sgcalc {

/// Closed-form data in the prefix syntax of parse_prefix, plus the heads
/// exp, log, sqrt, sin, cos, sinh, cosh, tanh and sech. Only x variables are
/// allowed. Evaluation only; no derivatives.
class DataFunction {
 public:
  DataFunction();  // identically zero
  static DataFunction parse(std::string_view text, int dim);

  cplx operator()(const std::vector<double>& x) const;
  bool is_zero() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Thresholds and grids for the solvers and the regularity harness.
struct RunConfig {
  std::uint64_t seed = 0;
  RadialGridSpec grid;
  double R = 1.0;
  double elliptic_C_min = 1e-6;
  double ls_C_min = 1e-4;
  double left_elliptic_min = 1e-2;
  int parametrix_N = 3;
  double parametrix_B = 1.0;
  int boundary_N = 1;

  // half-line solver
  double L = 20.0;
  std::size_t points = 2001;
  // half-plane solver
  std::size_t tangential_points = 2048;
  double half_width = 20.0;
  double normal_length = 10.0;
  std::size_t normal_points = 1001;

  double decay_lo = 2.0;
  double decay_hi = 8.0;
  std::optional<double> decay_p;  // default 1/nu
  double decay_eps_min = 0.0;
  double decay_residual_max = 0.1;
  /// Truncation check: |u| at L/2 relative to max |u|.
  double truncation_max = 1e-8;

  int seminorm_alpha_max = 4;
  int seminorm_beta_max = 4;
  std::optional<double> theta;  // default mu + nu - 1
  double seminorm_slack = 0.5;

  ExtensionParams extension;

  void apply(const nlohmann::json& overrides);
  nlohmann::json to_json() const;
};

struct ModelProblem {
  BVProblem bvp;
  DataFunction f;
  std::vector<DataFunction> g;  // one per boundary row, functions of x'
  std::optional<DataFunction> exact;
  double mu = 1.0;
  RunConfig config;
  std::string label;  // "demo" for the radial exterior reduction

  const std::string& name() const { return bvp.name; }
  int n() const { return bvp.n(); }
};

/// {name, n, P: {orders, nu, coeffs: {"a1 a2": prefix}} or P: {orders, symbol},
///  boundary: [{order, weight, B: [prefix...]}], data: {f, g: [...], exact},
///  mu, label, config: {...}}
ModelProblem model_problem_from_json(const nlohmann::json& j);
ModelProblem load_model_problem(const std::string& path);

/// Jet file {B, mu, nu, D?, K?, r?, jets: [...]} for a scalar (n = 1) jet;
/// jets may be complex pairs [re, im]. A missing D means the proof's rule.
struct JetFile {
  BoundaryJet jet;
  ExtensionParams params;
};
JetFile jet_file_from_json(const nlohmann::json& j);

nlohmann::json read_json(const std::string& path);

}  // namespace sgcalc
