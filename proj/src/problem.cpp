#include "sgcalc/problem.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "sgcalc/errors.hpp"

namespace sgcalc {

enum class DataOp { Const, Var, Add, Mul, Sub, Neg, Div, Pow, Bracket, Exp, Log, Sqrt, Sin, Cos, Sinh, Cosh, Tanh, Sech };

struct DataFunction::Node {
  DataOp op = DataOp::Const;
  cplx value = 0.0;
  int index = 0;
  double power = 1.0;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using NodePtr = std::shared_ptr<const DataFunction::Node>;

NodePtr make(DataOp op, std::vector<NodePtr> args = {}) {
  auto n = std::make_shared<DataFunction::Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

class DataParser {
 public:
  DataParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse_all() {
    NodePtr r = parse();
    skip_ws();
    if (pos_ != text_.size()) error("trailing input");
    return r;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view atom() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) error("expected atom");
    return text_.substr(start, pos_ - start);
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) error("bad number '" + std::string(tok) + "'");
    return v;
  }

  bool at_close() {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == ')';
  }

  NodePtr constant(cplx v) {
    auto n = std::make_shared<DataFunction::Node>();
    n->value = v;
    return n;
  }

  NodePtr parse() {
    skip_ws();
    if (pos_ >= text_.size()) error("unexpected end of input");
    if (text_[pos_] != '(') {
      const std::string_view tok = atom();
      if (tok == "i") return constant(cplx(0.0, 1.0));
      if (tok == "pi") return constant(std::numbers::pi);
      return constant(number(tok));
    }
    ++pos_;
    const std::string head(atom());
    NodePtr result;
    static const std::map<std::string, DataOp> unary{
        {"neg", DataOp::Neg},   {"exp", DataOp::Exp},   {"log", DataOp::Log},   {"sqrt", DataOp::Sqrt},
        {"sin", DataOp::Sin},   {"cos", DataOp::Cos},   {"sinh", DataOp::Sinh}, {"cosh", DataOp::Cosh},
        {"tanh", DataOp::Tanh}, {"sech", DataOp::Sech}};
    if (head == "c") {
      const double re = number(atom());
      const double im = number(atom());
      result = constant(cplx(re, im));
    } else if (head == "var") {
      if (atom() != "x") error("data functions depend on x only");
      const double i = number(atom());
      if (i != std::floor(i) || i < 1 || i > dim_) error("variable index out of range");
      auto n = std::make_shared<DataFunction::Node>();
      n->op = DataOp::Var;
      n->index = static_cast<int>(i) - 1;
      result = n;
    } else if (head == "bracket") {
      const std::string_view g = atom();
      if (g != "x" && g != "x'") error("data brackets are over x or x'");
      auto n = std::make_shared<DataFunction::Node>();
      n->op = DataOp::Bracket;
      n->index = g == "x" ? dim_ : dim_ - 1;  // number of leading coordinates
      if (!at_close()) n->power = number(atom());
      result = n;
    } else if (head == "pow") {
      NodePtr base = parse();
      auto n = std::make_shared<DataFunction::Node>(*make(DataOp::Pow, {base}));
      n->power = number(atom());
      result = n;
    } else if (head == "add" || head == "mul") {
      std::vector<NodePtr> args;
      while (!at_close()) args.push_back(parse());
      result = make(head == "add" ? DataOp::Add : DataOp::Mul, std::move(args));
    } else if (head == "sub" || head == "div") {
      NodePtr a = parse();
      NodePtr b = parse();
      result = make(head == "sub" ? DataOp::Sub : DataOp::Div, {a, b});
    } else if (auto it = unary.find(head); it != unary.end()) {
      result = make(it->second, {parse()});
    } else {
      error("unknown operator '" + head + "'");
    }
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != ')') error("expected ')'");
    ++pos_;
    return result;
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

cplx evaluate(const DataFunction::Node& n, const std::vector<double>& x) {
  auto arg = [&](std::size_t i) { return evaluate(*n.args[i], x); };
  switch (n.op) {
    case DataOp::Const: return n.value;
    case DataOp::Var: return x.at(static_cast<std::size_t>(n.index));
    case DataOp::Add: {
      cplx s = 0.0;
      for (std::size_t i = 0; i < n.args.size(); ++i) s += arg(i);
      return s;
    }
    case DataOp::Mul: {
      cplx s = 1.0;
      for (std::size_t i = 0; i < n.args.size(); ++i) s *= arg(i);
      return s;
    }
    case DataOp::Sub: return arg(0) - arg(1);
    case DataOp::Neg: return -arg(0);
    case DataOp::Div: {
      const cplx d = arg(1);
      if (std::abs(d) < 1e-300) fail(ErrorCode::PoleHit, "division by zero in data function");
      return arg(0) / d;
    }
    case DataOp::Pow: {
      const cplx b = arg(0);
      if (n.power == std::floor(n.power)) {
        if (n.power < 0 && std::abs(b) < 1e-300) fail(ErrorCode::PoleHit, "negative power of zero in data function");
        cplx r = 1.0;
        const int e = static_cast<int>(std::abs(n.power));
        for (int k = 0; k < e; ++k) r *= b;
        return n.power < 0 ? 1.0 / r : r;
      }
      return std::pow(b, n.power);
    }
    case DataOp::Bracket: {
      double s = 1.0;
      for (int i = 0; i < n.index; ++i) s += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
      return std::pow(s, 0.5 * n.power);
    }
    case DataOp::Exp: return std::exp(arg(0));
    case DataOp::Log: return std::log(arg(0));
    case DataOp::Sqrt: return std::sqrt(arg(0));
    case DataOp::Sin: return std::sin(arg(0));
    case DataOp::Cos: return std::cos(arg(0));
    case DataOp::Sinh: return std::sinh(arg(0));
    case DataOp::Cosh: return std::cosh(arg(0));
    case DataOp::Tanh: return std::tanh(arg(0));
    case DataOp::Sech: {
      // 2 e^{-|z|} / (1 + e^{-2|z|}) for real arguments avoids overflow
      const cplx z = arg(0);
      if (z.imag() == 0.0) {
        const double a = std::abs(z.real());
        return 2.0 * std::exp(-a) / (1.0 + std::exp(-2.0 * a));
      }
      return 1.0 / std::cosh(z);
    }
  }
  return 0.0;
}

int int_field(const nlohmann::json& j, const char* key, int def) { return j.contains(key) ? j.at(key).get<int>() : def; }

std::string expr_text(const nlohmann::json& j) {
  if (j.is_number()) {
    std::ostringstream os;
    os.precision(17);
    os << j.get<double>();
    return os.str();
  }
  return j.get<std::string>();
}

}  // namespace

DataFunction::DataFunction() : root_(std::make_shared<Node>()), text_("0") {}

DataFunction DataFunction::parse(std::string_view text, int dim) {
  DataFunction f;
  f.root_ = DataParser(text, dim).parse_all();
  f.text_ = std::string(text);
  return f;
}

cplx DataFunction::operator()(const std::vector<double>& x) const { return evaluate(*root_, x); }

bool DataFunction::is_zero() const { return root_->op == DataOp::Const && root_->value == cplx(0.0); }

void RunConfig::apply(const nlohmann::json& o) {
  if (!o.is_object()) fail(ErrorCode::InvalidArgument, "config overrides must be an object");
  auto get = [&](const char* key, auto& field) {
    if (o.contains(key)) field = o.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("seed", seed);
  if (o.contains("grid")) {
    const auto& g = o.at("grid");
    if (g.contains("r_min")) grid.r_min = g.at("r_min").get<double>();
    if (g.contains("r_max")) grid.r_max = g.at("r_max").get<double>();
    if (g.contains("radii")) grid.radii = g.at("radii").get<int>();
    if (g.contains("rays")) grid.rays = g.at("rays").get<int>();
  }
  get("R", R);
  get("elliptic_C_min", elliptic_C_min);
  get("ls_C_min", ls_C_min);
  get("left_elliptic_min", left_elliptic_min);
  get("parametrix_N", parametrix_N);
  get("parametrix_B", parametrix_B);
  get("boundary_N", boundary_N);
  get("L", L);
  get("points", points);
  get("tangential_points", tangential_points);
  get("half_width", half_width);
  get("normal_length", normal_length);
  get("normal_points", normal_points);
  get("decay_lo", decay_lo);
  get("decay_hi", decay_hi);
  if (o.contains("decay_p") && !o.at("decay_p").is_null()) decay_p = o.at("decay_p").get<double>();
  get("decay_eps_min", decay_eps_min);
  get("decay_residual_max", decay_residual_max);
  get("truncation_max", truncation_max);
  get("seminorm_alpha_max", seminorm_alpha_max);
  get("seminorm_beta_max", seminorm_beta_max);
  if (o.contains("theta") && !o.at("theta").is_null()) theta = o.at("theta").get<double>();
  get("seminorm_slack", seminorm_slack);
  if (o.contains("extension")) {
    const auto& e = o.at("extension");
    if (e.contains("mu")) extension.mu = e.at("mu").get<double>();
    if (e.contains("nu")) extension.nu = e.at("nu").get<double>();
    if (e.contains("D")) extension.D = e.at("D").get<double>();
    if (e.contains("r")) extension.r_exp = e.at("r").get<double>();
    if (e.contains("K")) extension.K = e.at("K").get<int>();
    if (e.contains("quad_tol")) extension.quad_tol = e.at("quad_tol").get<double>();
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["grid"] = grid;
  j["R"] = R;
  j["elliptic_C_min"] = elliptic_C_min;
  j["ls_C_min"] = ls_C_min;
  j["left_elliptic_min"] = left_elliptic_min;
  j["parametrix_N"] = parametrix_N;
  j["parametrix_B"] = parametrix_B;
  j["boundary_N"] = boundary_N;
  j["L"] = L;
  j["points"] = points;
  j["tangential_points"] = tangential_points;
  j["half_width"] = half_width;
  j["normal_length"] = normal_length;
  j["normal_points"] = normal_points;
  j["decay_lo"] = decay_lo;
  j["decay_hi"] = decay_hi;
  j["decay_p"] = decay_p ? nlohmann::json(*decay_p) : nlohmann::json(nullptr);
  j["decay_eps_min"] = decay_eps_min;
  j["decay_residual_max"] = decay_residual_max;
  j["truncation_max"] = truncation_max;
  j["seminorm_alpha_max"] = seminorm_alpha_max;
  j["seminorm_beta_max"] = seminorm_beta_max;
  j["theta"] = theta ? nlohmann::json(*theta) : nlohmann::json(nullptr);
  j["seminorm_slack"] = seminorm_slack;
  j["extension"] = {{"mu", extension.mu}, {"nu", extension.nu}, {"D", extension.D},
                    {"r", extension.r_exp}, {"K", extension.K}, {"quad_tol", extension.quad_tol}};
  return j;
}

ModelProblem model_problem_from_json(const nlohmann::json& j) {
  try {
    ModelProblem mp;
    const int n = j.at("n").get<int>();
    if (n != 1 && n != 2) fail(ErrorCode::InvalidArgument, "model problems have n = 1 or 2");
    mp.bvp.name = j.value("name", std::string("problem"));
    mp.label = j.value("label", std::string());
    mp.mu = j.value("mu", 1.0);

    const auto& P = j.at("P");
    const auto orders = P.at("orders").get<std::vector<double>>();
    if (orders.size() != 2) fail(ErrorCode::InvalidArgument, "P.orders must be [m1, m2]");
    const SGOrder order{orders[0], orders[1]};
    const double nu = P.value("nu", 1.0);
    if (P.contains("symbol")) {
      mp.bvp.P = DiffSymbol::from_expr(parse_prefix(expr_text(P.at("symbol")), n), n, order, nu);
    } else {
      DiffSymbol s;
      s.n = n;
      s.order = order;
      s.nu = nu;
      for (const auto& [key, value] : P.at("coeffs").items()) {
        std::istringstream is(key);
        MultiIndex alpha;
        int a = 0;
        while (is >> a) alpha.push_back(a);
        if (static_cast<int>(alpha.size()) != n) fail(ErrorCode::InvalidArgument, "coefficient index '" + key + "' needs n entries");
        const Expr c = parse_prefix(expr_text(value), n);
        if (c.depends_on_any(VarKind::Xi)) fail(ErrorCode::InvalidArgument, "coefficients depend on x only");
        s.coeffs[alpha] = c;
      }
      mp.bvp.P = s;
    }

    for (const auto& row : j.at("boundary")) {
      BoundaryRow r;
      r.m1j = int_field(row, "order", 0);
      r.m2j = row.value("weight", 0.0);
      for (const auto& b : row.at("B")) r.B.push_back(parse_prefix(expr_text(b), n));
      mp.bvp.rows.push_back(std::move(r));
    }
    mp.bvp.validate();

    const auto data = j.value("data", nlohmann::json::object());
    if (data.contains("f")) mp.f = DataFunction::parse(expr_text(data.at("f")), n);
    if (data.contains("g")) {
      for (const auto& g : data.at("g")) mp.g.push_back(DataFunction::parse(expr_text(g), std::max(1, n - 1)));
    }
    while (mp.g.size() < mp.bvp.rows.size()) mp.g.emplace_back();
    if (mp.g.size() != mp.bvp.rows.size()) fail(ErrorCode::InvalidArgument, "one boundary datum per boundary row");
    if (data.contains("exact")) mp.exact = DataFunction::parse(expr_text(data.at("exact")), n);

    if (j.contains("config")) mp.config.apply(j.at("config"));
    return mp;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("problem file: ") + e.what());
  }
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, path + ": " + e.what());
  }
}

ModelProblem load_model_problem(const std::string& path) { return model_problem_from_json(read_json(path)); }

JetFile jet_file_from_json(const nlohmann::json& j) {
  try {
    JetFile out;
    const double B = j.at("B").get<double>();
    std::vector<cplx> jets;
    for (const auto& v : j.at("jets")) {
      if (v.is_array()) jets.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
      else jets.emplace_back(v.get<double>(), 0.0);
    }
    ExtensionParams& p = out.params;
    p.mu = j.value("mu", p.mu);
    p.nu = j.value("nu", p.nu);
    p.r_exp = j.value("r", p.r_exp);
    p.K = j.value("K", static_cast<int>(jets.size()) - 1);
    p.quad_tol = j.value("quad_tol", p.quad_tol);
    p.D = j.contains("D") ? j.at("D").get<double>() : ExtensionParams::proof_D(B, p.r_exp);
    p.validate();
    out.jet = BoundaryJet::scalar(std::move(jets), B);
    return out;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("jet file: ") + e.what());
  }
}

}  // namespace sgcalc
