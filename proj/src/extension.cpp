#include "sgcalc/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgcalc/errors.hpp"
#include "sgcalc/jet.hpp"
#include "sgcalc/parallel.hpp"

namespace sgcalc {

namespace {

// The bumps are exp(-k (s(1-s))^{-2r}) in s = -t/sigma_k, which makes the
// normalized profiles independent of D and mu.
double profile(int k, double r, double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-k * std::pow(s * (1.0 - s), -2.0 * r));
}

// Below e^{-700} the profile is negligible and heads into denormals; the
// integration range is clipped to where it is larger.
double lower_cut(int k, double r) {
  const double w = std::pow(k / 700.0, 1.0 / (2.0 * r));
  return w >= 0.25 ? 0.5 : 0.5 * (1.0 - std::sqrt(1.0 - 4.0 * w));
}

double panel(int k, double r, double lo, double hi, double abs_tol, int depth) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double s) { return profile(k, r, s); }, lo, hi, 0, 0.0, &err);
  err *= 0.5 * (hi - lo);  // Boost reports the error of the panel mapped onto [-1, 1]
  if (err <= abs_tol || err <= 1e-10 * std::abs(v) || depth >= 30) return v;
  const double mid = 0.5 * (lo + hi);
  return panel(k, r, lo, mid, 0.5 * abs_tol, depth + 1) + panel(k, r, mid, hi, 0.5 * abs_tol, depth + 1);
}

// Integral of the profile over [lo, hi] to absolute accuracy abs_tol.
double integrate(int k, double r, double lo, double hi, double abs_tol) {
  const double cut = lower_cut(k, r);
  lo = std::max(lo, cut);
  hi = std::min(hi, 1.0 - cut);
  if (hi <= lo) return 0.0;
  return panel(k, r, lo, hi, abs_tol, 0);
}

double normalization(int k, double r, double tol) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, double> cache;
  const auto key = std::make_tuple(k, r, tol);
  std::lock_guard lock(mutex);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double cut = lower_cut(k, r);
  const double z = cut >= 0.5 ? 0.0
                              : boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                    [&](double s) { return profile(k, r, s); }, cut, 1.0 - cut, 20, tol);
  if (!(z >= 1e-300)) {
    fail(ErrorCode::QuadratureFailure, "normalization integral of b_" + std::to_string(k) + " underflows");
  }
  cache.emplace(key, z);
  return z;
}

int effective(int k) { return k == 0 ? 1 : k; }

double log_factorial(int k) { return std::lgamma(k + 1.0); }

// Taylor coefficients of (t0 + h)^k / k!.
std::vector<double> monomial_taylor(int k, double t0, int order) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  for (int m = 0; m <= std::min(k, order); ++m) {
    c[static_cast<std::size_t>(m)] =
        std::exp(-log_factorial(m) - log_factorial(k - m)) * std::pow(t0, k - m);
  }
  return c;
}

}  // namespace

double ExtensionParams::a() const { return std::pow(16.0 / 3.0, 2.0 * r_exp); }

double ExtensionParams::sigma(int k) const {
  return 1.0 / (D * std::pow(static_cast<double>(effective(k)), mu - 1.0));
}

void ExtensionParams::validate() const {
  if (!(mu > 1.0)) fail(ErrorCode::InvalidArgument, "extension needs mu > 1");
  if (!(nu > 0.0)) fail(ErrorCode::InvalidArgument, "extension needs nu > 0");
  if (!(D >= 1.0)) fail(ErrorCode::InvalidArgument, "extension needs D >= 1");
  if (!(r_exp > 0.0) || !(1.0 / (2.0 * r_exp) < mu - 1.0)) {
    fail(ErrorCode::InvalidArgument, "extension needs 1/(2r) < mu - 1");
  }
  if (K < 1) fail(ErrorCode::InvalidArgument, "extension needs K >= 1");
  if (!(quad_tol > 0.0)) fail(ErrorCode::InvalidArgument, "quadrature tolerance must be positive");
}

double ExtensionParams::proof_D(double B, double r_exp) {
  const double a = std::pow(16.0 / 3.0, 2.0 * r_exp);
  return std::max(1.0, 2.0 * B * std::exp(a + 1.0));
}

GridFunction BoundaryJet::derivative(int k) const {
  if (!boundary) fail(ErrorCode::InvalidArgument, "scalar jets have no boundary grid");
  return GridFunction({*boundary}, values.at(static_cast<std::size_t>(k)));
}

void BoundaryJet::check_growth(double mu) const {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].size() != points()) fail(ErrorCode::InvalidArgument, "jet sample count mismatch");
    const double log_bound = (k + 1.0) * std::log(B) + mu * log_factorial(static_cast<int>(k));
    for (const cplx& v : values[k]) {
      if (std::abs(v) > 0.0 && std::log(std::abs(v)) > log_bound + 1e-12) {
        fail(ErrorCode::JetGrowthViolation,
             "jet order " + std::to_string(k) + " exceeds B^{k+1} (k!)^mu with B = " + std::to_string(B));
      }
    }
  }
}

BoundaryJet BoundaryJet::scalar(std::vector<cplx> jets, double B) {
  BoundaryJet j;
  j.B = B;
  for (const cplx& v : jets) j.values.push_back({v});
  return j;
}

double dzanasija_b(int k, double t, const ExtensionParams& p) {
  if (k < 1) fail(ErrorCode::InvalidArgument, "b_k needs k >= 1");
  const double sigma = p.sigma(k);
  if (t <= -sigma || t >= 0.0) return 0.0;
  return profile(k, p.r_exp, -t / sigma);
}

double dzanasija_a(int k, double t, const ExtensionParams& p) {
  if (k < 0) fail(ErrorCode::InvalidArgument, "a_k needs k >= 0");
  const int ke = effective(k);
  const double sigma = p.sigma(ke);
  const double s = std::abs(t) / sigma;
  if (s >= 1.0) return 0.0;
  if (s == 0.0) return 1.0;
  const double z = normalization(ke, p.r_exp, p.quad_tol);
  // The profile is symmetric in s <-> 1 - s; integrate over the shorter side.
  if (s <= 0.5) return 1.0 - integrate(ke, p.r_exp, 0.0, s, p.quad_tol * z) / z;
  return integrate(ke, p.r_exp, 0.0, 1.0 - s, p.quad_tol * z) / z;
}

namespace {

// d^m a_k/dt^m for m >= 1 with d[0] supplied by the caller.
std::vector<double> a_derivatives(int k, double t, double value, int order, const ExtensionParams& p) {
  std::vector<double> d(static_cast<std::size_t>(order) + 1, 0.0);
  d[0] = value;
  const int ke = effective(k);
  const double sigma = p.sigma(ke);
  const double s = std::abs(t) / sigma;
  if (order == 0 || s <= 0.0 || s >= 1.0) return d;
  const double z = normalization(ke, p.r_exp, p.quad_tol);
  // With A(s) = a_k(-sigma s): A' = -beta/Z, and d/dt = -(1/sigma) d/ds on t < 0.
  const int m = order - 1;
  const Jet h = Jet::variable(1, m, 0, s);
  const Jet u = h * (Jet::constant(1, m, 1.0) - h);
  const Jet w = u.compose(taylor_pow(u.value(), -2.0 * p.r_exp, m)) * static_cast<double>(-ke);
  const Jet beta = w.compose(taylor_exp(w.value(), m));
  const double mirror = t > 0.0 ? -1.0 : 1.0;
  for (int q = 1; q <= order; ++q) {
    const std::vector<int> g{q - 1};
    d[static_cast<std::size_t>(q)] = std::pow(-mirror / sigma, q) * (-beta.derivative(g) / z);
  }
  return d;
}

// Leibniz rule for a_k(t) t^k / k!.
std::vector<double> term_derivatives(int k, double t, double value, int order, const ExtensionParams& p) {
  const auto da = a_derivatives(k, t, value, order, p);
  const auto mt = monomial_taylor(k, t, order);
  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  for (int q = 0; q <= order; ++q) {
    double binom = 1.0;
    double acc = 0.0;
    for (int j = 0; j <= q; ++j) {
      // d^j (t^k/k!) = j! mt[j]
      acc += binom * da[static_cast<std::size_t>(q - j)] * std::exp(log_factorial(j)) * mt[static_cast<std::size_t>(j)];
      binom = binom * (q - j) / (j + 1);
    }
    out[static_cast<std::size_t>(q)] = acc;
  }
  return out;
}

// a_k at every sample of xn by cumulative quadrature in s = |t|/sigma_k.
std::vector<double> a_on_axis(int k, const Axis& xn, const ExtensionParams& p) {
  const int ke = effective(k);
  const double sigma = p.sigma(ke);
  const double z = normalization(ke, p.r_exp, p.quad_tol);
  std::vector<std::pair<double, std::size_t>> order;
  std::vector<double> out(xn.count, 0.0);
  for (std::size_t j = 0; j < xn.count; ++j) {
    const double s = std::abs(xn.at(j)) / sigma;
    if (s == 0.0) out[j] = 1.0;
    if (s > 0.0 && s < 1.0) order.emplace_back(std::min(s, 1.0 - s), j);
  }
  std::sort(order.begin(), order.end());
  double prev = 0.0;
  double acc = 0.0;
  for (const auto& [u, j] : order) {
    acc += integrate(ke, p.r_exp, prev, u, p.quad_tol * z * (u - prev));
    prev = u;
    const double s = std::abs(xn.at(j)) / sigma;
    out[j] = s <= 0.5 ? 1.0 - acc / z : acc / z;
  }
  return out;
}

}  // namespace

std::vector<double> dzanasija_a_derivatives(int k, double t, int order, const ExtensionParams& p) {
  return a_derivatives(k, t, dzanasija_a(k, t, p), order, p);
}

std::vector<double> extension_term_derivatives(int k, double t, int order, const ExtensionParams& p) {
  return term_derivatives(k, t, dzanasija_a(k, t, p), order, p);
}

std::vector<GridFunction> extension_derivatives(const BoundaryJet& jet, const ExtensionParams& p, const Axis& xn,
                                                int order) {
  if (jet.n() != 1) fail(ErrorCode::InvalidArgument, "extension_derivatives handles n = 1 jets");
  p.validate();
  if (jet.K() < p.K) fail(ErrorCode::InvalidArgument, "jet is shorter than K");
  if (xn.count == 0 || xn.end() > 0.0 || xn.start > 0.0) {
    fail(ErrorCode::InvalidArgument, "extension grid must lie in x_n <= 0");
  }
  jet.check_growth(p.mu);
  std::vector<std::vector<double>> a_vals;
  for (int k = 0; k <= p.K; ++k) a_vals.push_back(a_on_axis(k, xn, p));
  std::vector<GridFunction> out(static_cast<std::size_t>(order) + 1, GridFunction({xn}));
  parallel_for(xn.count, [&](std::size_t j) {
    const double t = xn.at(j);
    for (int k = 0; k <= p.K; ++k) {
      const double ak = a_vals[static_cast<std::size_t>(k)][j];
      if (ak == 0.0 && std::abs(t) >= p.sigma(k)) continue;
      const auto d = term_derivatives(k, t, ak, order, p);
      for (int q = 0; q <= order; ++q) out[static_cast<std::size_t>(q)][j] += jet.values[static_cast<std::size_t>(k)][0] * d[static_cast<std::size_t>(q)];
    }
  });
  return out;
}

GridFunction extend_half_space(const BoundaryJet& jet, const ExtensionParams& p, const Axis& xn) {
  p.validate();
  if (jet.K() < p.K) {
    fail(ErrorCode::InvalidArgument, "jet has " + std::to_string(jet.K() + 1) + " orders, K = " + std::to_string(p.K));
  }
  if (xn.count == 0 || xn.end() > 0.0 || xn.start > 0.0) {
    fail(ErrorCode::InvalidArgument, "extension grid must lie in x_n <= 0");
  }
  jet.check_growth(p.mu);

  // phi_k(t) = a_k(t) t^k / k! is shared by all normal lines.
  const std::size_t m = xn.count;
  const std::size_t terms = static_cast<std::size_t>(p.K) + 1;
  std::vector<double> phi(terms * m, 0.0);
  parallel_for(terms, [&](std::size_t k) {
    const auto ak = a_on_axis(static_cast<int>(k), xn, p);
    for (std::size_t j = 0; j < m; ++j) {
      if (ak[j] != 0.0) phi[k * m + j] = ak[j] * std::exp(-log_factorial(static_cast<int>(k))) * std::pow(xn.at(j), static_cast<int>(k));
    }
  });

  std::vector<Axis> axes;
  if (jet.boundary) axes.push_back(*jet.boundary);
  axes.push_back(xn);
  GridFunction h(axes);
  const std::size_t lines = jet.points();
  parallel_for(lines, [&](std::size_t i) {
    for (std::size_t j = 0; j < m; ++j) {
      cplx v = 0.0;
      for (std::size_t k = 0; k < terms; ++k) v += jet.values[k][i] * phi[k * m + j];
      h[i * m + j] = v;
    }
  });
  h.meta()["source"] = "extend_half_space";
  h.meta()["K"] = std::to_string(p.K);
  return h;
}

GridFunction glue(const GridFunction& h, const GridFunction& f_plus) {
  if (h.dims() != f_plus.dims()) fail(ErrorCode::InvalidArgument, "glue needs grids of equal dimension");
  const std::size_t last = h.dims() - 1;
  const Axis& ah = h.axis(last);
  const Axis& af = f_plus.axis(last);
  const double tol = 1e-9 * std::abs(ah.step);
  if (std::abs(ah.step - af.step) > tol || std::abs(af.start - (ah.end() + ah.step)) > tol) {
    fail(ErrorCode::InvalidArgument, "glue needs f to continue the normal axis of h");
  }
  if (h.dims() == 2) {
    const Axis &b1 = h.axis(0), &b2 = f_plus.axis(0);
    if (b1.count != b2.count || std::abs(b1.start - b2.start) > tol || std::abs(b1.step - b2.step) > tol) {
      fail(ErrorCode::InvalidArgument, "glue needs a common boundary axis");
    }
  }
  std::vector<Axis> axes = h.axes();
  axes[last].count = ah.count + af.count;
  GridFunction g(axes);
  const std::size_t lines = h.dims() == 2 ? h.axis(0).count : 1;
  const std::size_t m = axes[last].count;
  for (std::size_t i = 0; i < lines; ++i) {
    for (std::size_t j = 0; j < ah.count; ++j) g[i * m + j] = h[i * ah.count + j];
    for (std::size_t j = 0; j < af.count; ++j) g[i * m + ah.count + j] = f_plus[i * af.count + j];
  }
  g.meta() = h.meta();
  g.meta()["source"] = "glued extension";
  return g;
}

std::vector<double> jet_match_errors(const BoundaryJet& jet, const ExtensionParams& p, int max_order, double offset) {
  p.validate();
  if (max_order > p.K || max_order > jet.K()) fail(ErrorCode::InvalidArgument, "jet match order exceeds K");
  const double t = -(offset > 0.0 ? offset : 1e-9 * p.sigma(p.K));
  std::vector<std::vector<double>> basis;
  for (int k = 0; k <= p.K; ++k) basis.push_back(extension_term_derivatives(k, t, max_order, p));
  std::vector<double> err(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (std::size_t i = 0; i < jet.points(); ++i) {
    for (int l = 0; l <= max_order; ++l) {
      cplx v = 0.0;
      for (int k = 0; k <= p.K; ++k) {
        v += jet.values[static_cast<std::size_t>(k)][i] * basis[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
      }
      const cplx want = jet.values[static_cast<std::size_t>(l)][i];
      const double e = std::abs(v - want) / std::max(1.0, std::abs(want));
      err[static_cast<std::size_t>(l)] = std::max(err[static_cast<std::size_t>(l)], e);
    }
  }
  return err;
}

ExtensionTail extension_tail(double B, const ExtensionParams& p) {
  ExtensionTail t;
  t.q = std::exp(p.a()) * B / p.D;
  t.bound = t.q < 1.0 ? std::pow(t.q, p.K + 1) / (1.0 - t.q) : std::numeric_limits<double>::infinity();
  return t;
}

EmpiricalT empirical_T(const ExtensionParams& p, int k_max, int alpha_max, int samples) {
  p.validate();
  const double a = p.a();
  EmpiricalT best;
  double best_log = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    const double sigma = p.sigma(k);
    const double log_kk = k == 0 ? 0.0 : -k * (p.mu - 1.0) * std::log(static_cast<double>(k));
    for (int j = 1; j < samples; ++j) {
      const double t = -sigma * static_cast<double>(j) / samples;
      // d^alpha (a_k t^k) = k! d^alpha (a_k t^k / k!)
      const auto d = extension_term_derivatives(k, t, alpha_max, p);
      for (int alpha = 1; alpha <= alpha_max; ++alpha) {
        const double v = std::abs(d[static_cast<std::size_t>(alpha)]);
        if (v == 0.0) continue;
        const double log_v = std::log(v) + log_factorial(k);
        double log_base = (alpha + 1) * std::log(2.0) - k * std::log(p.D) + log_kk + alpha * std::log(p.D);
        if (k <= alpha) {
          log_base += a * k + p.mu * alpha * std::log(static_cast<double>(alpha));
        } else {
          log_base += a * (k + 1) + p.mu * alpha * std::log(static_cast<double>(k));
        }
        const double need = (log_v - log_base) / alpha;
        if (need > best_log) {
          best_log = need;
          best.worst_k = k;
          best.worst_alpha = alpha;
        }
      }
    }
  }
  best.T = std::exp(best_log);
  return best;
}

}  // namespace sgcalc
