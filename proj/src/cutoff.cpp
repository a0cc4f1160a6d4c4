#include "sgcalc/cutoff.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sgcalc/errors.hpp"

namespace sgcalc {

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, 1e-14);
}

std::vector<double> real_xi(const Point& p) {
  std::vector<double> xi;
  for (const cplx& c : p.xi) {
    if (c.imag() != 0.0) fail(ErrorCode::InvalidPoint, "cutoff needs real covariables");
    xi.push_back(c.real());
  }
  return xi;
}

}  // namespace

GevreyCutoff::GevreyCutoff(double B, double theta_c) : B_(B), theta_c_(theta_c) {
  if (!(B > 0.0)) fail(ErrorCode::InvalidArgument, "cutoff radius must be positive");
  if (!(theta_c > 1.0)) fail(ErrorCode::InvalidArgument, "cutoff Gevrey index must exceed 1");
  norm_ = integrate([this](double s) { return bump(s); }, 0.0, 1.0);
  if (!(norm_ > 1e-300)) fail(ErrorCode::QuadratureFailure, "cutoff bump integral underflows");
}

double GevreyCutoff::bump(double s) const {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return std::exp(-std::pow(s * (1.0 - s), -1.0 / (theta_c_ - 1.0)));
}

double GevreyCutoff::primitive(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  // Integrate over the shorter side for accuracy near both ends.
  if (s <= 0.5) return integrate([this](double t) { return bump(t); }, 0.0, s) / norm_;
  return 1.0 - integrate([this](double t) { return bump(t); }, s, 1.0) / norm_;
}

std::vector<double> GevreyCutoff::profile_taylor(double s, int order) const {
  std::vector<double> t(static_cast<std::size_t>(order) + 1, 0.0);
  t[0] = primitive(s);
  if (order == 0 || s <= 0.0 || s >= 1.0) return t;
  // Taylor series of phi around s from u = s(1-s), w = u^{-1/(theta-1)}, phi = exp(-w).
  const int m = order - 1;
  const Jet h = Jet::variable(1, m, 0, s);
  const Jet u = h * (Jet::constant(1, m, 1.0) - h);
  const Jet w = u.compose(taylor_pow(u.value(), -1.0 / (theta_c_ - 1.0), m)) * -1.0;
  const Jet phi = w.compose(taylor_exp(w.value(), m));
  for (int k = 0; k <= m; ++k) {
    const std::vector<int> g{k};
    // H^{(k+1)}/(k+1)! = phi^{(k)}/(k! (k+1)) / norm
    t[static_cast<std::size_t>(k) + 1] = phi.coefficient(g) / (k + 1) / norm_;
  }
  return t;
}

double GevreyCutoff::radial(double rho) const { return primitive((rho - B_) / B_); }

double GevreyCutoff::operator()(const Point& p) const {
  const auto xi = real_xi(p);
  double r2 = 0.0;
  for (double v : p.x) r2 += v * v;
  for (double v : xi) r2 += v * v;
  return radial(std::sqrt(r2));
}

Jet GevreyCutoff::jet(const Point& p, int order) const {
  const auto xi = real_xi(p);
  const int n = p.dim();
  const int dims = 2 * n;
  std::vector<double> y(p.x);
  y.insert(y.end(), xi.begin(), xi.end());
  const double rho = std::sqrt(std::inner_product(y.begin(), y.end(), y.begin(), 0.0));
  const double s = (rho - B_) / B_;
  if (s <= 0.0 || s >= 1.0 || order == 0) return Jet::constant(dims, order, primitive(s));
  Jet r2(dims, order);
  for (int i = 0; i < dims; ++i) {
    const Jet v = Jet::variable(dims, order, i, y[static_cast<std::size_t>(i)]);
    r2 += v * v;
  }
  Jet sj = r2.compose(taylor_pow(r2.value(), 0.5, order));
  sj += -B_;
  sj *= 1.0 / B_;
  return sj.compose(profile_taylor(s, order));
}

double GevreyCutoff::derivative(const Point& p, std::span<const int> alpha, std::span<const int> beta) const {
  const int n = p.dim();
  std::vector<int> gamma(beta.begin(), beta.end());
  gamma.resize(static_cast<std::size_t>(n), 0);
  gamma.insert(gamma.end(), alpha.begin(), alpha.end());
  gamma.resize(static_cast<std::size_t>(2 * n), 0);
  const int order = std::accumulate(gamma.begin(), gamma.end(), 0);
  return jet(p, order).derivative(gamma);
}

}  // namespace sgcalc
