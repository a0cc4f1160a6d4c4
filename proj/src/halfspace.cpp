#include "sgcalc/halfspace.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sgcalc/contour.hpp"
#include "sgcalc/errors.hpp"
#include "sgcalc/parallel.hpp"
#include "sgcalc/spectral.hpp"

namespace sgcalc {

namespace {

const cplx kI(0.0, 1.0);
constexpr int kCircleNodes = 64;

Point line_point(int n, const std::vector<double>& xi_t, cplx z) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  return normal_line_point(std::vector<double>(x.begin(), x.end() - 1), xi_t, z);
}

}  // namespace

NormalKernel::NormalKernel(const FormalSum& a) : n_(a.n) {
  for (const Expr& t : a.terms) {
    if (t.is_zero()) continue;
    if (t.depends_on_any(VarKind::X)) {
      fail(ErrorCode::InvalidArgument, "half-space operators need an x-independent symbol");
    }
    NormalPoles check(t, n_);  // NotRational surfaces here
    (void)check;
    terms_.push_back(t);
    compiled_.emplace_back(t);
  }
}

std::vector<NormalKernel::Pole> NormalKernel::poles(const std::vector<double>& xi_t) const {
  const std::vector<double> x_t(static_cast<std::size_t>(n_ - 1), 0.0);
  EvalOptions eo;
  eo.allow_complex_normal = true;
  std::vector<Pole> out;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const auto all = NormalPoles(terms_[t], n_).at(x_t, xi_t);
    for (const cplx& z : all) {
      if (std::abs(z.imag()) < 1e-12 * std::max(1.0, std::abs(z))) {
        fail(ErrorCode::RealPoleOnPath, "pole on the real xi_n axis at " + std::to_string(z.real()));
      }
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      const cplx z0 = all[i];
      if (z0.imag() <= 0.0) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < all.size(); ++j) {
        if (j != i) gap = std::min(gap, std::abs(all[j] - z0));
      }
      const double rho = std::isfinite(gap) ? 0.5 * gap : 0.5 * std::max(1.0, std::abs(z0));
      Pole p{z0, std::vector<cplx>(kLaurentTerms, 0.0)};
      // c_{-k} = (1/2 pi i) closed integral of a (z - z0)^{k-1} dz on |z - z0| = rho.
      for (int q = 0; q < kCircleNodes; ++q) {
        const cplx w = std::polar(rho, 2.0 * std::numbers::pi * q / kCircleNodes);
        const cplx v = compiled_[t](line_point(n_, xi_t, z0 + w), eo);
        cplx wk = w;
        for (int k = 0; k < kLaurentTerms; ++k) {
          p.laurent[static_cast<std::size_t>(k)] += v * wk / static_cast<double>(kCircleNodes);
          wk *= w;
        }
      }
      out.push_back(std::move(p));
    }
  }
  return out;
}

cplx NormalKernel::value(const std::vector<Pole>& poles, double xn) {
  cplx sum = 0.0;
  for (const Pole& p : poles) {
    // Res e^{i x z} a = e^{i x z0} sum_k c_{-(k+1)} (i x)^k / k!
    cplx poly = 0.0;
    cplx term = 1.0;
    for (int k = 0; k < kLaurentTerms; ++k) {
      poly += p.laurent[static_cast<std::size_t>(k)] * term;
      term *= kI * xn / static_cast<double>(k + 1);
    }
    sum += std::exp(kI * p.z0 * xn) * poly;
  }
  return kI * sum;
}

cplx NormalKernel::symbol(const std::vector<double>& xi_t, double xi_n) const {
  const Point pt = line_point(n_, xi_t, xi_n);
  cplx s = 0.0;
  for (const auto& c : compiled_) s += c(pt);
  return s;
}

GridFunction poisson_apply(const FormalSum& a, cplx v, const Axis& xn) {
  if (a.n != 1) fail(ErrorCode::InvalidArgument, "scalar boundary data needs n = 1");
  if (xn.start < 0.0) fail(ErrorCode::InvalidArgument, "poisson_apply samples x_n >= 0");
  const NormalKernel K(a);
  const auto poles = K.poles({});
  GridFunction u({xn});
  for (std::size_t j = 0; j < xn.count; ++j) u[j] = v * NormalKernel::value(poles, xn.at(j));
  u.meta()["source"] = "poisson_apply";
  return u;
}

GridFunction poisson_apply(const FormalSum& a, const GridFunction& v, const Axis& xn) {
  if (a.n != 2) fail(ErrorCode::InvalidArgument, "boundary grid data needs n = 2");
  if (v.dims() != 1) fail(ErrorCode::InvalidArgument, "boundary data must be 1-D");
  if (xn.start < 0.0) fail(ErrorCode::InvalidArgument, "poisson_apply samples x_n >= 0");
  const NormalKernel K(a);
  const Axis& bx = v.axis(0);
  const std::size_t N = bx.count;
  const std::size_t M = xn.count;
  const FourierPlan plan(N);
  const auto V = plan.forward(v.values());
  const auto freq = fft_frequencies(N, bx.step);
  // modes[m * M + j] = V_m K_m(x_n_j)
  std::vector<cplx> modes(N * M, 0.0);
  parallel_for(N, [&](std::size_t m) {
    if (V[m] == cplx(0.0)) return;
    const auto poles = K.poles({freq[m]});
    for (std::size_t j = 0; j < M; ++j) modes[m * M + j] = V[m] * NormalKernel::value(poles, xn.at(j));
  });
  GridFunction u({bx, xn});
  parallel_for(M, [&](std::size_t j) {
    std::vector<cplx> col(N);
    for (std::size_t m = 0; m < N; ++m) col[m] = modes[m * M + j];
    const auto back = plan.inverse(col);
    for (std::size_t i = 0; i < N; ++i) u.at(i, j) = back[i];
  });
  u.meta()["source"] = "poisson_apply";
  return u;
}

GridFunction transmission_apply(const FormalSum& a, const GridFunction& f, const BoundaryJet& jet,
                                const TransmissionOptions& opt) {
  if (a.n != 1 || f.dims() != 1 || jet.n() != 1) fail(ErrorCode::InvalidArgument, "transmission_apply is one-dimensional");
  const Axis& fx = f.axis(0);
  if (std::abs(fx.start) > 1e-14) fail(ErrorCode::InvalidArgument, "f must be sampled from x = 0");
  const NormalKernel K(a);
  const double dx = fx.step;

  GridFunction h_full;
  GridFunction h_fine;
  const auto P = static_cast<std::size_t>(std::ceil(1.0 / dx)) + 1;  // samples strictly left of 0
  try {
    h_full = extend_half_space(jet, opt.extension, Axis{-static_cast<double>(P) * dx, dx, P + 1});
    const std::size_t S = opt.correction_samples + (opt.correction_samples % 2);
    h_fine = extend_half_space(jet, opt.extension, Axis::span(-1.0, 0.0, S + 1));
  } catch (const Error& e) {
    fail(ErrorCode::ExtensionFailure, std::string("extension failed: ") + e.what());
  }

  // Extended samples on a periodic grid with room against wrap-around.
  const std::size_t used = P + fx.count;
  const std::size_t N = 2 * used;
  std::vector<cplx> g(N, 0.0);
  for (std::size_t j = 0; j < P; ++j) g[j] = h_full[j];
  for (std::size_t j = 0; j < fx.count; ++j) g[P + j] = f[j];
  const FourierPlan plan(N);
  auto G = plan.forward(g);
  const auto freq = fft_frequencies(N, dx);
  for (std::size_t m = 0; m < N; ++m) G[m] *= K.symbol({}, freq[m]);
  const auto full = plan.inverse(G);

  // e- part: int_{-1}^0 K(x - y) h(y) dy with K(x - y) = i sum e^{i z0 (x - y)} poly(x - y),
  // expanded into moments M_j = int e^{-i z0 y} y^j h(y) dy (Simpson on h_fine).
  const auto poles = K.poles({});
  const Axis& hx = h_fine.axis(0);
  std::vector<std::vector<cplx>> moments(poles.size(), std::vector<cplx>(kLaurentTerms, 0.0));
  for (std::size_t p = 0; p < poles.size(); ++p) {
    for (std::size_t q = 0; q < hx.count; ++q) {
      const double y = hx.at(q);
      const double w = (q == 0 || q + 1 == hx.count) ? 1.0 : (q % 2 ? 4.0 : 2.0);
      cplx base = w * hx.step / 3.0 * std::exp(-kI * poles[p].z0 * y) * h_fine[q];
      for (int j = 0; j < kLaurentTerms; ++j) {
        moments[p][static_cast<std::size_t>(j)] += base;
        base *= y;
      }
    }
  }
  std::vector<double> binom(kLaurentTerms * kLaurentTerms, 0.0);
  for (int k = 0; k < kLaurentTerms; ++k) {
    binom[static_cast<std::size_t>(k * kLaurentTerms)] = 1.0;
    for (int m = 1; m <= k; ++m) {
      binom[static_cast<std::size_t>(k * kLaurentTerms + m)] =
          binom[static_cast<std::size_t>(k * kLaurentTerms + m - 1)] * (k - m + 1) / m;
    }
  }

  GridFunction out({fx});
  parallel_for(fx.count, [&](std::size_t i) {
    const double x = fx.at(i);
    cplx corr = 0.0;
    for (std::size_t p = 0; p < poles.size(); ++p) {
      // sum_k c_{-(k+1)} (i)^k / k! * (x - y)^k, (x - y)^k = sum_m C(k,m) x^m (-y)^{k-m}
      cplx acc = 0.0;
      cplx ik = 1.0;
      double kfact = 1.0;
      for (int k = 0; k < kLaurentTerms; ++k) {
        if (k > 0) {
          ik *= kI;
          kfact *= k;
        }
        cplx inner = 0.0;
        for (int m = 0; m <= k; ++m) {
          const double sign = (k - m) % 2 ? -1.0 : 1.0;
          inner += binom[static_cast<std::size_t>(k * kLaurentTerms + m)] * std::pow(x, m) * sign *
                   moments[p][static_cast<std::size_t>(k - m)];
        }
        acc += poles[p].laurent[static_cast<std::size_t>(k)] * ik / kfact * inner;
      }
      corr += std::exp(kI * poles[p].z0 * x) * acc;
    }
    out[i] = full[P + i] - kI * corr;
  });
  out.meta()["source"] = "transmission_apply";
  return out;
}

}  // namespace sgcalc
