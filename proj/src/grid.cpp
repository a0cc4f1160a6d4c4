#include "sgcalc/grid.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sgcalc/errors.hpp"

namespace sgcalc {

std::vector<double> log_space(double lo, double hi, int count) {
  if (count <= 0 || lo <= 0.0 || hi < lo) fail(ErrorCode::InvalidArgument, "log_space needs 0 < lo <= hi");
  std::vector<double> r;
  if (count == 1) return {lo};
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) r.push_back(std::exp(a + (b - a) * i / (count - 1)));
  r.front() = lo;
  r.back() = hi;
  return r;
}

std::vector<std::vector<double>> grid_directions(int dims, const RadialGridSpec& spec) {
  std::vector<std::vector<double>> dirs;
  if (dims <= 0) return dirs;
  if (dims == 1) return {{1.0}, {-1.0}};
  if (dims == 2) {
    for (int k = 0; k < spec.rays; ++k) {
      const double t = 2.0 * std::numbers::pi * k / spec.rays;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
    return dirs;
  }
  for (int i = 0; i < dims; ++i) {
    for (double s : {1.0, -1.0}) {
      std::vector<double> d(static_cast<std::size_t>(dims), 0.0);
      d[static_cast<std::size_t>(i)] = s;
      dirs.push_back(d);
    }
  }
  const int corners = 1 << dims;
  for (int mask = 0; mask < corners; ++mask) {
    std::vector<double> d(static_cast<std::size_t>(dims));
    for (int i = 0; i < dims; ++i) d[static_cast<std::size_t>(i)] = ((mask >> i) & 1 ? -1.0 : 1.0) / std::sqrt(dims);
    dirs.push_back(d);
  }
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  const int extra = spec.rays * (dims - 1);
  for (int k = 0; k < extra; ++k) {
    std::vector<double> d(static_cast<std::size_t>(dims));
    double norm = 0.0;
    for (double& c : d) {
      c = normal(rng);
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (double& c : d) c /= norm;
    dirs.push_back(d);
  }
  return dirs;
}

std::vector<std::vector<double>> radial_grid(int dims, const RadialGridSpec& spec) {
  if (dims == 0) return {{}};
  std::vector<std::vector<double>> pts;
  const auto radii = log_space(spec.r_min, spec.r_max, spec.radii);
  for (const auto& d : grid_directions(dims, spec)) {
    for (double r : radii) {
      std::vector<double> y(d);
      for (double& c : y) c *= r;
      pts.push_back(std::move(y));
    }
  }
  return pts;
}

Point phase_point(const std::vector<double>& y, int n) {
  if (static_cast<int>(y.size()) != 2 * n) fail(ErrorCode::InvalidArgument, "phase vector must have 2n entries");
  std::vector<double> x(y.begin(), y.begin() + n);
  std::vector<double> xi(y.begin() + n, y.end());
  return Point(std::move(x), std::move(xi));
}

Point boundary_point(const std::vector<double>& tangential, int n, cplx xi_n) {
  const int m = n - 1;
  if (static_cast<int>(tangential.size()) != 2 * m) {
    fail(ErrorCode::InvalidArgument, "tangential vector must have 2(n-1) entries");
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  std::vector<cplx> xi(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m; ++i) {
    x[static_cast<std::size_t>(i)] = tangential[static_cast<std::size_t>(i)];
    xi[static_cast<std::size_t>(i)] = tangential[static_cast<std::size_t>(m + i)];
  }
  xi[static_cast<std::size_t>(n - 1)] = xi_n;
  return Point(std::move(x), std::move(xi));
}

}  // namespace sgcalc
