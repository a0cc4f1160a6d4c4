#include "sgcalc/grid_function.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "sgcalc/errors.hpp"

namespace sgcalc {

namespace {

std::size_t total(const std::vector<Axis>& axes) {
  std::size_t s = 1;
  for (const auto& a : axes) s *= a.count;
  return s;
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Axis Axis::span(double lo, double hi, std::size_t count) {
  if (count < 2) fail(ErrorCode::InvalidArgument, "axis needs at least two samples");
  return {lo, (hi - lo) / static_cast<double>(count - 1), count};
}

GridFunction::GridFunction(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 2) fail(ErrorCode::InvalidArgument, "grid functions have one or two axes");
  values_.assign(total(axes_), 0.0);
}

GridFunction::GridFunction(std::vector<Axis> axes, std::vector<cplx> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  validate();
}

std::vector<double> GridFunction::coordinates(std::size_t i) const {
  if (axes_.size() == 1) return {axes_[0].at(i)};
  const std::size_t m = axes_[1].count;
  return {axes_[0].at(i / m), axes_[1].at(i % m)};
}

GridFunction GridFunction::row(std::size_t i) const {
  if (axes_.size() != 2) fail(ErrorCode::InvalidArgument, "row() needs a 2-D grid");
  GridFunction r({axes_[1]});
  for (std::size_t j = 0; j < axes_[1].count; ++j) r[j] = at(i, j);
  r.meta_ = meta_;
  return r;
}

GridFunction GridFunction::column(std::size_t j) const {
  if (axes_.size() != 2) fail(ErrorCode::InvalidArgument, "column() needs a 2-D grid");
  GridFunction c({axes_[0]});
  for (std::size_t i = 0; i < axes_[0].count; ++i) c[i] = at(i, j);
  c.meta_ = meta_;
  return c;
}

void GridFunction::validate() const {
  if (axes_.empty() || axes_.size() > 2) fail(ErrorCode::InvalidArgument, "grid functions have one or two axes");
  if (values_.size() != total(axes_)) fail(ErrorCode::InvalidArgument, "sample count does not match the grid");
  for (const cplx& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorCode::InvalidArgument, "grid function has a non-finite sample");
    }
  }
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::write_csv(std::ostream& os) const {
  os << (axes_.size() == 1 ? "x1" : "x1,x2") << ",re,im\n";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    for (double c : coordinates(i)) os << fmt(c) << ',';
    os << fmt(values_[i].real()) << ',' << fmt(values_[i].imag()) << '\n';
  }
}

void GridFunction::write_csv(const std::string& path) const {
  std::ofstream f(path);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open " + path);
  write_csv(f);
}

}  // namespace sgcalc
