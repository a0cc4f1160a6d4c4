#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "sgcalc/expr.hpp"

namespace sgcalc {

/// Uniform axis start + i * step, i < count.
struct Axis {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  double end() const { return count == 0 ? start : at(count - 1); }
  static Axis span(double lo, double hi, std::size_t count);
};

/// Complex samples on a tensor grid of one or two uniform axes; the last
/// axis varies fastest.
class GridFunction {
 public:
  GridFunction() = default;
  explicit GridFunction(std::vector<Axis> axes);
  GridFunction(std::vector<Axis> axes, std::vector<cplx> values);

  const std::vector<Axis>& axes() const { return axes_; }
  const Axis& axis(std::size_t k) const { return axes_.at(k); }
  std::size_t dims() const { return axes_.size(); }
  std::size_t size() const { return values_.size(); }

  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  cplx operator[](std::size_t i) const { return values_[i]; }
  cplx& at(std::size_t i, std::size_t j) { return values_[i * axes_[1].count + j]; }
  cplx at(std::size_t i, std::size_t j) const { return values_[i * axes_[1].count + j]; }

  /// Coordinates of flat sample i.
  std::vector<double> coordinates(std::size_t i) const;
  /// 1-D slice along the last axis at index i of the first (2-D only).
  GridFunction row(std::size_t i) const;
  /// 1-D slice along the first axis at index j of the last (2-D only).
  GridFunction column(std::size_t j) const;

  std::map<std::string, std::string>& meta() { return meta_; }
  const std::map<std::string, std::string>& meta() const { return meta_; }

  /// Throws InvalidArgument on a size mismatch or non-finite sample.
  void validate() const;
  double max_abs() const;

  /// CSV with columns x1[,x2],re,im.
  void write_csv(std::ostream& os) const;
  void write_csv(const std::string& path) const;

 private:
  std::vector<Axis> axes_;
  std::vector<cplx> values_;
  std::map<std::string, std::string> meta_;
};

}  // namespace sgcalc
