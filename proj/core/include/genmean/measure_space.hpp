#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "genmean/error.hpp"

namespace genmean {

// Grid allocations above this many entries are refused unless the caller
// raises the limit explicitly.
inline constexpr std::size_t kDefaultBudget = 10'000'000;

// Neumaier-compensated accumulator. value() is the sum plus the running
// correction; adding in a fixed order makes results reproducible bit for bit.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Finite atomic measure space: labelled atoms with strictly positive weights.
// Immutable once built; pass by shared_ptr so grid functions can share it.
class MeasureSpace {
 public:
  MeasureSpace(std::vector<std::string> labels, std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  double weight(std::size_t atom) const;
  double total_mass() const noexcept { return total_mass_; }

  bool operator==(const MeasureSpace& other) const noexcept;

 private:
  std::vector<std::string> labels_;
  std::vector<double> weights_;
  double total_mass_ = 0.0;
};

using MeasureSpacePtr = std::shared_ptr<const MeasureSpace>;

MeasureSpacePtr make_space(std::vector<std::string> labels,
                           std::vector<double> weights);

// n^arity with overflow detection; overflow reports a budget failure since
// any such grid is unallocatable.
std::size_t grid_entry_count(std::size_t n_atoms, int arity);

// Throws Errc::BudgetExceeded when an arity-k grid over the space would
// exceed `budget` entries. Returns the entry count otherwise.
std::size_t require_budget(const MeasureSpace& space, int arity,
                           std::size_t budget);

// Row-major layout: index (i_1, ..., i_k) maps to sum_j i_j * n^(k-j),
// so the last component varies fastest.
std::size_t flatten_index(std::span<const std::size_t> idx, std::size_t n_atoms);
void unflatten_index(std::size_t flat, int arity, std::size_t n_atoms,
                     std::span<std::size_t> out);

// Odometer step in row-major order; false once the index wraps to zero.
bool advance_index(std::span<std::size_t> idx, std::size_t n_atoms);

// Product weight w(i_1) * ... * w(i_k) of one grid node.
double product_weight(const MeasureSpace& space,
                      std::span<const std::size_t> idx);

// Real-valued function on the arity-k product grid of a space, stored
// row-major. Values are validated to be finite; immutable once built.
class GridFunction {
 public:
  GridFunction(MeasureSpacePtr space, int arity, std::vector<double> values);

  static GridFunction constant(MeasureSpacePtr space, int arity, double value,
                               std::size_t budget = kDefaultBudget);

  const MeasureSpace& space() const noexcept { return *space_; }
  const MeasureSpacePtr& space_ptr() const noexcept { return space_; }
  int arity() const noexcept { return arity_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double at(std::span<const std::size_t> idx) const;

 private:
  MeasureSpacePtr space_;
  int arity_;
  std::vector<double> values_;
};

// True when the two functions live on equal spaces (same labels and weights).
bool same_space(const GridFunction& a, const GridFunction& b);

// Integral of f against the product measure, summed in flat index order
// with compensation.
double integrate(const GridFunction& f);

// Integral of f weighted by an extra grid factor of equal shape,
// i.e. sum_x f(x) q(x) w(x).
double integrate(const GridFunction& f, const GridFunction& q);

// Max-norm helpers used for residuals and tolerances across modules.
double max_abs(const GridFunction& f);
double max_abs_diff(const GridFunction& a, const GridFunction& b);
// ||a - b||_inf / ||b||_inf, with denominator 1 when b vanishes.
double rel_max_dev(const GridFunction& a, const GridFunction& b);

}  // namespace genmean
