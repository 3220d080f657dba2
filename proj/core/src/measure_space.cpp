#include "genmean/measure_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace genmean {

MeasureSpace::MeasureSpace(std::vector<std::string> labels,
                           std::vector<double> weights)
    : labels_(std::move(labels)), weights_(std::move(weights)) {
  if (labels_.size() != weights_.size()) {
    fail(Errc::ShapeMismatch, "labels and weights differ in length");
  }
  if (weights_.empty()) {
    fail(Errc::EmptySpace, "a measure space needs at least one atom");
  }
  std::unordered_set<std::string> seen;
  for (const auto& label : labels_) {
    if (!seen.insert(label).second) {
      fail(Errc::DuplicateLabel, "atom label repeated: " + label);
    }
  }
  CompensatedSum mass;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      fail(Errc::NonPositiveWeight, "atom weights must be finite and positive");
    }
    mass.add(w);
  }
  total_mass_ = mass.value();
}

double MeasureSpace::weight(std::size_t atom) const {
  if (atom >= weights_.size()) {
    fail(Errc::IndexOutOfRange, "atom index beyond space size");
  }
  return weights_[atom];
}

bool MeasureSpace::operator==(const MeasureSpace& other) const noexcept {
  return labels_ == other.labels_ && weights_ == other.weights_;
}

MeasureSpacePtr make_space(std::vector<std::string> labels,
                           std::vector<double> weights) {
  return std::make_shared<const MeasureSpace>(std::move(labels),
                                              std::move(weights));
}

std::size_t grid_entry_count(std::size_t n_atoms, int arity) {
  if (arity < 1) {
    fail(Errc::ArityError, "arity must be at least 1");
  }
  std::size_t count = 1;
  for (int k = 0; k < arity; ++k) {
    if (count > std::numeric_limits<std::size_t>::max() / n_atoms) {
      fail(Errc::BudgetExceeded, "grid entry count overflows size_t");
    }
    count *= n_atoms;
  }
  return count;
}

std::size_t require_budget(const MeasureSpace& space, int arity,
                           std::size_t budget) {
  const std::size_t count = grid_entry_count(space.size(), arity);
  if (count > budget) {
    fail(Errc::BudgetExceeded,
         "grid of " + std::to_string(count) + " entries exceeds budget " +
             std::to_string(budget));
  }
  return count;
}

std::size_t flatten_index(std::span<const std::size_t> idx,
                          std::size_t n_atoms) {
  std::size_t flat = 0;
  for (std::size_t component : idx) {
    flat = flat * n_atoms + component;
  }
  return flat;
}

void unflatten_index(std::size_t flat, int arity, std::size_t n_atoms,
                     std::span<std::size_t> out) {
  for (int j = arity - 1; j >= 0; --j) {
    out[static_cast<std::size_t>(j)] = flat % n_atoms;
    flat /= n_atoms;
  }
}

bool advance_index(std::span<std::size_t> idx, std::size_t n_atoms) {
  for (std::size_t j = idx.size(); j-- > 0;) {
    if (++idx[j] < n_atoms) {
      return true;
    }
    idx[j] = 0;
  }
  return false;
}

double product_weight(const MeasureSpace& space,
                      std::span<const std::size_t> idx) {
  double w = 1.0;
  for (std::size_t component : idx) {
    w *= space.weight(component);
  }
  return w;
}

GridFunction::GridFunction(MeasureSpacePtr space, int arity,
                           std::vector<double> values)
    : space_(std::move(space)), arity_(arity), values_(std::move(values)) {
  if (!space_) {
    fail(Errc::InvalidArgument, "grid function needs a space");
  }
  const std::size_t expected = grid_entry_count(space_->size(), arity_);
  if (values_.size() != expected) {
    fail(Errc::ShapeMismatch,
         "value count " + std::to_string(values_.size()) +
             " does not match grid of " + std::to_string(expected) +
             " entries");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      fail(Errc::InvalidArgument, "grid values must be finite");
    }
  }
}

GridFunction GridFunction::constant(MeasureSpacePtr space, int arity,
                                    double value, std::size_t budget) {
  if (!space) {
    fail(Errc::InvalidArgument, "grid function needs a space");
  }
  const std::size_t count = require_budget(*space, arity, budget);
  return GridFunction(std::move(space), arity,
                      std::vector<double>(count, value));
}

double GridFunction::at(std::span<const std::size_t> idx) const {
  if (static_cast<int>(idx.size()) != arity_) {
    fail(Errc::ArityError, "index arity does not match function arity");
  }
  for (std::size_t component : idx) {
    if (component >= space_->size()) {
      fail(Errc::IndexOutOfRange, "atom index beyond space size");
    }
  }
  return values_[flatten_index(idx, space_->size())];
}

bool same_space(const GridFunction& a, const GridFunction& b) {
  return a.space_ptr() == b.space_ptr() || a.space() == b.space();
}

double integrate(const GridFunction& f) {
  const std::size_t n = f.space().size();
  const int k = f.arity();
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  CompensatedSum sum;
  std::size_t flat = 0;
  do {
    sum.add(f[flat] * product_weight(f.space(), idx));
    ++flat;
  } while (advance_index(idx, n));
  return sum.value();
}

double integrate(const GridFunction& f, const GridFunction& q) {
  if (!same_space(f, q) || f.arity() != q.arity()) {
    fail(Errc::ShapeMismatch,
         "integrand and weight grid must share a space and arity");
  }
  const std::size_t n = f.space().size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(f.arity()), 0);
  CompensatedSum sum;
  std::size_t flat = 0;
  do {
    sum.add(f[flat] * q[flat] * product_weight(f.space(), idx));
    ++flat;
  } while (advance_index(idx, n));
  return sum.value();
}

double max_abs(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
  if (!same_space(a, b) || a.arity() != b.arity()) {
    fail(Errc::ShapeMismatch, "functions must share a space and arity");
  }
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

double rel_max_dev(const GridFunction& a, const GridFunction& b) {
  const double scale = max_abs(b);
  return max_abs_diff(a, b) / (scale > 0.0 ? scale : 1.0);
}

}  // namespace genmean
