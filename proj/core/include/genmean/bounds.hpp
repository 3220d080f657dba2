#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <utility>

#include "genmean/densities.hpp"
#include "genmean/operators.hpp"

namespace genmean {

inline constexpr double kSupExponent = std::numeric_limits<double>::infinity();

// (min, max) over all grid entries; on atomic spaces these are the
// essential bounds.
std::pair<double, double> ess_bounds(const GridFunction& f);

// (integral of |f|^r against the weighted product measure)^(1/r).
// exponent may be kSupExponent, giving max |f| over atoms carrying
// positive weight density.
double lr_norm(const GridFunction& f, const SymmetricDensity& weight,
               double exponent);

// Sup-norm transfer constant of kernel recovery: the recursion
//   C(m,N) = C(m,N-1)/(N-m) * (N + (2N-m)*C(m-1,N)),
// grounded at C(m,m) = C(1,N) = 1.
double c_inf_bound(int order, int n_slots);

// Weighted-norm transfer constant of kernel recovery for exponent r in
// [1, inf): grounded at C(m,m) = 1 and C(1,N) = 2N*alpha^(1/r) + 1, with
//   C(m,N) = C(m,N-1 @ reduced density)/(N-m)
//            * (N*beta^(1/r) + C(m-1,N)*(N*beta^(1/r) + (N-m))),
// where alpha and beta are recomputed per marginal level via check_cond27.
double c_r_bound(int order, int n_slots, const SymmetricDensity& density,
                 double exponent, double zero_tol = 1e-12);

// All transfer constants reachable from (order, n_slots), plus the
// top-level domination constants when a density is supplied.
struct BoundTable {
  int order = 0;
  int n_slots = 0;
  double exponent = kSupExponent;
  double alpha = 0.0;
  double beta = 0.0;
  std::map<std::pair<int, int>, double> c_inf;
  std::map<std::pair<int, int>, double> c_r;  // empty without a density
};

BoundTable build_bound_table(int order, int n_slots,
                             const SymmetricDensity* density,
                             double exponent, double zero_tol = 1e-12);

// One forward/backward bound audit of a kernel: norms of the kernel, its
// mean, and the recovered kernel, with the margins against the transfer
// constants.
struct BoundCheckReport {
  int order = 0;
  int n_slots = 0;
  double exponent = kSupExponent;
  double kernel_norm = 0.0;
  double mean_norm = 0.0;
  double recovered_norm = 0.0;
  double constant = 1.0;
  double forward_margin = 0.0;   // kernel_norm - mean_norm
  double inverse_margin = 0.0;   // constant*mean_norm - recovered_norm
  double roundtrip_residual = 0.0;
  bool forward_ok = false;
  bool inverse_ok = false;
  bool roundtrip_ok = false;

  bool ok() const { return forward_ok && inverse_ok && roundtrip_ok; }
};

// Runs the audit for a kernel lifted to n_slots arguments. A finite
// exponent requires a density; the sup exponent ignores it and uses plain
// max norms.
BoundCheckReport verify_bounds(const GridFunction& kernel, int n_slots,
                               const SymmetricDensity* density,
                               double exponent,
                               const AnchorSelection& anchors = {},
                               std::size_t budget = kDefaultBudget);

}  // namespace genmean
