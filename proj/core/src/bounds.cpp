#include "genmean/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace genmean {

namespace {

void check_orders(int order, int n_slots) {
  if (order < 1 || order > n_slots) {
    fail(Errc::OrderMismatch,
         "order must lie between 1 and the slot count");
  }
}

void check_finite_exponent(double exponent) {
  if (!(exponent >= 1.0) || std::isinf(exponent)) {
    fail(Errc::BadExponent, "exponent must be finite and at least 1");
  }
}

// Memoized evaluation over the marginal ladder: levels[k-1] holds the
// k-coordinate marginal of the top density, and the recursion for (m, N)
// reads its alpha/beta from level N's own domination report.
struct CrLadder {
  std::vector<SymmetricDensity> levels;
  std::vector<Cond27Report> reports;  // reports[k-1] for level k (k >= 2)
  double exponent = 1.0;
  double zero_tol = 1e-12;
  std::map<std::pair<int, int>, double> memo;

  CrLadder(const SymmetricDensity& density, double exp_, double tol)
      : exponent(exp_), zero_tol(tol) {
    const int top = density.arity();
    levels.reserve(static_cast<std::size_t>(top));
    levels.push_back(density);
    for (int k = top - 1; k >= 1; --k) {
      levels.push_back(reduce(levels.back(), k));
    }
    std::reverse(levels.begin(), levels.end());
    reports.resize(static_cast<std::size_t>(top));
    for (int k = 2; k <= top; ++k) {
      reports[static_cast<std::size_t>(k - 1)] =
          check_cond27(levels[static_cast<std::size_t>(k - 1)], zero_tol);
      if (!reports[static_cast<std::size_t>(k - 1)].holds) {
        fail(Errc::Cond27Fails,
             "density marginal of arity " + std::to_string(k) +
                 " admits no positive domination constant");
      }
    }
  }

  double constant(int order, int n_slots) {
    if (order == n_slots) {
      return 1.0;
    }
    const auto key = std::make_pair(order, n_slots);
    if (const auto it = memo.find(key); it != memo.end()) {
      return it->second;
    }
    const Cond27Report& report =
        reports[static_cast<std::size_t>(n_slots - 1)];
    double value = 0.0;
    if (order == 1) {
      value = 2.0 * static_cast<double>(n_slots) *
                  std::pow(report.alpha, 1.0 / exponent) +
              1.0;
    } else {
      const double beta_pow = std::pow(report.beta, 1.0 / exponent);
      const double over = static_cast<double>(n_slots) * beta_pow;
      const double shrunk = constant(order, n_slots - 1);
      const double lower = constant(order - 1, n_slots);
      value = shrunk / static_cast<double>(n_slots - order) *
              (over + lower * (over + static_cast<double>(n_slots - order)));
    }
    memo.emplace(key, value);
    return value;
  }
};

}  // namespace

std::pair<double, double> ess_bounds(const GridFunction& f) {
  const auto [lo, hi] =
      std::minmax_element(f.values().begin(), f.values().end());
  return {*lo, *hi};
}

double lr_norm(const GridFunction& f, const SymmetricDensity& weight,
               double exponent) {
  if (!same_space(f, weight.grid()) || f.arity() != weight.arity()) {
    fail(Errc::ShapeMismatch,
         "function and weight density must share a space and arity");
  }
  if (!(exponent >= 1.0)) {
    fail(Errc::BadExponent, "exponent must be at least 1");
  }
  if (std::isinf(exponent)) {
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (weight.grid()[i] > 0.0) {
        sup = std::max(sup, std::abs(f[i]));
      }
    }
    return sup;
  }
  const std::size_t n = f.space().size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(f.arity()), 0);
  CompensatedSum sum;
  std::size_t flat = 0;
  do {
    sum.add(std::pow(std::abs(f[flat]), exponent) * weight.grid()[flat] *
            product_weight(f.space(), idx));
    ++flat;
  } while (advance_index(idx, n));
  return std::pow(sum.value(), 1.0 / exponent);
}

double c_inf_bound(int order, int n_slots) {
  check_orders(order, n_slots);
  if (order == n_slots || order == 1) {
    return 1.0;
  }
  const double shrunk = c_inf_bound(order, n_slots - 1);
  const double lower = c_inf_bound(order - 1, n_slots);
  return shrunk / static_cast<double>(n_slots - order) *
         (static_cast<double>(n_slots) +
          static_cast<double>(2 * n_slots - order) * lower);
}

double c_r_bound(int order, int n_slots, const SymmetricDensity& density,
                 double exponent, double zero_tol) {
  check_orders(order, n_slots);
  check_finite_exponent(exponent);
  if (density.arity() != n_slots) {
    fail(Errc::ArityError, "density arity must equal the slot count");
  }
  if (order == n_slots) {
    return 1.0;
  }
  CrLadder ladder(density, exponent, zero_tol);
  return ladder.constant(order, n_slots);
}

BoundTable build_bound_table(int order, int n_slots,
                             const SymmetricDensity* density, double exponent,
                             double zero_tol) {
  check_orders(order, n_slots);
  BoundTable table;
  table.order = order;
  table.n_slots = n_slots;
  table.exponent = exponent;
  for (int n = 1; n <= n_slots; ++n) {
    for (int m = 1; m <= n; ++m) {
      table.c_inf[{m, n}] = c_inf_bound(m, n);
    }
  }
  if (density != nullptr && !std::isinf(exponent)) {
    check_finite_exponent(exponent);
    if (density->arity() != n_slots) {
      fail(Errc::ArityError, "density arity must equal the slot count");
    }
    CrLadder ladder(*density, exponent, zero_tol);
    for (int n = 1; n <= n_slots; ++n) {
      for (int m = 1; m <= n; ++m) {
        table.c_r[{m, n}] = ladder.constant(m, n);
      }
    }
    const Cond27Report report = check_cond27(*density, zero_tol);
    table.alpha = report.alpha;
    table.beta = report.beta;
  }
  return table;
}

BoundCheckReport verify_bounds(const GridFunction& kernel, int n_slots,
                               const SymmetricDensity* density,
                               double exponent, const AnchorSelection& anchors,
                               std::size_t budget) {
  const int order = kernel.arity();
  check_orders(order, n_slots);
  const bool sup_norm = std::isinf(exponent);
  if (!sup_norm && density == nullptr) {
    fail(Errc::InvalidArgument, "finite exponents need a density");
  }

  BoundCheckReport report;
  report.order = order;
  report.n_slots = n_slots;
  report.exponent = exponent;

  const GridFunction mean = generalized_mean(kernel, n_slots, budget);
  const KernelRecovery recovery =
      recover_kernel(mean, order, anchors, budget);

  if (sup_norm) {
    report.kernel_norm = max_abs(kernel);
    report.mean_norm = max_abs(mean);
    report.recovered_norm = max_abs(recovery.kernel);
    report.constant = c_inf_bound(order, n_slots);
  } else {
    if (density->arity() != n_slots) {
      fail(Errc::ArityError, "density arity must equal the slot count");
    }
    const SymmetricDensity marginal =
        order == n_slots ? *density : reduce(*density, order);
    report.kernel_norm = lr_norm(kernel, marginal, exponent);
    report.mean_norm = lr_norm(mean, *density, exponent);
    report.recovered_norm = lr_norm(recovery.kernel, marginal, exponent);
    report.constant = c_r_bound(order, n_slots, *density, exponent);
  }

  report.roundtrip_residual = rel_max_dev(recovery.kernel, kernel);
  report.forward_margin = report.kernel_norm - report.mean_norm;
  report.inverse_margin =
      report.constant * report.mean_norm - report.recovered_norm;

  const double slack = 1e-12;
  report.forward_ok =
      report.mean_norm <= report.kernel_norm * (1.0 + slack) + 1e-300;
  report.inverse_ok = report.recovered_norm <=
                      report.constant * report.mean_norm * (1.0 + slack) +
                          1e-300;
  report.roundtrip_ok =
      report.roundtrip_residual <= default_recovery_tol(order);
  return report;
}

}  // namespace genmean
