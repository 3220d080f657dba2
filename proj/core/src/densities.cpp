#include "genmean/densities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "genmean/operators.hpp"

namespace genmean {

namespace {

// Orbit-exact product grid: each sorted tuple's product is computed once,
// left to right, and written to every arrangement. No budget check; the
// caller guarantees the target size is acceptable.
std::vector<double> product_power_values(const GridFunction& rho,
                                         int n_slots) {
  const std::size_t n = rho.space().size();
  std::vector<double> out(grid_entry_count(n, n_slots));
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_slots), 0);
  std::vector<std::size_t> perm;
  do {
    if (!std::is_sorted(idx.begin(), idx.end())) {
      continue;
    }
    double value = 1.0;
    for (std::size_t component : idx) {
      value *= rho[component];
    }
    perm = idx;
    do {
      out[flatten_index(perm, n)] = value;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (advance_index(idx, n));
  return out;
}

// Integrate out the last coordinate: out(y) = sum_a vals(y,a) * w(a).
std::vector<double> reduce_once_values(const std::vector<double>& vals,
                                       const MeasureSpace& space) {
  const std::size_t n = space.size();
  const std::size_t out_count = vals.size() / n;
  std::vector<double> out(out_count);
  for (std::size_t y = 0; y < out_count; ++y) {
    CompensatedSum sum;
    for (std::size_t a = 0; a < n; ++a) {
      sum.add(vals[y * n + a] * space.weight(a));
    }
    out[y] = sum.value();
  }
  return out;
}

void validate_rho(const SymmetricDensity& rho) {
  if (rho.arity() != 1) {
    fail(Errc::ArityError, "reference density must have arity 1");
  }
  for (double v : rho.grid().values()) {
    if (!(v > 0.0)) {
      fail(Errc::NonPositiveRho,
           "reference density must be strictly positive at every atom");
    }
  }
}

}  // namespace

SymmetricDensity::SymmetricDensity(GridFunction grid, bool normalized)
    : grid_(std::move(grid)), normalized_(normalized) {
  for (double v : grid_.values()) {
    if (v < 0.0) {
      fail(Errc::InvalidArgument, "density values must be nonnegative");
    }
  }
  const int m = grid_.arity();
  if (m > 1) {
    // Orbit check: every arrangement must match its sorted representative.
    const double scale = std::max(1.0, max_abs(grid_));
    const std::size_t n = grid_.space().size();
    std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
    std::vector<std::size_t> sorted(idx.size());
    std::size_t flat = 0;
    do {
      sorted.assign(idx.begin(), idx.end());
      std::sort(sorted.begin(), sorted.end());
      const double rep = grid_[flatten_index(sorted, n)];
      if (std::abs(grid_[flat] - rep) > 1e-12 * scale) {
        fail(Errc::InvalidArgument,
             "density values must be symmetric under argument permutations");
      }
      ++flat;
    } while (advance_index(idx, n));
  }
  if (normalized_) {
    const double mass = integrate(grid_);
    if (std::abs(mass - 1.0) > 1e-10) {
      fail(Errc::InvalidArgument,
           "density flagged normalized has mass " + std::to_string(mass));
    }
  }
}

SymmetricDensity::SymmetricDensity(Trusted, GridFunction grid, bool normalized)
    : grid_(std::move(grid)), normalized_(normalized) {}

SymmetricDensity SymmetricDensity::product_power(const SymmetricDensity& rho,
                                                 int n_slots,
                                                 std::size_t budget) {
  if (rho.arity() != 1) {
    fail(Errc::ArityError, "product_power takes an arity-1 density");
  }
  require_budget(rho.grid().space(), n_slots, budget);
  GridFunction grid(rho.grid().space_ptr(), n_slots,
                    product_power_values(rho.grid(), n_slots));
  return SymmetricDensity(Trusted{}, std::move(grid), rho.normalized());
}

SymmetricDensity SymmetricDensity::uniform(MeasureSpacePtr space, int arity,
                                           std::size_t budget) {
  if (!space) {
    fail(Errc::InvalidArgument, "uniform density needs a space");
  }
  const double value =
      std::pow(space->total_mass(), -static_cast<double>(arity));
  GridFunction grid = GridFunction::constant(std::move(space), arity, value,
                                             budget);
  return SymmetricDensity(Trusted{}, std::move(grid), true);
}

SymmetricDensity SymmetricDensity::normalized_copy() const {
  const double mass = integrate(grid_);
  if (!(mass > 0.0)) {
    fail(Errc::InvalidArgument, "cannot normalize a zero-mass density");
  }
  std::vector<double> vals = grid_.values();
  for (double& v : vals) {
    v /= mass;
  }
  return SymmetricDensity(
      Trusted{}, GridFunction(grid_.space_ptr(), grid_.arity(), std::move(vals)),
      true);
}

SymmetricDensity reduce(const SymmetricDensity& density, int keep) {
  const int n_slots = density.arity();
  if (keep < 1 || keep >= n_slots) {
    fail(Errc::ArityError,
         "marginal keeps between 1 and arity-1 coordinates");
  }
  std::vector<double> vals = density.grid().values();
  for (int k = n_slots; k > keep; --k) {
    vals = reduce_once_values(vals, density.grid().space());
  }
  GridFunction grid(density.grid().space_ptr(), keep, std::move(vals));
  return SymmetricDensity(SymmetricDensity::Trusted{}, std::move(grid),
                          density.normalized());
}

GridFunction marginal_over(const GridFunction& density_values,
                           std::span<const std::size_t> keep_slots) {
  const int n_slots = density_values.arity();
  const std::size_t n = density_values.space().size();
  if (keep_slots.empty() ||
      keep_slots.size() >= static_cast<std::size_t>(n_slots)) {
    fail(Errc::ArityError,
         "marginal keeps between 1 and arity-1 coordinates");
  }
  std::vector<bool> kept(static_cast<std::size_t>(n_slots), false);
  for (std::size_t slot : keep_slots) {
    if (slot >= static_cast<std::size_t>(n_slots)) {
      fail(Errc::IndexOutOfRange, "kept slot beyond arity");
    }
    if (kept[slot]) {
      fail(Errc::InvalidArgument, "kept slots must be distinct");
    }
    kept[slot] = true;
  }

  const std::size_t out_count =
      grid_entry_count(n, static_cast<int>(keep_slots.size()));
  std::vector<CompensatedSum> buckets(out_count);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_slots), 0);
  std::vector<std::size_t> sub(keep_slots.size());
  std::size_t flat = 0;
  do {
    double dropped_weight = 1.0;
    for (int j = 0; j < n_slots; ++j) {
      if (!kept[static_cast<std::size_t>(j)]) {
        dropped_weight *=
            density_values.space().weight(idx[static_cast<std::size_t>(j)]);
      }
    }
    for (std::size_t t = 0; t < keep_slots.size(); ++t) {
      sub[t] = idx[keep_slots[t]];
    }
    buckets[flatten_index(sub, n)].add(density_values[flat] * dropped_weight);
    ++flat;
  } while (advance_index(idx, n));

  std::vector<double> out(out_count);
  for (std::size_t i = 0; i < out_count; ++i) {
    out[i] = buckets[i].value();
  }
  return GridFunction(density_values.space_ptr(),
                      static_cast<int>(keep_slots.size()), std::move(out));
}

Cond27Report check_cond27(const SymmetricDensity& density, double zero_tol) {
  const int n_slots = density.arity();
  if (n_slots < 2) {
    fail(Errc::ArityError, "the domination probe needs arity at least 2");
  }
  const MeasureSpace& space = density.grid().space();
  const std::size_t n = space.size();
  const std::vector<double>& p = density.grid().values();
  const std::vector<double> leading =
      reduce_once_values(density.grid().values(), space);

  Cond27Report report;
  report.gamma.assign(n, 0.0);
  // gamma[a] = min over sections y with positive marginal of P(y,a)/marg(y).
  // By symmetry, P(., a) sections against the leading-coordinate marginal
  // match the paper's last-anchor convention exactly.
  const std::size_t section_count = leading.size();
  for (std::size_t a = 0; a < n; ++a) {
    double best = -1.0;
    for (std::size_t y = 0; y < section_count; ++y) {
      if (leading[y] > zero_tol) {
        const double ratio = p[y * n + a] / leading[y];
        if (best < 0.0 || ratio < best) {
          best = ratio;
        }
      }
    }
    report.gamma[a] = best > 0.0 ? best : 0.0;
  }

  double gamma_max = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (report.gamma[a] > zero_tol) {
      report.b_atoms.push_back(a);
    }
    gamma_max = std::max(gamma_max, report.gamma[a]);
  }
  report.holds = !report.b_atoms.empty();
  report.epsilon = 0.5 * gamma_max;
  if (!report.holds) {
    return report;
  }

  // Section-level constant: mass of atoms whose gamma clears epsilon.
  CompensatedSum b_mass;
  for (std::size_t a = 0; a < n; ++a) {
    if (report.gamma[a] > report.epsilon) {
      b_mass.add(space.weight(a));
    }
  }
  report.beta = 1.0 / (b_mass.value() * report.epsilon);

  // Tuple-level constant: product of gammas over (arity-1)-tuples, gated at
  // half its own maximum so the qualifying set is never empty.
  const int tuple_arity = n_slots - 1;
  double tuple_gate = 0.5;
  for (int j = 0; j < tuple_arity; ++j) {
    tuple_gate *= gamma_max;
  }
  CompensatedSum a_mass;
  std::vector<std::size_t> idx(static_cast<std::size_t>(tuple_arity), 0);
  do {
    double product = 1.0;
    for (std::size_t component : idx) {
      product *= report.gamma[component];
    }
    if (product > tuple_gate) {
      a_mass.add(product_weight(space, idx));
    }
  } while (advance_index(idx, n));
  report.alpha = 1.0 / (a_mass.value() * tuple_gate);
  return report;
}

SymmetricDensity blend_with_product(const SymmetricDensity& density,
                                    const SymmetricDensity& rho, int steps) {
  if (steps < 1) {
    fail(Errc::InvalidArgument, "blend step count must be at least 1");
  }
  validate_rho(rho);
  if (!density.normalized()) {
    fail(Errc::InvalidArgument, "blend needs a normalized density");
  }
  if (!(rho.grid().space() == density.grid().space())) {
    fail(Errc::ShapeMismatch, "densities must share a space");
  }
  const std::vector<double> prod =
      product_power_values(rho.grid(), density.arity());
  const std::vector<double>& p = density.grid().values();
  std::vector<double> out(p.size());
  const long double scale = 1.0L / static_cast<long double>(steps + 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(
        (static_cast<long double>(steps) * p[i] + prod[i]) * scale);
  }
  GridFunction grid(density.grid().space_ptr(), density.arity(),
                    std::move(out));
  return SymmetricDensity(SymmetricDensity::Trusted{}, std::move(grid), true);
}

SymmetricDensity clip_renormalize(const SymmetricDensity& density,
                                  const SymmetricDensity& rho,
                                  int bound_factor) {
  if (bound_factor < 1) {
    fail(Errc::InvalidArgument, "clip factor must be at least 1");
  }
  validate_rho(rho);
  if (!(rho.grid().space() == density.grid().space())) {
    fail(Errc::ShapeMismatch, "densities must share a space");
  }
  const std::vector<double> prod =
      product_power_values(rho.grid(), density.arity());
  const std::vector<double>& p = density.grid().values();
  std::vector<double> clipped(p.size());
  bool changed = false;
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    const double cap = static_cast<double>(bound_factor) * prod[i];
    if (p[i] > cap) {
      clipped[i] = cap;
      changed = true;
    } else {
      clipped[i] = p[i];
    }
  }
  if (!changed && density.normalized()) {
    return density;
  }
  GridFunction grid(density.grid().space_ptr(), density.arity(),
                    std::move(clipped));
  const double mass = integrate(grid);
  if (!(mass > 0.0)) {
    fail(Errc::InvalidArgument, "clipped density has zero mass");
  }
  std::vector<double> vals = grid.values();
  for (double& v : vals) {
    v /= mass;
  }
  return SymmetricDensity(
      SymmetricDensity::Trusted{},
      GridFunction(density.grid().space_ptr(), density.arity(),
                   std::move(vals)),
      true);
}

bool within_band(const SymmetricDensity& density, int ell) {
  if (ell < 1) {
    fail(Errc::InvalidArgument, "band parameter must be at least 1");
  }
  const auto [lo, hi] = std::minmax_element(density.grid().values().begin(),
                                            density.grid().values().end());
  return *hi < static_cast<double>(ell) &&
         *lo > 1.0 / static_cast<double>(ell);
}

ExpectationPair expectation_pair(const GridFunction& kernel,
                                 const SymmetricDensity& density,
                                 std::size_t budget) {
  const int m = kernel.arity();
  const int n_slots = density.arity();
  if (m > n_slots) {
    fail(Errc::ArityError, "kernel arity exceeds density arity");
  }
  if (!(kernel.space() == density.grid().space())) {
    fail(Errc::ShapeMismatch, "kernel and density must share a space");
  }
  const GridFunction mean = generalized_mean(kernel, n_slots, budget);
  ExpectationPair pair;
  pair.mean_side = integrate(mean, density.grid());
  if (m == n_slots) {
    pair.kernel_side = integrate(kernel, density.grid());
  } else {
    pair.kernel_side = integrate(kernel, reduce(density, m).grid());
  }
  return pair;
}

double l1_distance(const SymmetricDensity& a, const SymmetricDensity& b) {
  if (!same_space(a.grid(), b.grid()) || a.arity() != b.arity()) {
    fail(Errc::ShapeMismatch, "densities must share a space and arity");
  }
  const std::size_t n = a.grid().space().size();
  std::vector<std::size_t> idx(static_cast<std::size_t>(a.arity()), 0);
  CompensatedSum sum;
  std::size_t flat = 0;
  do {
    sum.add(std::abs(a.grid()[flat] - b.grid()[flat]) *
            product_weight(a.grid().space(), idx));
    ++flat;
  } while (advance_index(idx, n));
  return sum.value();
}

}  // namespace genmean
