#include "genmean/operators.hpp"

#include <algorithm>
#include <sstream>
#include <string>

namespace genmean {

namespace {

// powers[j] = n^(arity-1-j): row-major place values of one grid index.
std::vector<std::size_t> index_powers(std::size_t n_atoms, int arity) {
  std::vector<std::size_t> powers(static_cast<std::size_t>(arity), 1);
  for (int j = arity - 2; j >= 0; --j) {
    powers[static_cast<std::size_t>(j)] =
        powers[static_cast<std::size_t>(j + 1)] * n_atoms;
  }
  return powers;
}

std::size_t binomial(int n, int k) {
  unsigned __int128 value = 1;
  for (int j = 1; j <= k; ++j) {
    value = value * static_cast<unsigned>(n - k + j) / static_cast<unsigned>(j);
    if (value > static_cast<unsigned __int128>(1) << 62) {
      fail(Errc::BudgetExceeded, "combination count overflows");
    }
  }
  return static_cast<std::size_t>(value);
}

// All strictly increasing m-tuples over {0,...,n_slots-1} in lexicographic
// order, flattened with stride m.
std::vector<int> slot_combinations(int n_slots, int m, std::size_t n_combos) {
  std::vector<int> combos;
  combos.reserve(n_combos * static_cast<std::size_t>(m));
  std::vector<int> c(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) c[static_cast<std::size_t>(j)] = j;
  while (true) {
    combos.insert(combos.end(), c.begin(), c.end());
    int j = m - 1;
    while (j >= 0 && c[static_cast<std::size_t>(j)] == n_slots - m + j) --j;
    if (j < 0) break;
    ++c[static_cast<std::size_t>(j)];
    for (int t = j + 1; t < m; ++t) {
      c[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t - 1)] + 1;
    }
  }
  return combos;
}

// Consumes the anchor pools in call order so that the recursion is
// deterministic for a given selection yet exercises distinct entries.
struct AnchorStream {
  const AnchorSelection* sel;
  std::size_t drawn = 0;

  std::size_t draw() {
    const auto& pool = sel->anchor_atoms;
    return pool[drawn++ % pool.size()];
  }
  std::size_t point_component(std::size_t slot) const {
    const auto& point = sel->secondary_point;
    return point[slot % point.size()];
  }
};

// f(..., atom): drop the last argument by fixing it.
GridFunction section_last(const GridFunction& f, std::size_t atom) {
  const std::size_t n = f.space().size();
  const std::size_t out_count = f.size() / n;
  std::vector<double> out(out_count);
  for (std::size_t y = 0; y < out_count; ++y) {
    out[y] = f[y * n + atom];
  }
  return GridFunction(f.space_ptr(), f.arity() - 1, std::move(out));
}

// T(x_1..x_N) = sum_k w(x with slot k omitted) - coeff * u(x_1..x_N),
// accumulated in extended precision so each entry rounds once.
GridFunction omission_sum_minus(const GridFunction& w, double coeff,
                                const GridFunction& u) {
  const std::size_t n = w.space().size();
  const int n_slots = w.arity() + 1;
  const std::vector<std::size_t> powers = index_powers(n, w.arity());
  std::vector<double> out(w.size() * n);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_slots), 0);
  std::size_t flat = 0;
  do {
    long double acc = -static_cast<long double>(coeff) * u[flat];
    for (int k = 0; k < n_slots; ++k) {
      std::size_t sub = 0;
      int t = 0;
      for (int j = 0; j < n_slots; ++j) {
        if (j == k) continue;
        sub += idx[static_cast<std::size_t>(j)] *
               powers[static_cast<std::size_t>(t++)];
      }
      acc += w[sub];
    }
    out[flat++] = static_cast<double>(acc);
  } while (advance_index(idx, n));
  return GridFunction(w.space_ptr(), n_slots, std::move(out));
}

GridFunction recover_order1(const GridFunction& mean, AnchorStream& stream) {
  const int n_slots = mean.arity();
  const std::size_t n = mean.space().size();

  // h(x) = mean(x, anchors...): fix every slot but the first.
  std::size_t tail = 0;
  for (int j = 1; j < n_slots; ++j) {
    tail = tail * n + stream.draw();
  }
  const std::size_t stride = mean.size() / n;
  std::vector<double> h(n);
  for (std::size_t x = 0; x < n; ++x) {
    h[x] = mean[x * stride + tail];
  }

  std::vector<std::size_t> point(static_cast<std::size_t>(n_slots));
  for (std::size_t slot = 0; slot < point.size(); ++slot) {
    point[slot] = stream.point_component(slot);
  }

  // u(x) = n_slots*h(x) + mean(point) - sum_j h(point_j)
  long double shift = mean.at(point);
  for (std::size_t component : point) {
    shift -= h[component];
  }
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    out[x] = static_cast<double>(
        static_cast<long double>(n_slots) * h[x] + shift);
  }
  return GridFunction(mean.space_ptr(), 1, std::move(out));
}

GridFunction recover_impl(const GridFunction& mean, int order,
                          AnchorStream& stream, std::size_t budget) {
  const int n_slots = mean.arity();
  if (order == n_slots) {
    return mean;
  }
  if (order == 1) {
    return recover_order1(mean, stream);
  }

  // Peel one slot: fix the last argument at a fresh anchor, split off the
  // order-(m-1) component, and recurse on the remaining (N-1)-slot mean.
  const GridFunction w = section_last(mean, stream.draw());
  const GridFunction lower_mean =
      omission_sum_minus(w, static_cast<double>(n_slots - order), mean);
  const GridFunction v = recover_impl(lower_mean, order - 1, stream, budget);
  const GridFunction gv = generalized_mean(v, n_slots - 1, budget);

  std::vector<double> peeled(w.size());
  for (std::size_t i = 0; i < peeled.size(); ++i) {
    peeled[i] = static_cast<double>(
        static_cast<long double>(n_slots) * w[i] - gv[i]);
  }
  const GridFunction r = recover_impl(
      GridFunction(w.space_ptr(), n_slots - 1, std::move(peeled)), order,
      stream, budget);

  std::vector<double> out(r.size());
  const double divisor = static_cast<double>(n_slots - order);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = r[i] / divisor;
  }
  return GridFunction(r.space_ptr(), order, std::move(out));
}

void validate_anchors(const AnchorSelection& anchors, std::size_t n_atoms) {
  if (anchors.anchor_atoms.empty() || anchors.secondary_point.empty()) {
    fail(Errc::InvalidArgument, "anchor selection must be non-empty");
  }
  for (std::size_t a : anchors.anchor_atoms) {
    if (a >= n_atoms) {
      fail(Errc::IndexOutOfRange, "anchor atom beyond space size");
    }
  }
  for (std::size_t a : anchors.secondary_point) {
    if (a >= n_atoms) {
      fail(Errc::IndexOutOfRange, "secondary point atom beyond space size");
    }
  }
}

}  // namespace

double default_recovery_tol(int order) { return order == 1 ? 1e-9 : 1e-8; }

GridFunction symmetrize(const GridFunction& g, std::size_t budget) {
  const int m = g.arity();
  require_budget(g.space(), m, budget);
  if (m == 1) {
    return g;
  }
  const std::size_t n = g.space().size();
  std::vector<double> out(g.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(m), 0);
  std::vector<std::size_t> perm;
  do {
    // One pass per orbit: enter at the sorted representative, average over
    // the distinct arrangements, write that average to each of them. This
    // makes permutation invariance of the output exact, not approximate.
    if (!std::is_sorted(idx.begin(), idx.end())) {
      continue;
    }
    perm = idx;
    long double acc = 0.0L;
    std::size_t arrangements = 0;
    do {
      acc += g[flatten_index(perm, n)];
      ++arrangements;
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double average =
        static_cast<double>(acc / static_cast<long double>(arrangements));
    perm = idx;
    do {
      out[flatten_index(perm, n)] = average;
    } while (std::next_permutation(perm.begin(), perm.end()));
  } while (advance_index(idx, n));
  return GridFunction(g.space_ptr(), m, std::move(out));
}

GridFunction generalized_mean(const GridFunction& kernel, int n_slots,
                              std::size_t budget) {
  const int m = kernel.arity();
  if (n_slots < m) {
    fail(Errc::OrderMismatch,
         "a mean needs at least as many slots as its kernel order");
  }
  const std::size_t n = kernel.space().size();
  const std::size_t out_count = require_budget(kernel.space(), n_slots, budget);
  if (n_slots == m) {
    return kernel;
  }

  const std::size_t n_combos = binomial(n_slots, m);
  if (n_combos * static_cast<std::size_t>(m) > budget) {
    fail(Errc::BudgetExceeded, "slot-combination table exceeds budget");
  }
  const std::vector<int> combos = slot_combinations(n_slots, m, n_combos);
  const std::vector<std::size_t> powers = index_powers(n, m);

  std::vector<double> out(out_count);
  std::vector<std::size_t> idx(static_cast<std::size_t>(n_slots), 0);
  std::size_t flat = 0;
  do {
    long double acc = 0.0L;
    const int* c = combos.data();
    for (std::size_t t = 0; t < n_combos; ++t, c += m) {
      std::size_t sub = 0;
      for (int j = 0; j < m; ++j) {
        sub += idx[static_cast<std::size_t>(c[j])] *
               powers[static_cast<std::size_t>(j)];
      }
      acc += kernel[sub];
    }
    out[flat++] =
        static_cast<double>(acc / static_cast<long double>(n_combos));
  } while (advance_index(idx, n));
  return GridFunction(kernel.space_ptr(), n_slots, std::move(out));
}

KernelRecovery recover_kernel(const GridFunction& mean, int order,
                              const AnchorSelection& anchors,
                              std::size_t budget) {
  const int n_slots = mean.arity();
  if (order < 1 || order > n_slots) {
    fail(Errc::OrderMismatch,
         "kernel order must lie between 1 and the arity of the mean");
  }
  require_budget(mean.space(), n_slots, budget);
  validate_anchors(anchors, mean.space().size());

  AnchorStream stream{&anchors};
  GridFunction kernel = recover_impl(mean, order, stream, budget);
  const GridFunction rebuilt = generalized_mean(kernel, n_slots, budget);
  const double residual = rel_max_dev(rebuilt, mean);
  return {std::move(kernel), residual};
}

GridFunction require_kernel(const GridFunction& mean, int order, double tol,
                            const AnchorSelection& anchors,
                            std::size_t budget) {
  if (tol <= 0.0) {
    tol = default_recovery_tol(order);
  }
  KernelRecovery recovery = recover_kernel(mean, order, anchors, budget);
  if (!(recovery.residual <= tol)) {
    std::ostringstream msg;
    msg.precision(6);
    msg << std::scientific << "round-trip residual=" << recovery.residual
        << " exceeds tol=" << tol;
    fail(Errc::NotAGeneralizedMean, msg.str());
  }
  return std::move(recovery.kernel);
}

MeanMembership is_generalized_mean(const GridFunction& mean, int order,
                                   double tol, std::size_t budget) {
  const KernelRecovery recovery =
      recover_kernel(mean, order, AnchorSelection{}, budget);
  return {recovery.residual <= tol, recovery.residual};
}

}  // namespace genmean
