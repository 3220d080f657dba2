#!/usr/bin/env python3
"""Computes the frozen fixture values asserted in the C++ test suites.

Everything here is direct summation / brute force, independent of the C++
implementation. Run and paste the printed block into tests/fixture_values.hpp
when a fixture changes.
"""
import math

import numpy as np
from mpmath import mp, zeta

mp.dps = 30


def pair_density(i, j):
    # i, j >= 1
    s = i + j
    return s ** -2.0 if abs(i - j) == 1 else s ** -4.0


def block_sums(M):
    """S_u(M) = sum_{i,j<=M} |u_i| p_ij  and  S_U(M) = sum_{i,j<=M} |U_ij| p_ij
    with u_i = 2(-1)^i i on block i and U_ij = (-1)^i i + (-1)^j j."""
    i = np.arange(1, M + 1, dtype=np.float64)
    su_rows = []
    sU_rows = []
    signed_rows = []
    for ii in range(1, M + 1):
        s = ii + i
        p = s ** -4.0
        near = np.abs(ii - i) == 1.0
        p[near] = s[near] ** -2.0
        u_ii = 2.0 * (-1.0) ** ii * ii
        U = (-1.0) ** ii * ii + ((-1.0) ** i) * i
        su_rows.append(math.fsum(abs(u_ii) * p))
        sU_rows.append(math.fsum(np.abs(U) * p))
        signed_rows.append(math.fsum(u_ii * p))
    return math.fsum(su_rows), math.fsum(sU_rows), math.fsum(signed_rows)


def tail_bound(M):
    """sum_{k>M} (k-1) k^-3 = (zeta(2) - H2_M) - (zeta(3) - H3_M)."""
    h2 = mp.fsum(mp.mpf(1) / mp.mpf(k) ** 2 for k in range(1, M + 1))
    h3 = mp.fsum(mp.mpf(1) / mp.mpf(k) ** 3 for k in range(1, M + 1))
    return float((zeta(2) - h2) - (zeta(3) - h3))


def diag_kernel_marginal_dev(n):
    """max_i | sum_j 3|x_i-x_j|/n - 3(x_i^2 - x_i + 1/2) | on the n-point
    midpoint grid of [0,1]."""
    x = (np.arange(n) + 0.5) / n
    dev = 0.0
    for xi in x:
        p1 = math.fsum(3.0 * abs(xi - xj) / n for xj in x)
        closed = 3.0 * (xi * xi - xi + 0.5)
        dev = max(dev, abs(p1 - closed))
    return dev


def typewriter_final_step(grid_n, steps):
    """At the final step k=steps (dyadic level l = floor(log2 k)):
    - mass fraction of atom pairs with both atoms inside J_k,
    - mass fraction of atom pairs with |x1-x2| <= 2^(1-l) (fattened diagonal)."""
    k = steps
    level = k.bit_length() - 1
    t = k - (1 << level)
    lo, hi = t / (1 << level), (t + 1) / (1 << level)
    x = (np.arange(grid_n) + 0.5) / grid_n
    w = 1.0 / grid_n
    inside = (x >= lo) & (x < hi) if t + 1 < (1 << level) else (x >= lo) & (x <= hi)
    both = 0.0
    fat = 0.0
    thr = 2.0 ** (1 - level)
    for a in range(grid_n):
        for b in range(grid_n):
            if inside[a] and inside[b]:
                both += w * w
            if abs(x[a] - x[b]) <= thr:
                fat += w * w
    return both, fat


def main():
    print("// generated by tests/oracle/fixtures.py")
    for M in (100, 1000, 10000):
        su, sU, signed = block_sums(M)
        print(f"kBlockSumU_{M} = {su!r}")
        print(f"kBlockSumMean_{M} = {sU!r}")
        if M == 100:
            print(f"kBlockSignedIntegral_{M} = {signed!r}")
    for M in (100, 1000):
        print(f"kBlockMeanTailBound_{M} = {tail_bound(M)!r}")
    print(f"kDiagMarginalDev_128 = {diag_kernel_marginal_dev(128)!r}")
    both, fat = typewriter_final_step(64, 63)
    print(f"kTypewriterBothInside_64_63 = {both!r}")
    print(f"kTypewriterFatDiagMass_64_63 = {fat!r}")


if __name__ == "__main__":
    main()
