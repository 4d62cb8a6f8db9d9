"""Pure-Python integer kernels: Bareiss elimination and the double description sweep.

All routines take and return plain Python ints, so results are exact for any
input size. A compiled twin with the same signatures lives in ``_kernel``.
"""

from __future__ import annotations

from math import gcd


def bareiss_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    if not m:
        return 0
    n = len(m[0])
    rk = 0
    prev = 1
    for c in range(n):
        piv = None
        for i in range(rk, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[rk], m[piv] = m[piv], m[rk]
        p = m[rk][c]
        for i in range(rk + 1, len(m)):
            mic = m[i][c]
            row_i = m[i]
            row_r = m[rk]
            for j in range(c + 1, n):
                row_i[j] = (p * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = p
        rk += 1
        if rk == len(m):
            break
    return rk


def bareiss_det(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        p = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * p - m[i][k] * m[k][j]) // prev
        prev = p
    return sign * m[n - 1][n - 1]


def _prim(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            return v
    if g > 1:
        return [x // g for x in v]
    return v


def dd_sweep(
    constraints: list[list[int]],
    rays: list[list[int]],
    zero_sets: list[int],
    order: list[int],
    k: int,
) -> tuple[list[list[int]], list[int]]:
    """Add constraints a.y >= 0 one at a time to a pointed cone in Z^k.

    Args:
        constraints: all constraint rows (indexed by position).
        rays: current extreme rays, primitive integer vectors.
        zero_sets: bitmask per ray of processed constraints tight at that ray.
        order: indices of constraints still to process.
        k: ambient dimension.

    Returns:
        The extreme rays and zero-set bitmasks after every constraint is added.
    """
    rays = [list(r) for r in rays]
    zs = list(zero_sets)
    need = k - 2
    for ci in order:
        a = constraints[ci]
        bit = 1 << ci
        vals = [sum(x * y for x, y in zip(a, r)) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            for i, v in enumerate(vals):
                if v == 0:
                    zs[i] |= bit
            continue
        new_rays = []
        new_zs = []
        for i in pos:
            for j in neg:
                common = zs[i] & zs[j]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for t in range(len(rays)):
                    if t != i and t != j and (zs[t] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vi, vj = vals[i], -vals[j]
                ri, rj = rays[i], rays[j]
                new = _prim([vi * y + vj * x for x, y in zip(ri, rj)])
                new_rays.append(new)
                new_zs.append(common | bit)
        keep_r = []
        keep_z = []
        for i, v in enumerate(vals):
            if v > 0:
                keep_r.append(rays[i])
                keep_z.append(zs[i])
            elif v == 0:
                keep_r.append(rays[i])
                keep_z.append(zs[i] | bit)
        rays = keep_r + new_rays
        zs = keep_z + new_zs
    return rays, zs
