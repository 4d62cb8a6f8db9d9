"""Exact linear algebra over the rationals and the integers."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

Q = Fraction


def qvec(v: Iterable) -> tuple[Fraction, ...]:
    """Coerce an iterable of ints/strings/Fractions into a tuple of Fractions."""
    return tuple(to_q(x) for x in v)


def to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as an exact rational")


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def vadd(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [to_q(x) for x in v]
    den = reduce(lcm, (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def primitive_int(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form.

    Args:
        rows: matrix given as a list of rows.

    Returns:
        The nonzero rows of the reduced form and the pivot columns.
    """
    m = [[to_q(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return int_rank([primitive(r) if not is_zero(r) else tuple(0 for _ in r) for r in rows])


def int_rank(rows: Sequence[Sequence[int]]) -> int:
    from ._kernel_select import bareiss_rank

    return bareiss_rank([list(r) for r in rows])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of {x : A x = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


def int_nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    return [primitive(v) for v in nullspace(rows, ncols)]


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One solution of A x = b (free variables set to zero), or None if inconsistent."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bb] for r, bb in zip(a, b)]
    red, piv = rref(aug)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    return tuple(x)


def solve_unique(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Solution of a square nonsingular system."""
    x = solve(a, b)
    if x is None or rank(a) < len(a[0]):
        raise ValueError("system is singular or inconsistent")
    return x


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(c) for c in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[dot(r, c) for c in bt] for r in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(r, v) for r in a)


def det(m: Sequence[Sequence]):
    """Determinant by fraction-free elimination (exact)."""
    n = len(m)
    if n == 0:
        return 1
    fr = [[to_q(x) for x in r] for r in m]
    den = reduce(lcm, (x.denominator for r in fr for x in r), 1)
    ints = [[int(x * den) for x in r] for r in fr]
    from ._kernel_select import bareiss_det

    return Fraction(bareiss_det(ints), den**n)


def row_space_basis(rows: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Canonical integer basis of the row space (primitive rows of the rref)."""
    red, _ = rref(rows) if rows else ([], [])
    return [primitive(r) for r in red]


def orth_complement(rows: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Canonical integer basis of the orthogonal complement of span(rows) in Q^n."""
    if not rows:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return row_space_basis(nullspace(rows, n))


def project_out(v: Sequence, basis: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """Orthogonal projection of v onto the complement of span(basis)."""
    if not basis:
        return qvec(v)
    g = [[dot(a, b) for b in basis] for a in basis]
    rhs = [dot(a, v) for a in basis]
    c = solve(g, rhs)
    out = list(qvec(v))
    for ci, b in zip(c, basis):
        if ci:
            out = [x - ci * y for x, y in zip(out, b)]
    return tuple(out)


# ---------------------------------------------------------------------------
# integer lattices


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Z-basis of the lattice {x in Z^n : A x = 0}.

    Column operations reduce A to echelon form while tracking a unimodular
    matrix; the trailing columns of that matrix span the kernel lattice.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    u = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # columns of u
    col = 0
    for r in range(m):
        if col >= n:
            break
        # gather the gcd of a[r][col:] into column `col`
        for c in range(col + 1, n):
            if a[r][c] == 0:
                continue
            x, y = a[r][col], a[r][c]
            g, s, t = _ext_gcd(x, y)
            p, q = x // g, y // g
            # new col = s*col + t*c, new c = -q*col + p*c (unimodular)
            for mat_rows in (a,):
                for row in mat_rows:
                    vc, vd = row[col], row[c]
                    row[col], row[c] = s * vc + t * vd, -q * vc + p * vd
            for i in range(n):
                vc, vd = u[i][col], u[i][c]
                u[i][col], u[i][c] = s * vc + t * vd, -q * vc + p * vd
        if a[r][col] != 0:
            col += 1
    basis = [tuple(u[i][c] for i in range(n)) for c in range(col, n)]
    return basis


def lattice_basis_of_span(vectors: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Z-basis of span_Q(vectors) intersected with Z^n (the saturation)."""
    if not vectors:
        return []
    comp = orth_complement(vectors, n)
    if not comp:
        return [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return integer_kernel(comp, n)


def gcd_of_minors(vectors: Sequence[Sequence[int]]) -> int:
    """Index of the lattice spanned by k independent vectors inside its saturation."""
    from itertools import combinations

    k = len(vectors)
    if k == 0:
        return 1
    n = len(vectors[0])
    g = 0
    for cols in combinations(range(n), k):
        sub = [[v[c] for c in cols] for v in vectors]
        from ._kernel_select import bareiss_det

        g = gcd(g, abs(bareiss_det([list(r) for r in sub])))
        if g == 1:
            return 1
    return g
