"""Independent constructions of the toric positive cones in divisor space R^n.

Divisors are coefficient vectors d over the rays. The cones below are built
from support function data and principal divisors only, without wall curves,
and are compared with the pulled-back cones computed through N^1.
"""

from fractions import Fraction

from geolog.exactgeom import cone_from_facets, cone_from_rays
from geolog.exactgeom.linalg import primitive, solve


def _unit(n, j):
    return tuple(Fraction(1 if i == j else 0) for i in range(n))


def principal_divisors(X):
    """Rows <e_k, v_rho>: the divisors of the characters e_k."""
    return [tuple(v[k] for v in X.rays) for k in range(X.d)]


def nef_oracle(X):
    """{d : psi_d concave}: <m_sigma(d), v_rho> + d_rho >= 0 for every cone and ray."""
    n = len(X.rays)
    forms = []
    for cone in X.cones:
        vec = [X.rays[i] for i in cone]
        # m_sigma(e_j) solves <m, v_i> = -delta_ij on the rays of the cone
        ms = [solve([list(v) for v in vec], [-_unit(n, j)[i] for i in cone]) for j in range(n)]
        for r, v in enumerate(X.rays):
            f = tuple(sum(m[k] * v[k] for k in range(X.d)) + (1 if r == j else 0) for j, m in enumerate(ms))
            if any(f):
                forms.append(primitive(f))
    return cone_from_facets(forms, (), n)


def eff_oracle(X):
    n = len(X.rays)
    return cone_from_rays([primitive(_unit(n, j)) for j in range(n)], principal_divisors(X), n=n)


def mob_oracle(X):
    """Divisors with no fixed ray: the intersection over rho of cone(e_j, j != rho) + principal."""
    n = len(X.rays)
    out = None
    for r in range(n):
        c = cone_from_rays([primitive(_unit(n, j)) for j in range(n) if j != r], principal_divisors(X), n=n)
        out = c if out is None else out.intersect(c)
    return out
