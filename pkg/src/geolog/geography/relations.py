"""The five equivalence relations on boundaries.

Inside the pseudo-effective region every relation compares a key computed
from the tracked invariants at each boundary:

- fix: sign vector of the immobilities e(D, B);
- mob: sign vector of p(C, B) on the curves of the high model V;
- lcm: the lc model (image of the semiample contraction);
- wlc: fix together with lcm;
- md: fix together with the set of resulting models of the MMP.

Outside the region wlc, lcm, mob and fix are trivial, and md compares the
resulting Mori fibrations.
"""

from __future__ import annotations

from typing import Sequence

from .engine import Geography

RELATIONS = ("md", "wlc", "lcm", "mob", "fix")


def relation_key(g: Geography, t: Sequence, relation: str):
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    pay = g.payload_at(t)
    if not pay.inside:
        if relation == "md":
            return ("outside", g.backend.resulting_set(g.param.b(t)))
        return ("outside",)
    e_signs, p_signs = pay.signature
    if relation == "fix":
        return e_signs
    if relation == "mob":
        return p_signs
    if relation == "lcm":
        return pay.lc
    if relation == "wlc":
        return (e_signs, pay.lc)
    return (e_signs, g.backend.resulting_set(g.param.b(t)))


def equivalence(g: Geography, t1: Sequence, t2: Sequence, relation: str) -> bool:
    """Whether the boundaries at parameters t1, t2 are equivalent for the relation."""
    return relation_key(g, t1, relation) == relation_key(g, t2, relation)
