"""Independent literal implementation of the staged evaluation operator.

Written directly from the inductive clauses, with no stage arithmetic and no
caches: stage n+1 re-asks stage n wherever the clauses say to.  Exponential
in the stage index, so usable only for small stages — which is exactly what
makes it a trustworthy oracle for the engine.
"""

from __future__ import annotations

from pcaforge.stdlib import numeral
from pcaforge.terms import App, KComb, Oracle, SComb, Term


def naive_red_n(n: int, t: Term) -> Term | None:
    if n == 0:
        if t.normal:
            return t
        if isinstance(t, App):
            left, right = t.left, t.right
            if (
                isinstance(left, App)
                and isinstance(left.left, KComb)
                and left.right.normal
                and right.normal
            ):
                return left.right
            if isinstance(left, Oracle) and right.normal and right.closed:
                atoms = right.atoms
                value = max((left.perm(m) for m in atoms), default=0)
                return numeral(value)
        return None
    prev = naive_red_n(n - 1, t)
    if prev is not None:
        return prev
    if isinstance(t, App):
        left, right = t.left, t.right
        if (
            isinstance(left, App)
            and isinstance(left.left, App)
            and isinstance(left.left.left, SComb)
            and left.left.right.normal
            and left.right.normal
            and right.normal
        ):
            x, y, u = left.left.right, left.right, right
            first = naive_red_n(n - 1, App(x, u))
            second = naive_red_n(n - 1, App(y, u))
            if first is None or second is None:
                return None
            return naive_red_n(n - 1, App(first, second))
        first = naive_red_n(n - 1, left)
        second = naive_red_n(n - 1, right)
        if first is None or second is None:
            return None
        return naive_red_n(n - 1, App(first, second))
    return None
