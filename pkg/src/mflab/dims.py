"""Exact integer dimensions of first- and second-order form spaces.

First-order cusp/modular/Eisenstein dimensions follow the classical
Riemann-Roch values for an even weight k:

    k < 0:   S = M = 0
    k = 0:   S = 0, M = 1 (non-compact quotient)
    k = 2:   S = g, M = g + p - 1
    k >= 4:  S = (k-1)(g-1) + (k/2-1) p + sum_j floor(k (e_j - 1) / (2 e_j))
             M = S + p

The second-order spaces multiply the first-order dimension by 2g + 1,
except in weight 2 for the cuspidal space, where the count drops by
exactly one whenever the genus is positive, and in weight 0 for the
modular space, which has dimension g + 1.
"""

from __future__ import annotations

from dataclasses import dataclass

from .group import GroupContext, GroupError

KINDS = ("S", "M", "E", "S2", "M2", "H1")


@dataclass
class DimReport:
    kind: str
    weight: int
    value: int
    formula_path: str
    bounds: tuple | None = None

    def __post_init__(self):
        if self.bounds is not None:
            lo, hi = self.bounds
            if not (lo <= self.value <= hi):
                raise GroupError(
                    f"dimension {self.value} outside bounds [{lo}, {hi}] for {self.kind} k={self.weight}"
                )


def _check_weight(ctx: GroupContext, k: int):
    if k % 2 != 0:
        raise GroupError("even weight only")
    if ctx.p < 1:
        raise GroupError("non-compact quotient required (p >= 1)")


def dim_first_order(ctx: GroupContext, k: int, kind: str = "S") -> int:
    """dim S_k, M_k or E_k for even k."""
    _check_weight(ctx, k)
    g, p = ctx.genus, ctx.p
    if kind == "S":
        if k < 0:
            return 0
        if k == 0:
            return 0  # p >= 1
        if k == 2:
            return g
        return (k - 1) * (g - 1) + (k // 2 - 1) * p + sum(
            (k * (e - 1)) // (2 * e) for e in ctx.elliptic_orders
        )
    if kind == "M":
        if k < 0:
            return 0
        if k == 0:
            return 1
        if k == 2:
            return g + p - 1
        return dim_first_order(ctx, k, "S") + p
    if kind == "E":
        if k <= 0:
            return 0
        if k == 2:
            return p - 1
        return p
    raise GroupError(f"unknown first-order kind {kind!r}")


def dim_second_order(ctx: GroupContext, k: int, kind: str = "S2") -> int:
    """dim S^2_k or M^2_k for even k."""
    _check_weight(ctx, k)
    g = ctx.genus
    if kind == "S2":
        if k <= 0:
            return 0
        if k == 2:
            s2 = dim_first_order(ctx, 2, "S")
            return 0 if s2 == 0 else (2 * g + 1) * s2 - 1
        return (2 * g + 1) * dim_first_order(ctx, k, "S")
    if kind == "M2":
        if k <= -2:
            return 0
        if k == 0:
            return g + 1
        return (2 * g + 1) * dim_first_order(ctx, k, "M")
    raise GroupError(f"unknown second-order kind {kind!r}")


def dim_cohomology(ctx: GroupContext, k: int) -> int:
    """Dimension of the cuspidal first-cohomology group attached to weight k.

    Computed as the sum of the two quotient dimensions
    (dim M^2_k - dim M_k) + (dim S^2_k - dim S_k), plus one extra line in
    weight 2.  For k >= 4 this is cross-checked internally against
    2g (dim M_k + dim S_k); a mismatch raises.
    """
    _check_weight(ctx, k)
    if k < 2:
        raise GroupError("cohomology dimension defined for even k >= 2")
    g = ctx.genus
    quot = (dim_second_order(ctx, k, "M2") - dim_first_order(ctx, k, "M")) + (
        dim_second_order(ctx, k, "S2") - dim_first_order(ctx, k, "S")
    )
    if k == 2:
        return quot + 1
    other = 2 * g * (dim_first_order(ctx, k, "M") + dim_first_order(ctx, k, "S"))
    if quot != other:
        raise GroupError(
            f"cohomology double-count mismatch at k={k}: {quot} vs {other}"
        )
    return quot


def bounds_report(ctx: GroupContext, k: int, kind: str = "S") -> tuple[int, int]:
    """(lower, upper) bounds on the second-order dimension built on `kind`.

    Upper bound (2g+1) * first-order, lower bound (g+1) * first-order for
    k >= 0 (product subspace plus the first-order subspace).
    """
    _check_weight(ctx, k)
    if kind not in ("S", "M"):
        raise GroupError("bounds are defined for kinds S and M")
    g = ctx.genus
    d1 = dim_first_order(ctx, k, kind)
    lower = (g + 1) * d1 if k >= 0 else 0
    upper = (2 * g + 1) * d1
    return lower, upper


def dim_report(ctx: GroupContext, k: int, kind: str) -> DimReport:
    """Single dimension with its formula branch and applicable bounds."""
    if kind in ("S", "M", "E"):
        v = dim_first_order(ctx, k, kind)
        path = "k<0" if k < 0 else ("k=0" if k == 0 else ("k=2" if k == 2 else "k>=4"))
        return DimReport(kind, k, v, f"first-order/{path}")
    if kind in ("S2", "M2"):
        v = dim_second_order(ctx, k, kind)
        base = kind[0]
        if kind == "S2":
            path = "k<=0" if k <= 0 else ("k=2-defect" if k == 2 else "k>=4-upper-bound")
        else:
            path = "k<=-2" if k <= -2 else ("k=0-constant+integrals" if k == 0 else "k>=2-upper-bound")
        bounds = bounds_report(ctx, k, base) if k >= 0 else None
        return DimReport(kind, k, v, f"second-order/{path}", bounds)
    if kind == "H1":
        return DimReport("H1", k, dim_cohomology(ctx, k), "quotient-sum")
    raise GroupError(f"unknown kind {kind!r}")


def dims_table(levels, weights) -> list[dict]:
    """Rows (N, k, S, M, E, S2, M2, H1, lower, upper) for the CLI table."""
    from .group import gamma0_context

    rows = []
    for N in levels:
        ctx = gamma0_context(N)
        for k in weights:
            lo, hi = bounds_report(ctx, k, "S") if k >= 0 else (0, 0)
            rows.append(
                {
                    "N": N,
                    "k": k,
                    "S": dim_first_order(ctx, k, "S"),
                    "M": dim_first_order(ctx, k, "M"),
                    "E": dim_first_order(ctx, k, "E"),
                    "S2": dim_second_order(ctx, k, "S2"),
                    "M2": dim_second_order(ctx, k, "M2"),
                    "H1": dim_cohomology(ctx, k) if k >= 2 else "",
                    "lower": lo,
                    "upper": hi,
                }
            )
    return rows
