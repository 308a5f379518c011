"""Pairs of commuting parameter families and their joint homogenization.

Two monoid families on one chart that commute as self-map families give
every direction a pair of orders, one per family. The joint analysis builds
products of the two families' Taylor projections, picks bases of their
images, and produces coordinates scaling by t**r under the first family and
u**s under the second. The resulting chart records the pair (r, s) for each
variable and carries r + s as its weight, so collapsing both parameters to
one recovers an ordinary homogenized chart, possibly of lower degree than
the pair suggests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .action import (
    _invert_coordinate_change,
    _require_monoid,
    _resolve_theta,
    taylor_projections,
)
from .charts import GradedChart, fresh_name
from .errors import NotDoubleStructureError, NotGradedActionError
from .graded import ActionFamily, PolyMap
from .jets import adapt
from .linalg import Matrix
from .wpoly import WPolynomial


@dataclass(frozen=True)
class Bihomogenization:
    """A joint coordinate change and the order pair of each new variable."""

    chart: GradedChart
    biweights: tuple[tuple[int, int], ...]
    homogenizer: PolyMap
    inverse: PolyMap
    projections: dict[tuple[int, int], Matrix]
    theta: dict[str, Fraction]


def _distinct_params(
    h1: ActionFamily, h2: ActionFamily
) -> tuple[ActionFamily, ActionFamily]:
    if h1.chart != h2.chart:
        raise NotDoubleStructureError("the two families live on different charts")
    if h2.param == h1.param:
        h2 = h2.with_param(fresh_name(h2.param, h2.chart.names + (h1.param,)))
    return h1, h2


def _composite_entries(
    first: ActionFamily, last: ActionFamily, ext: GradedChart
) -> dict[str, WPolynomial]:
    """Pullbacks of applying `first`, then `last`, over the two-parameter chart."""
    chart = first.chart
    rename = {v: WPolynomial.variable(ext, v) for v in chart.names}
    rename[first.param] = WPolynomial.variable(ext, first.param)
    sigma = {v: first.entries[v].substitute(rename, into=ext) for v in chart.names}
    sigma[last.param] = WPolynomial.variable(ext, last.param)
    return {v: last.entries[v].substitute(sigma, into=ext) for v in chart.names}


def check_commuting(
    h1: ActionFamily, h2: ActionFamily
) -> tuple[bool, tuple[tuple[str, WPolynomial], ...]]:
    """Do the two families commute as self-map families, exactly in t and u?

    Returns the verdict and, per failing variable, the pullback through
    first-family-last minus the pullback through second-family-last.
    """
    h1, h2 = _distinct_params(h1, h2)
    chart = h1.chart
    ext = chart.extend(((h1.param, 0), (h2.param, 0)))
    h1_last = _composite_entries(h2, h1, ext)
    h2_last = _composite_entries(h1, h2, ext)
    witnesses = tuple(
        (v, h1_last[v] - h2_last[v])
        for v in chart.names
        if h1_last[v] != h2_last[v]
    )
    return (not witnesses, witnesses)


def total_action(
    h1: ActionFamily, h2: ActionFamily, param: str | None = None
) -> ActionFamily:
    """Both families run with one shared parameter, second applied first."""
    h1, h2 = _distinct_params(h1, h2)
    chart = h1.chart
    param = param or h1.param
    ext = chart.extend(((param, 0),))
    tvar = WPolynomial.variable(ext, param)
    rename = {v: WPolynomial.variable(ext, v) for v in chart.names}
    rename[h2.param] = tvar
    sigma = {v: h2.entries[v].substitute(rename, into=ext) for v in chart.names}
    sigma[h1.param] = tvar
    entries = {v: h1.entries[v].substitute(sigma, into=ext) for v in chart.names}
    return ActionFamily(chart, param, entries)


def bihomogenize(
    h1: ActionFamily,
    h2: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
) -> Bihomogenization:
    """Joint coordinates scaling by t**r under h1 and u**s under h2.

    The order-(r, s) projection is the product of the order-r projection of
    the first family and the order-s projection of the second; the products
    are checked to commute and to resolve the identity before any basis is
    drawn from them. Every produced coordinate is checked to scale exactly
    under both families, and the coordinate change is inverted and verified.
    """
    h1, h2 = _distinct_params(h1, h2)
    laws1 = _require_monoid(h1, None)
    laws2 = _require_monoid(h2, None)
    ok, witnesses = check_commuting(h1, h2)
    if not ok:
        names = ", ".join(v for v, _ in witnesses)
        raise NotDoubleStructureError(f"the families do not commute (see {names})")

    chart = h1.chart
    point = _resolve_theta(h1, theta)
    point2 = _resolve_theta(h2, theta)
    if point != point2:
        raise NotDoubleStructureError("no common fixed point for the two families")
    qs1 = taylor_projections(h1, point, laws1)
    qs2 = taylor_projections(h2, point, laws2)
    n_vars = len(chart)

    for q1 in qs1:
        for q2 in qs2:
            if linalg.mat_mul(q1, q2) != linalg.mat_mul(q2, q1):
                raise NotDoubleStructureError(
                    "the families' Taylor projections do not commute"
                )

    projections: dict[tuple[int, int], Matrix] = {}
    total = linalg.zeros(n_vars, n_vars)
    for r, q1 in enumerate(qs1):
        for s, q2 in enumerate(qs2):
            p = linalg.mat_mul(q1, q2)
            projections[(r, s)] = p
            total = linalg.mat_add(total, p)
    if total != linalg.identity(n_vars):
        raise NotDoubleStructureError(
            "the joint projections do not resolve the identity"
        )
    pairs = sorted(projections)
    for a in pairs:
        for b in pairs:
            prod = linalg.mat_mul(projections[a], projections[b])
            expected = projections[a] if a == b else linalg.zeros(n_vars, n_vars)
            if prod != expected:
                raise NotDoubleStructureError(
                    f"joint projections {a} and {b} are not complementary"
                )

    basis_cols = []
    orders: list[tuple[int, int]] = []
    for rs in pairs:
        p = projections[rs]
        for j in linalg.independent_columns(p):
            basis_cols.append(linalg.column(p, j))
            orders.append(rs)
    if len(basis_cols) != n_vars:
        raise NotDoubleStructureError("joint projection images do not fill the chart")
    cmat = linalg.mat_from_cols(basis_cols)
    cinv = linalg.inverse(cmat)

    ext = chart.extend(((h1.param, 0), (h2.param, 0)))
    composite = _composite_entries(h2, h1, ext)
    shifted = [
        composite[v] - WPolynomial.constant(ext, point[v]) for v in chart.names
    ]

    counter: dict[tuple[int, int], int] = {}
    new_vars: list[tuple[str, int]] = []
    biweights: list[tuple[int, int]] = []
    pullbacks: list[WPolynomial] = []
    for row, (r, s) in zip(cinv, orders):
        pushed = WPolynomial.zero(ext)
        for coeff, entry in zip(row, shifted):
            if coeff:
                pushed = pushed + entry * coeff
        by_t = pushed.coefficients_in(h1.param)
        coeff_t = by_t.get(r)
        if coeff_t is None:
            new_coord = WPolynomial.zero(chart)
        else:
            by_u = coeff_t.coefficients_in(h2.param)
            coeff_u = by_u.get(s)
            new_coord = (
                coeff_u.restrict_chart(chart) if coeff_u is not None
                else WPolynomial.zero(chart)
            )
        counter[(r, s)] = counter.get((r, s), 0) + 1
        new_vars.append((f"y{r}_{s}_{counter[(r, s)]}", r + s))
        biweights.append((r, s))
        pullbacks.append(new_coord)

    new_chart = GradedChart(f"{chart.name}_bh", tuple(new_vars))
    phi = PolyMap(chart, new_chart, dict(zip((v for v, _ in new_vars), pullbacks)))

    for h, exponent_of in ((h1, 0), (h2, 1)):
        hext = h.extended_chart
        tvar = WPolynomial.variable(hext, h.param)
        sigma = dict(h.entries)
        sigma[h.param] = tvar
        for (name, _), (r, s) in zip(new_vars, biweights):
            p = phi.pullbacks[name]
            moved = p.substitute(sigma, into=hext)
            power = r if exponent_of == 0 else s
            if moved != p.lift(hext) * tvar**power:
                raise NotGradedActionError(
                    f"joint coordinate {name!r} does not scale by "
                    f"{h.param}^{power}"
                )

    inverse = _invert_coordinate_change(phi, point)
    return Bihomogenization(
        chart=new_chart,
        biweights=tuple(biweights),
        homogenizer=phi,
        inverse=inverse,
        projections=projections,
        theta=point,
    )


def flip(m: int, n: int, chart: GradedChart) -> PolyMap:
    """Swap the two levels of an iterated jet adaptation, as a renaming.

    The source is the order-n adaptation of the order-m adaptation; the
    target nests the orders the other way around. A variable that is the
    outer level-q jet of the inner level-p jet of x pulls back to the outer
    level-p jet of the inner level-q jet of x.
    """
    inner_src = adapt(chart, m)
    outer_src = adapt(inner_src.chart, n)
    inner_dst = adapt(chart, n)
    outer_dst = adapt(inner_dst.chart, m)

    pullbacks: dict[str, WPolynomial] = {}
    for name in outer_dst.chart.names:
        mid, q = outer_dst.level_of(name)
        base, p = inner_dst.level_of(mid)
        source_name = outer_src.jet_name(inner_src.jet_name(base, q), p)
        pullbacks[name] = WPolynomial.variable(outer_src.chart, source_name)
    return PolyMap(outer_src.chart, outer_dst.chart, pullbacks)
