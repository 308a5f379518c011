"""Analysis of one-parameter polynomial families: when is one a grading?

A family h assigns to the parameter t a polynomial self-map h_t. The engine
decides the two laws exactly, symbolically in t and s:

    semigroup   h_t after h_s equals h_(t*s)
    monoid      semigroup and h_1 = identity

For a monoid family, the derivative of h_t at a fixed point theta of h_0 is
a matrix H(t) with polynomial entries, and its t-Taylor coefficient matrices
Q_0 .. Q_n are complementary projections summing to the identity. Picking a
basis of each image and pushing the dual linear coordinates through h_t
yields, weight by weight, new coordinates on which the family acts by plain
powers of t. That change of coordinates (the homogenizer) is built, checked
exactly, and inverted; its existence is what makes the family a grading in
disguise.

The construction and every claimed identity are verified by exact rational
arithmetic; nothing is trusted to hold just because the theory says so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .charts import GradedChart, fresh_name
from .errors import (
    DegenerateActionError,
    DomainError,
    EngineDefectError,
    InconsistentActionError,
    NotGradedActionError,
    SingularMatrixError,
)
from .graded import ActionFamily, PolyMap, standard_action
from .linalg import Matrix
from .wpoly import WPolynomial

_ZERO = Fraction(0)
_ONE = Fraction(1)

_INVERSE_DEGREE_CAP = 64


@dataclass(frozen=True)
class LawWitness:
    """One broken law: which one, on which variable, and the exact defect."""

    law: str
    variable: str
    difference: WPolynomial


@dataclass(frozen=True)
class LawReport:
    semigroup_ok: bool
    monoid_ok: bool
    witnesses: tuple[LawWitness, ...]


@dataclass(frozen=True)
class Homogenization:
    """A homogenizing coordinate change and the data used to build it."""

    chart: GradedChart
    homogenizer: PolyMap
    inverse: PolyMap
    projections: tuple[Matrix, ...]
    theta: dict[str, Fraction]
    orders: tuple[int, ...]


@dataclass(frozen=True)
class AnalysisReport:
    """Everything the action analysis produces, law verdicts first."""

    semigroup_ok: bool
    monoid_ok: bool
    witnesses: tuple[LawWitness, ...]
    base_projection: PolyMap | None = None
    degree: int | None = None
    projections: tuple[Matrix, ...] | None = None
    homogenizer: PolyMap | None = None
    homogenized_chart: GradedChart | None = None
    inverse_homogenizer: PolyMap | None = None
    theta: dict[str, Fraction] | None = None


def verify_laws(h: ActionFamily) -> LawReport:
    """Check the semigroup and monoid laws as exact polynomial identities."""
    chart = h.chart
    t = h.param
    s = fresh_name("s", chart.names + (t,))
    ext2 = chart.extend(((t, 0), (s, 0)))
    tvar = WPolynomial.variable(ext2, t)
    svar = WPolynomial.variable(ext2, s)

    entries_s: dict[str, WPolynomial] = {}
    rename = {v: WPolynomial.variable(ext2, v) for v in chart.names}
    rename[t] = svar
    for v in chart.names:
        entries_s[v] = h.entries[v].substitute(rename, into=ext2)

    compose_sigma = dict(entries_s)
    compose_sigma[t] = tvar
    product_sigma = {v: WPolynomial.variable(ext2, v) for v in chart.names}
    product_sigma[t] = tvar * svar

    witnesses: list[LawWitness] = []
    for v in chart.names:
        composed = h.entries[v].substitute(compose_sigma, into=ext2)
        merged = h.entries[v].substitute(product_sigma, into=ext2)
        if composed != merged:
            witnesses.append(LawWitness("semigroup", v, composed - merged))
    semigroup_ok = not witnesses

    unit = h.at(1)
    for v in chart.names:
        expected = WPolynomial.variable(chart, v)
        if unit.pullbacks[v] != expected:
            witnesses.append(LawWitness("monoid", v, expected - unit.pullbacks[v]))
    monoid_ok = semigroup_ok and all(w.law != "monoid" for w in witnesses)

    return LawReport(semigroup_ok, monoid_ok, tuple(witnesses))


def _require_monoid(h: ActionFamily, laws: LawReport | None) -> LawReport:
    laws = laws if laws is not None else verify_laws(h)
    if not laws.monoid_ok:
        broken = ", ".join(sorted({w.law for w in laws.witnesses}))
        raise InconsistentActionError(f"the family breaks the {broken} law")
    return laws


def _resolve_theta(
    h: ActionFamily, theta: Mapping[str, Fraction | int] | None
) -> dict[str, Fraction]:
    chart = h.chart
    if theta is None:
        point = {v: _ZERO for v in chart.names}
    else:
        point = {v: Fraction(theta.get(v, 0)) for v in chart.names}
        unknown = set(theta) - set(chart.names)
        if unknown:
            raise DomainError(f"theta mentions unknown variables {sorted(unknown)}")
    zero_map = h.at(0)
    for v in chart.names:
        if zero_map.pullbacks[v].evaluate(point) != point[v]:
            hint = "" if theta is not None else "; pass a fixed point of h_0"
            raise DomainError(f"theta is not fixed by the parameter-0 map{hint}")
    return point


def base_projection(h: ActionFamily, laws: LawReport | None = None) -> PolyMap:
    """The parameter-0 self-map; checked to be idempotent."""
    _require_monoid(h, laws)
    p0 = h.at(0)
    if p0.then(p0) != p0:
        raise InconsistentActionError("the parameter-0 map is not idempotent")
    return p0


def _jacobian_at(
    h: ActionFamily, theta: Mapping[str, Fraction]
) -> list[list[WPolynomial]]:
    """Matrix of entry derivatives at theta, entries polynomial in t."""
    chart = h.chart
    ext = h.extended_chart
    consts = {v: WPolynomial.constant(ext, theta[v]) for v in chart.names}
    consts[h.param] = WPolynomial.variable(ext, h.param)
    rows = []
    for v in chart.names:
        row = []
        for u in chart.names:
            d = h.entries[v].differentiate(u)
            row.append(d.substitute(consts, into=ext))
        rows.append(row)
    return rows


def taylor_projections(
    h: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
    laws: LawReport | None = None,
) -> tuple[Matrix, ...]:
    """Taylor coefficient matrices Q_0 .. Q_n of the derivative at theta.

    Q_r is 1/r! times the r-th t-derivative of H(t) at t=0, which for
    polynomial entries is just the t^r coefficient matrix. The matrices are
    checked to be complementary projections summing to the identity.
    """
    _require_monoid(h, laws)
    point = _resolve_theta(h, theta)
    chart = h.chart
    n_vars = len(chart)
    jac = _jacobian_at(h, point)
    degree = 0
    coeff_rows: list[list[dict[int, Fraction]]] = []
    for row in jac:
        crow = []
        for p in row:
            by_power = {
                k: q.constant_term() for k, q in p.coefficients_in(h.param).items()
            }
            if by_power:
                degree = max(degree, max(by_power))
            crow.append(by_power)
        coeff_rows.append(crow)

    qs: list[Matrix] = []
    for r in range(degree + 1):
        qs.append(
            tuple(
                tuple(coeff_rows[i][j].get(r, _ZERO) for j in range(n_vars))
                for i in range(n_vars)
            )
        )

    total = linalg.zeros(n_vars, n_vars)
    for q in qs:
        total = linalg.mat_add(total, q)
    if total != linalg.identity(n_vars):
        stacked = tuple(row for q in qs for row in q)
        if linalg.rank(stacked) < n_vars:
            raise DegenerateActionError(
                "some direction is annihilated by every Taylor projection"
            )
        raise NotGradedActionError("Taylor projections do not sum to the identity")
    for r, qr in enumerate(qs):
        for s, qs_ in enumerate(qs):
            prod = linalg.mat_mul(qr, qs_)
            expected = qr if r == s else linalg.zeros(n_vars, n_vars)
            if prod != expected:
                raise NotGradedActionError(
                    f"Taylor coefficients Q_{r} and Q_{s} are not complementary "
                    "projections"
                )
    return tuple(qs)


def homogenize(
    h: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
    laws: LawReport | None = None,
) -> Homogenization:
    """Build coordinates on which the family acts by plain powers of t.

    For each order r with a nonzero projection Q_r, a maximal independent set
    of columns of Q_r is selected by exact elimination (first pivot wins).
    The dual linear coordinates are pushed through h_t and their t^r Taylor
    coefficients become the new weight-r coordinates. Each new coordinate is
    checked to scale exactly by t**r, and the collected change of coordinates
    is inverted and verified two-sided.
    """
    laws = _require_monoid(h, laws)
    point = _resolve_theta(h, theta)
    chart = h.chart
    qs = taylor_projections(h, point, laws)
    n_vars = len(chart)

    basis_cols: list[tuple[Fraction, ...]] = []
    orders: list[int] = []
    for r, q in enumerate(qs):
        for j in linalg.independent_columns(q):
            basis_cols.append(linalg.column(q, j))
            orders.append(r)
    if len(basis_cols) != n_vars:
        raise NotGradedActionError("projection images do not fill the chart")
    cmat = linalg.mat_from_cols(basis_cols)
    try:
        cinv = linalg.inverse(cmat)
    except SingularMatrixError as exc:
        raise NotGradedActionError("adapted basis is not invertible") from exc

    ext = h.extended_chart
    shifted_entries = [
        h.entries[v].lift(ext) - WPolynomial.constant(ext, point[v])
        for v in chart.names
    ]

    counter: dict[int, int] = {}
    new_vars: list[tuple[str, int]] = []
    pullbacks: list[WPolynomial] = []
    for row, r in zip(cinv, orders):
        pushed = WPolynomial.zero(ext)
        for coeff, entry in zip(row, shifted_entries):
            if coeff:
                pushed = pushed + entry * coeff
        coeff_r = pushed.coefficients_in(h.param).get(r)
        new_coord = (
            coeff_r.restrict_chart(chart) if coeff_r is not None
            else WPolynomial.zero(chart)
        )
        counter[r] = counter.get(r, 0) + 1
        new_vars.append((f"y{r}_{counter[r]}", r))
        pullbacks.append(new_coord)

    ordering = sorted(range(n_vars), key=lambda i: (new_vars[i][1], i))
    new_chart = GradedChart(f"{chart.name}_h", tuple(new_vars[i] for i in ordering))
    phi = PolyMap(
        chart,
        new_chart,
        {new_vars[i][0]: pullbacks[i] for i in ordering},
    )

    tvar = WPolynomial.variable(ext, h.param)
    action_sigma = dict(h.entries)
    action_sigma[h.param] = tvar
    for name, r in new_vars:
        p = phi.pullbacks[name]
        moved = p.substitute(action_sigma, into=ext)
        if moved != p.lift(ext) * tvar ** r:
            raise NotGradedActionError(
                f"candidate coordinate {name!r} does not scale by t^{r}"
            )

    inverse = _invert_coordinate_change(phi, point)
    return Homogenization(
        chart=new_chart,
        homogenizer=phi,
        inverse=inverse,
        projections=qs,
        theta=point,
        orders=tuple(new_vars[ordering[i]][1] for i in range(n_vars)),
    )


def _invert_coordinate_change(
    phi: PolyMap, theta: Mapping[str, Fraction]
) -> PolyMap:
    """Exact inverse of a polynomial coordinate change fixing theta.

    Runs the fixed-point iteration for the formal inverse, truncated at a
    total degree that starts at a sensible bound and doubles on failure; the
    candidate is accepted only if both composites are exactly the identity.
    """
    chart = phi.source
    new_chart = phi.target
    names = chart.names
    n_vars = len(names)

    lin_rows = []
    for v in new_chart.names:
        p = phi.pullbacks[v]
        lin_rows.append(tuple(p.coefficient({u: 1}) for u in names))
    lmat = tuple(lin_rows)
    try:
        linv = linalg.inverse(lmat)
    except SingularMatrixError as exc:
        raise NotGradedActionError("coordinate change is singular at theta") from exc

    shift = {v: WPolynomial.variable(chart, v) - WPolynomial.constant(chart, theta[v])
             for v in names}
    nonlinear: list[WPolynomial] = []
    for i, v in enumerate(new_chart.names):
        p = phi.pullbacks[v]
        linear = WPolynomial.zero(chart)
        for u, c in zip(names, lin_rows[i]):
            if c:
                linear = linear + shift[u] * c
        nonlinear.append(p - linear)

    new_vars = [WPolynomial.variable(new_chart, v) for v in new_chart.names]
    max_pb_degree = max((p.total_degree() for p in phi.pullbacks.values()), default=1)
    bound = max(new_chart.degree, max_pb_degree, 2)
    while bound <= _INVERSE_DEGREE_CAP:
        candidate = _picard_inverse(
            chart, new_chart, names, theta, linv, nonlinear, new_vars, bound
        )
        inverse = PolyMap(new_chart, chart, candidate)
        if phi.then(inverse).is_identity() and inverse.then(phi).is_identity():
            return inverse
        bound *= 2
    raise NotGradedActionError(
        f"no polynomial inverse of total degree <= {_INVERSE_DEGREE_CAP} exists"
    )


def _picard_inverse(
    chart: GradedChart,
    new_chart: GradedChart,
    names: Sequence[str],
    theta: Mapping[str, Fraction],
    linv: Matrix,
    nonlinear: Sequence[WPolynomial],
    new_vars: Sequence[WPolynomial],
    bound: int,
) -> dict[str, WPolynomial]:
    guesses: list[WPolynomial] = []
    for i, v in enumerate(names):
        acc = WPolynomial.constant(new_chart, theta[v])
        for j, nv in enumerate(new_vars):
            if linv[i][j]:
                acc = acc + nv * linv[i][j]
        guesses.append(acc)
    for _ in range(bound):
        sigma = dict(zip(names, guesses))
        updated: list[WPolynomial] = []
        changed = False
        for i, v in enumerate(names):
            acc = WPolynomial.constant(new_chart, theta[v])
            for j, nv in enumerate(new_vars):
                c = linv[i][j]
                if not c:
                    continue
                correction = nonlinear[j]
                if correction.is_zero():
                    acc = acc + nv * c
                else:
                    pushed = correction.substitute(sigma, into=new_chart)
                    acc = acc + (nv - pushed.truncate_total_degree(bound)) * c
            updated.append(acc)
            if acc != guesses[i]:
                changed = True
        guesses = updated
        if not changed:
            break
    return dict(zip(names, guesses))


def detect_degree(
    h: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
    laws: LawReport | None = None,
) -> int:
    """Largest weight of the homogenized chart."""
    return homogenize(h, theta, laws).chart.degree


def reconstruct_entries(hom: Homogenization, h: ActionFamily) -> dict[str, WPolynomial]:
    """Entries of the family conjugated from the standard one by hom.

    Pull each original variable back through the inverse change, scale the
    new coordinates by their powers of t, and push through the homogenizer.
    For a correct homogenization this reproduces h exactly.
    """
    ext = h.extended_chart
    tvar = WPolynomial.variable(ext, h.param)
    scaled = {
        v: phi_p.lift(ext) * tvar ** hom.chart.weight_of(v)
        for v, phi_p in hom.homogenizer.pullbacks.items()
    }
    out = {}
    for v in h.chart.names:
        out[v] = hom.inverse.pullbacks[v].substitute(scaled, into=ext)
    return out


def extend_negative(
    h: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
    laws: LawReport | None = None,
) -> ActionFamily:
    """The family read over every rational parameter value, negatives included.

    The entries are already polynomial in t, so the extension is the same
    formula; what is verified is that conjugating the full-line standard
    family through the homogenizer reproduces those entries exactly, which
    makes the extension the unique polynomial one. In homogenized
    coordinates the parameter -1 map negates the odd-weight variables, and
    it is an involution.
    """
    laws = _require_monoid(h, laws)
    hom = homogenize(h, theta, laws)
    rebuilt = reconstruct_entries(hom, h)
    for v in h.chart.names:
        if rebuilt[v] != h.entries[v]:
            raise EngineDefectError(
                f"reconstruction through the homogenizer disagrees on {v!r}"
            )
    return ActionFamily(h.chart, h.param, dict(h.entries))


def euler_field(h: ActionFamily) -> tuple[tuple[str, WPolynomial], ...]:
    """Coefficients of the infinitesimal generator at parameter 1.

    For the standard family this is the weight field: each variable times
    its weight.
    """
    chart = h.chart
    out = []
    sigma = {v: WPolynomial.variable(chart, v) for v in chart.names}
    sigma[h.param] = WPolynomial.constant(chart, 1)
    for v in chart.names:
        d = h.entries[v].differentiate(h.param)
        out.append((v, d.substitute(sigma, into=chart)))
    return tuple(out)


def analyze(
    h: ActionFamily,
    theta: Mapping[str, Fraction | int] | None = None,
) -> AnalysisReport:
    """Full pipeline: laws, base projection, projections, homogenization."""
    laws = verify_laws(h)
    if not laws.monoid_ok:
        return AnalysisReport(laws.semigroup_ok, laws.monoid_ok, laws.witnesses)
    p0 = base_projection(h, laws)
    hom = homogenize(h, theta, laws)
    return AnalysisReport(
        semigroup_ok=True,
        monoid_ok=True,
        witnesses=(),
        base_projection=p0,
        degree=hom.chart.degree,
        projections=hom.projections,
        homogenizer=hom.homogenizer,
        homogenized_chart=hom.chart,
        inverse_homogenizer=hom.inverse,
        theta=hom.theta,
    )
