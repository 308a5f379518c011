"""Higher-order tangent lifts: adapted charts, prolongation, reordering.

Adapting a chart to order k introduces, for every variable x of weight w,
jet variables at levels 1..k recording the coefficients of a curve's Taylor
expansion; the level-j variable carries weight w + j. Level-0 variables keep
their names, level-j variables get a tick marker and the level as suffix
(x'1, x'2, ...). The marker grows by one tick whenever the underlying names
already contain ticks, so iterated adaptation never produces colliding or
ambiguous names.

Prolonging a polynomial map pushes it to the adapted charts by substituting
truncated Taylor curves and reading off coefficients; prolonging a parameter
family does the same entrywise, keeping the family parameter inert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .charts import GradedChart, fresh_name
from .errors import DomainError
from .graded import ActionFamily, PolyMap
from .wpoly import WPolynomial


@dataclass(frozen=True)
class AdaptedChart:
    """A chart together with jet variables up to a fixed level.

    jet_orders[i] is the level of chart.variables[i]; base_names[i] is the
    underlying variable it is a jet of (itself, at level 0).
    """

    source: GradedChart
    order: int
    marker: str
    chart: GradedChart
    jet_orders: tuple[int, ...]
    base_names: tuple[str, ...]

    def jet_name(self, base: str, level: int) -> str:
        if level < 0 or level > self.order:
            raise DomainError(f"level {level} outside 0..{self.order}")
        self.source.index_of(base)
        return base if level == 0 else f"{base}{self.marker}{level}"

    def level_of(self, name: str) -> tuple[str, int]:
        """Underlying variable and level of an adapted variable."""
        i = self.chart.index_of(name)
        return self.base_names[i], self.jet_orders[i]


def _tick_marker(names: tuple[str, ...]) -> str:
    longest = 0
    for name in names:
        run = 0
        for ch in name:
            run = run + 1 if ch == "'" else 0
            longest = max(longest, run)
    return "'" * (longest + 1)


def adapt(chart: GradedChart, order: int, marker: str | None = None) -> AdaptedChart:
    """Chart of jets up to the given level, ordered level-major."""
    if order < 0:
        raise DomainError("jet order must be nonnegative")
    if marker is None:
        marker = _tick_marker(chart.names)
    variables: list[tuple[str, int]] = []
    jet_orders: list[int] = []
    base_names: list[str] = []
    for k in range(order + 1):
        for v, w in chart.variables:
            name = v if k == 0 else f"{v}{marker}{k}"
            variables.append((name, w + k))
            jet_orders.append(k)
            base_names.append(v)
    jet_chart = GradedChart(f"{chart.name}_j{order}", tuple(variables))
    return AdaptedChart(
        chart, order, marker, jet_chart, tuple(jet_orders), tuple(base_names)
    )


def _taylor_components(
    p: WPolynomial,
    source: AdaptedChart,
    order: int,
    inert: tuple[str, ...] = (),
) -> list[WPolynomial]:
    """Levels 0..order of p along truncated Taylor curves.

    Every base variable is replaced by its level sum x + s*x'1 + s^2/2*x'2
    + ... with a fresh curve parameter s; component k is k! times the s^k
    coefficient. Extra weight-0 variables of p (a family parameter, say)
    ride along untouched when named in inert.
    """
    jet_chart = source.chart
    taken = jet_chart.names + inert
    s = fresh_name("s", taken)
    work = jet_chart.extend(((s, 0),) + tuple((v, 0) for v in inert))
    svar = WPolynomial.variable(work, s)

    sigma: dict[str, WPolynomial] = {}
    for v in source.source.names:
        acc = WPolynomial.zero(work)
        power = WPolynomial.constant(work, 1)
        for k in range(source.order + 1):
            jv = WPolynomial.variable(work, source.jet_name(v, k))
            acc = acc + jv * power * Fraction(1, math.factorial(k))
            power = power * svar
        sigma[v] = acc
    for v in inert:
        sigma[v] = WPolynomial.variable(work, v)

    expanded = p.substitute(sigma, into=work)
    by_power = expanded.coefficients_in(s)
    restrict_to = jet_chart if not inert else work.restrict(jet_chart.names + inert)
    components: list[WPolynomial] = []
    for k in range(order + 1):
        coeff = by_power.get(k)
        if coeff is None:
            components.append(WPolynomial.zero(restrict_to))
        else:
            components.append(coeff.restrict_chart(restrict_to) * math.factorial(k))
    return components


def prolong(phi: PolyMap, order: int) -> PolyMap:
    """Lift a polynomial map to the order-k jet charts.

    The level-j pullback of a target jet variable is the j-th Taylor
    coefficient (times j!) of the original pullback along a curve, so
    level 1 is the usual derivative rule and higher levels follow the
    repeated chain rule.
    """
    src = adapt(phi.source, order)
    dst = adapt(phi.target, order)
    pullbacks: dict[str, WPolynomial] = {}
    for v in phi.target.names:
        components = _taylor_components(phi.pullbacks[v], src, order)
        for k, comp in enumerate(components):
            pullbacks[dst.jet_name(v, k)] = comp
    return PolyMap(src.chart, dst.chart, pullbacks)


def jet_action(ac: AdaptedChart, param: str = "t") -> ActionFamily:
    """The reparametrization family: each level-k variable scales by t^k.

    Levels, not chart weights, drive the scaling; on the adapted chart of a
    graded chart this is a second, independent family alongside the one the
    underlying weights induce.
    """
    param = fresh_name(param, ac.chart.names)
    ext = ac.chart.extend(((param, 0),))
    tvar = WPolynomial.variable(ext, param)
    entries = {}
    for name, level in zip(ac.chart.names, ac.jet_orders):
        entries[name] = WPolynomial.variable(ext, name) * tvar**level
    return ActionFamily(ac.chart, param, entries)


def iota(order: int, chart: GradedChart) -> PolyMap:
    """Embed first-level jets at the top level of a higher adapted chart.

    The image curve is the monomial reparametrization s -> s**order of a
    line, so the top level pulls back to the first-level variable, level 0
    to the base variable, and everything strictly between to zero.
    """
    if order < 1:
        raise DomainError("iota needs a target level of at least 1")
    one = adapt(chart, 1)
    top = adapt(chart, order)
    pullbacks: dict[str, WPolynomial] = {}
    for name, base, level in zip(top.chart.names, top.base_names, top.jet_orders):
        if level == 0:
            pullbacks[name] = WPolynomial.variable(one.chart, base)
        elif level == order:
            pullbacks[name] = WPolynomial.variable(one.chart, one.jet_name(base, 1))
        else:
            pullbacks[name] = WPolynomial.zero(one.chart)
    return PolyMap(one.chart, top.chart, pullbacks)


def jet_projection(ac: AdaptedChart, order: int) -> PolyMap:
    """Forget jet levels above the given one.

    The pullback is the inclusion of the lower chart's variables, which all
    exist under the same names in the higher chart.
    """
    if order < 0 or order > ac.order:
        raise DomainError(f"target level {order} outside 0..{ac.order}")
    low = adapt(ac.source, order, ac.marker)
    pullbacks = {
        v: WPolynomial.variable(ac.chart, v) for v in low.chart.names
    }
    return PolyMap(ac.chart, low.chart, pullbacks)


def prolong_action(h: ActionFamily, order: int) -> ActionFamily:
    """Lift a parameter family to the adapted chart, parameter inert.

    The family parameter is not given jet variables; each map of the family
    is prolonged as-is, and the results assemble into a family on the
    adapted chart under the same parameter name.
    """
    src = adapt(h.chart, order)
    pullbacks: dict[str, WPolynomial] = {}
    for v in h.chart.names:
        components = _taylor_components(h.entries[v], src, order, inert=(h.param,))
        for k, comp in enumerate(components):
            pullbacks[src.jet_name(v, k)] = comp
    return ActionFamily(src.chart, h.param, pullbacks)
