"""Seeded random builders shared by the unit and acceptance tests.

Everything takes an explicit random.Random so test runs are reproducible;
nothing here touches the global RNG state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from gradua.charts import GradedChart
from gradua.graded import PolyMap, ActionFamily, compose, invert_automorphism
from gradua.wpoly import WPolynomial, monomial_basis

_LETTERS = "xyz"


def random_chart(
    rng: random.Random, max_rank: tuple[int, ...] = (3, 2, 1), name: str = "R"
) -> GradedChart:
    """A chart with up to max_rank[w-1] variables of weight w, at least one."""
    while True:
        counts = [rng.randint(0, m) for m in max_rank]
        if any(counts):
            break
    variables = []
    for w, count in enumerate(counts, start=1):
        letter = _LETTERS[(w - 1) % len(_LETTERS)]
        for i in range(1, count + 1):
            variables.append((f"{letter}{i}", w))
    return GradedChart(name, tuple(variables))


def random_coefficient(rng: random.Random) -> Fraction:
    num = rng.choice([-3, -2, -1, 1, 2, 3])
    den = rng.choice([1, 1, 1, 2, 3])
    return Fraction(num, den)


def random_homogeneous(
    rng: random.Random,
    chart: GradedChart,
    weight: int,
    max_terms: int = 2,
    exclude_linear: bool = False,
    min_terms: int = 0,
) -> WPolynomial:
    """A sparse homogeneous polynomial of the given weighted degree."""
    basis = monomial_basis(chart, weight)
    if exclude_linear:
        basis = [m for m in basis if sum(e for _, e in m) > 1]
    if not basis:
        return WPolynomial.zero(chart)
    count = rng.randint(min(min_terms, len(basis)), min(max_terms, len(basis)))
    acc = WPolynomial.zero(chart)
    for mono in rng.sample(basis, count):
        acc = acc + WPolynomial.monomial(chart, dict(mono), random_coefficient(rng))
    return acc


def random_unipotent(rng: random.Random, chart: GradedChart) -> PolyMap:
    """Identity plus nonlinear same-weight corrections; always invertible."""
    pullbacks = {}
    for v, w in chart.variables:
        correction = random_homogeneous(rng, chart, w, exclude_linear=True)
        pullbacks[v] = WPolynomial.variable(chart, v) + correction
    return PolyMap(chart, chart, pullbacks)


def random_linear(rng: random.Random, chart: GradedChart) -> PolyMap:
    """A weight-preserving linear automorphism built as L * D * U per block."""
    pullbacks = {}
    for w in sorted(set(chart.weights)):
        names = [v for v, wt in chart.variables if wt == w]
        m = len(names)
        lower = [
            [
                Fraction(1) if i == j else (Fraction(rng.randint(-2, 2)) if i > j else Fraction(0))
                for j in range(m)
            ]
            for i in range(m)
        ]
        upper = [
            [
                Fraction(1) if i == j else (Fraction(rng.randint(-2, 2)) if i < j else Fraction(0))
                for j in range(m)
            ]
            for i in range(m)
        ]
        diag = [Fraction(rng.choice([-2, -1, 1, 2])) for _ in range(m)]
        block = [
            [
                sum(lower[i][k] * diag[k] * upper[k][j] for k in range(m))
                for j in range(m)
            ]
            for i in range(m)
        ]
        for i, v in enumerate(names):
            acc = WPolynomial.zero(chart)
            for j, u in enumerate(names):
                if block[i][j]:
                    acc = acc + WPolynomial.variable(chart, u) * block[i][j]
            pullbacks[v] = acc
    return PolyMap(chart, chart, pullbacks)


def random_graded_automorphism(rng: random.Random, chart: GradedChart) -> PolyMap:
    return compose(random_unipotent(rng, chart), random_linear(rng, chart))


def conjugated_action(
    rng: random.Random, chart: GradedChart, param: str = "t"
) -> tuple[ActionFamily, PolyMap]:
    """A standard family dressed up by a random graded automorphism.

    Returns the family and the conjugating map gamma, which satisfies
    gamma(h_t(y)) = t-scaling of gamma(y), so gamma is a valid homogenizer.
    """
    gamma = random_graded_automorphism(rng, chart)
    gamma_inv = invert_automorphism(gamma)
    ext = chart.extend(((param, 0),))
    tvar = WPolynomial.variable(ext, param)
    sigma = {
        u: gamma.pullbacks[u].lift(ext) * tvar ** chart.weight_of(u)
        for u in chart.names
    }
    entries = {
        v: gamma_inv.pullbacks[v].substitute(sigma, into=ext) for v in chart.names
    }
    return ActionFamily(chart, param, entries), gamma
