"""Lorenz curve and scalar inequality indices over per-LGA utilisation ratios.

Each LGA carries equal weight ``1/N``. The curve is built from ratios sorted
ascending, with the origin prepended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NonPositiveRatio, ZeroTotalUtilisation
from .model import LgaResult


@dataclass(frozen=True)
class LorenzPoint:
    f: float
    phi: float


@dataclass(frozen=True)
class LorenzCurve:
    points: tuple[LorenzPoint, ...]
    # LGA index at each sorted position (empty when built from bare ratios)
    source_order: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.points) - 1

    def coords(self) -> list[tuple[float, float]]:
        return [(p.f, p.phi) for p in self.points]


@dataclass(frozen=True)
class InequalityReport:
    curve: LorenzCurve
    gini: float
    atkinson: Mapping[float, float] = field(default_factory=dict)
    sorted_ratios: tuple[float, ...] = ()
    results: tuple[LgaResult, ...] = ()

    @property
    def total_separations(self) -> int:
        return sum(r.actual_separations for r in self.results)

    @property
    def worst_ratio(self) -> float:
        return min(self.sorted_ratios)


def sort_ratios(results: Iterable[tuple[int, float]]) -> list[tuple[int, float]]:
    """Order ``(lga_index, t)`` pairs by ascending t, then ascending index."""
    pairs = [(int(i), float(t)) for i, t in results]
    for i, t in pairs:
        if not t >= 0:
            raise ValueError(f"ratio for LGA {i} must be >= 0, got {t!r}")
    return sorted(pairs, key=lambda p: (p[1], p[0]))


def lorenz_curve(sorted_ratios: Sequence[float], source_order: Sequence[int] = ()) -> LorenzCurve:
    """Cumulative (share of LGAs, share of utilisation) points, origin first.

    Parameters
    ----------
    sorted_ratios : sequence of float
        Non-negative ratios in ascending order.
    source_order : sequence of int, optional
        LGA index of each ratio, carried through for labelling.

    Raises
    ------
    ZeroTotalUtilisation
        If every ratio is zero, so no utilisation shares exist.
    """
    ts = [float(t) for t in sorted_ratios]
    n = len(ts)
    if n == 0:
        raise ValueError("at least one ratio is required")
    if any(not t >= 0 for t in ts):
        raise ValueError("ratios must be non-negative")
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise ValueError("ratios must be sorted ascending")
    if source_order and len(source_order) != n:
        raise ValueError("source_order length does not match ratios")
    cum = []
    acc = 0.0
    for t in ts:
        acc += t
        cum.append(acc)
    total = acc
    if total <= 0:
        raise ZeroTotalUtilisation("all utilisation ratios are zero; cumulative shares are undefined")
    points = [LorenzPoint(0.0, 0.0)]
    points += [LorenzPoint((i + 1) / n, c / total) for i, c in enumerate(cum)]
    return LorenzCurve(tuple(points), tuple(int(i) for i in source_order))


def gini(curve: LorenzCurve) -> float:
    """One minus twice the trapezoid area under the curve, clamped to [0, 1]."""
    area2 = 0.0
    pts = curve.points
    for prev, cur in zip(pts, pts[1:]):
        area2 += (cur.f - prev.f) * (cur.phi + prev.phi)
    return min(1.0, max(0.0, 1.0 - area2))


def gini_mean_difference(ratios: Sequence[float]) -> float:
    """Gini from the mean absolute difference over all ordered pairs."""
    xs = [float(x) for x in ratios]
    n = len(xs)
    mean = sum(xs) / n
    if mean <= 0:
        raise ZeroTotalUtilisation("mean ratio is zero")
    mad = sum(abs(a - b) for a in xs for b in xs)
    return mad / (2 * n * n * mean)


def atkinson(ratios: Sequence[float], epsilon: float) -> float:
    """Atkinson index with inequality aversion ``epsilon``.

    ``1 - ede / mean`` where the equally-distributed equivalent ``ede`` is the
    geometric mean for ``epsilon == 1`` and the power mean of order
    ``1 - epsilon`` otherwise.
    """
    if not epsilon >= 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    xs = [float(x) for x in ratios]
    if not xs:
        raise ValueError("at least one ratio is required")
    if any(x < 0 for x in xs):
        raise ValueError("ratios must be non-negative")
    n = len(xs)
    mean = sum(xs) / n
    if mean <= 0:
        raise ZeroTotalUtilisation("mean ratio is zero")
    if epsilon >= 1 and min(xs) <= 0:
        raise NonPositiveRatio(f"Atkinson index with epsilon={epsilon} needs all ratios > 0")
    ys = [x / mean for x in xs]
    if epsilon == 1:
        ede = math.exp(sum(math.log(y) for y in ys) / n)
    else:
        p = 1.0 - epsilon
        ede = (sum(y**p for y in ys) / n) ** (1.0 / p)
    return min(1.0, max(0.0, 1.0 - ede))


def inequality_report(results: Sequence[LgaResult], epsilons: Sequence[float] = ()) -> InequalityReport:
    ordered = sort_ratios((r.lga_index, r.ratio) for r in results)
    ts = [t for _, t in ordered]
    curve = lorenz_curve(ts, [i for i, _ in ordered])
    return InequalityReport(
        curve=curve,
        gini=gini(curve),
        atkinson={float(e): atkinson(ts, e) for e in epsilons},
        sorted_ratios=tuple(ts),
        results=tuple(results),
    )
