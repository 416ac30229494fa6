"""Scenario comparison and evaluation of additional facility sites.

Placements are ranked by the Gini coefficient of the resulting utilisation
ratios, lowest first; equal scores fall back to lexicographic order of the
(sorted) site coordinates.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .errors import EmptyCandidates, MismatchedRegions, TooManyCombinations, ZeroTotalUtilisation
from .inequality import InequalityReport, inequality_report
from .model import (
    Facility,
    Mode,
    Scenario,
    distance_factor,
    nearest_facility,
    override_ratios,
    round_trip_distance,
    simulate_region,
)

MAX_COMBINATIONS = 10**6
_CHUNK = 65536

Site = tuple[float, float]


def evaluate(
    scenario: Scenario,
    epsilons: Sequence[float] = (),
    ratios: Mapping[int, float] | None = None,
) -> InequalityReport:
    """Simulate the region and summarise the inequality of its ratios.

    ``ratios`` (keyed by LGA index) replace the computed ratios, e.g. to
    reproduce a published table exactly.
    """
    results = simulate_region(scenario)
    if ratios is not None:
        results = override_ratios(results, ratios)
    return inequality_report(results, epsilons)


@dataclass(frozen=True)
class ScenarioComparison:
    baseline_report: InequalityReport
    variant_report: InequalityReport
    delta_gini: float
    delta_t: tuple[float, ...]


def _region_key(scenario: Scenario):
    return [(lga.index, lga.location) for lga in scenario.ordered_lgas()]


def compare(baseline: Scenario, variant: Scenario, epsilons: Sequence[float] = ()) -> ScenarioComparison:
    if _region_key(baseline) != _region_key(variant):
        raise MismatchedRegions("baseline and variant must contain the same LGAs at the same locations")
    base = evaluate(baseline, epsilons)
    var = evaluate(variant, epsilons)
    delta_t = tuple(v.ratio - b.ratio for b, v in zip(base.results, var.results))
    return ScenarioComparison(base, var, var.gini - base.gini, delta_t)


@dataclass
class PlanResult:
    placement: tuple[Site, ...]
    gini: float
    scenario: Scenario = field(repr=False)

    @cached_property
    def variant(self) -> Scenario:
        return add_sites(self.scenario, self.placement)

    @cached_property
    def report(self) -> InequalityReport:
        return evaluate(self.variant)


def add_sites(scenario: Scenario, sites: Sequence[Site]) -> Scenario:
    """Scenario with a new facility at each site (ids ``new1``, ``new2``, ...)."""
    taken = {f.id for f in scenario.facilities}
    new = []
    n = 0
    for site in sites:
        n += 1
        while f"new{n}" in taken:
            n += 1
        new.append(Facility(f"new{n}", site))
    return scenario.with_facilities(new)


def _factor_arrays(scenario: Scenario, sites: Sequence[Site]):
    lgas = scenario.ordered_lgas()
    spec = scenario.distance_factor
    base = np.array([distance_factor(spec, nearest_facility(lga, scenario.facilities)[1]) for lga in lgas])
    cand = np.array(
        [[distance_factor(spec, round_trip_distance(lga.location, s)) for lga in lgas] for s in sites]
    ).reshape(len(sites), len(lgas))
    return base, cand


def _score(base, cand, combos, c, jobs, backend):
    if jobs <= 1 or len(combos) <= _CHUNK:
        scores = kernels.combo_gini(base, cand, combos, c, backend)
    else:
        chunks = [combos[i : i + _CHUNK] for i in range(0, len(combos), _CHUNK)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda ch: kernels.combo_gini(base, cand, ch, c, backend), chunks))
        scores = np.concatenate(parts)
    if np.isnan(scores).any():
        raise ZeroTotalUtilisation("a placement leaves every utilisation ratio at zero")
    return scores


def plan_additional(
    scenario: Scenario,
    candidates: Sequence[Site],
    k: int,
    strategy: str = "exhaustive",
    top: int | None = None,
    jobs: int = 1,
    backend: str | None = None,
) -> list[PlanResult]:
    """Rank placements of ``k`` new facilities drawn from ``candidates``.

    ``exhaustive`` scores every k-subset. ``greedy`` fixes one site per round
    (the best given the sites already fixed) and returns the ranking of its
    final round. Only simulated-mode scenarios are meaningful here, since
    observed ratios do not depend on facility locations.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not candidates:
        raise EmptyCandidates("no candidate sites given")
    if scenario.mode is not Mode.SIMULATED:
        raise ValueError("facility planning needs a simulated-mode scenario")
    if strategy not in ("exhaustive", "greedy"):
        raise ValueError(f"unknown strategy {strategy!r}")
    sites = sorted((float(x), float(y)) for x, y in candidates)
    if k > len(sites):
        raise ValueError(f"cannot place {k} facilities from {len(sites)} candidates")
    base, cand = _factor_arrays(scenario, sites)
    c = scenario.multiplier_c

    if strategy == "exhaustive":
        total = math.comb(len(sites), k)
        if total > MAX_COMBINATIONS:
            raise TooManyCombinations(f"C({len(sites)}, {k}) = {total} exceeds {MAX_COMBINATIONS}")
        # lexicographic index tuples over sorted sites = lexicographic site order
        flat = itertools.chain.from_iterable(itertools.combinations(range(len(sites)), k))
        combos = np.fromiter(flat, dtype=np.intp, count=total * k).reshape(total, k)
        scores = _score(base, cand, combos, c, jobs, backend)
        order = np.argsort(scores, kind="stable")
        if top is not None:
            order = order[:top]
        return [PlanResult(tuple(sites[j] for j in combos[r]), float(scores[r]), scenario) for r in order]

    chosen: list[int] = []
    for _ in range(k):
        rest = [j for j in range(len(sites)) if j not in chosen]
        combos = np.array([chosen + [j] for j in rest], dtype=np.intp)
        scores = _score(base, cand, combos, c, jobs, backend)
        best = int(np.argmin(scores))  # first minimum = lowest site
        last_round = [(float(scores[i]), tuple(sorted(sites[j] for j in row))) for i, row in enumerate(combos)]
        chosen.append(rest[best])
    last_round.sort()
    if top is not None:
        last_round = last_round[:top]
    return [PlanResult(placement, score, scenario) for score, placement in last_round]
