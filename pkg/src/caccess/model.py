"""Region data model and the separation/incidence arithmetic.

A region is a set of LGAs (local government areas) served by one or more
facilities. For each LGA the model derives

* incidence ``I = round(population * rate / 100000)``
* target separations ``T = round(C * I)``
* round-trip distance ``D`` to the nearest facility
* actual separations ``S = round(C * I * g(D))``
* utilisation ratio ``t = C * g(D)``

where ``g`` is a non-increasing distance factor in ``[0, 1]``. In observed mode
``I`` and ``S`` are taken from recorded counts and ``t = S / I``.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

from .errors import EmptyFacilities, InvalidSpec, ValidationError, ZeroIncidence

Point = tuple[float, float]


class Mode(str, enum.Enum):
    SIMULATED = "simulated"
    OBSERVED = "observed"


def round_half_away(value) -> int:
    """Round to the nearest integer, halves away from zero.

    Accepts floats, ints or Decimals. Floats go through ``repr`` so that
    e.g. ``31.8`` is not seen as ``31.799999...``.
    """
    if not isinstance(value, Decimal):
        value = Decimal(repr(value)) if isinstance(value, float) else Decimal(value)
    return int(value.quantize(Decimal(1), rounding=ROUND_HALF_UP))


def _dec(x) -> Decimal:
    return Decimal(repr(x)) if isinstance(x, float) else Decimal(x)


# ---------------------------------------------------------------------------
# distance factor


@dataclass(frozen=True)
class TableFactor:
    """Piecewise-linear distance factor through ``(D, g)`` points.

    Below the first point the factor is 1 (the first point must have g = 1);
    beyond the last point it is held at the last value.
    """

    points: tuple[tuple[float, float], ...]
    interpolation: str = "linear"

    def __post_init__(self):
        pts = tuple((float(d), float(g)) for d, g in self.points)
        object.__setattr__(self, "points", pts)
        if self.interpolation != "linear":
            raise InvalidSpec(f"unsupported interpolation {self.interpolation!r}", "interpolation")
        if len(pts) < 2:
            raise InvalidSpec("a table needs at least 2 points", "points")
        for i, (d, g) in enumerate(pts):
            if not (math.isfinite(d) and math.isfinite(g)):
                raise InvalidSpec("non-finite value", f"points[{i}]")
            if d < 0:
                raise InvalidSpec(f"distance {d} is negative", f"points[{i}]")
            if not 0.0 <= g <= 1.0:
                raise InvalidSpec(f"g = {g} outside [0, 1]", f"points[{i}]")
            if i:
                if d <= pts[i - 1][0]:
                    raise InvalidSpec("distances must be strictly increasing", f"points[{i}]")
                if g > pts[i - 1][1]:
                    raise InvalidSpec("g must be non-increasing in distance", f"points[{i}]")
        if pts[0][1] != 1.0:
            raise InvalidSpec("first point must have g = 1 (full access)", "points[0]")
        object.__setattr__(self, "_ds", tuple(d for d, _ in pts))

    @property
    def full_access_distance(self) -> float:
        """Largest tabulated distance that still has g = 1."""
        return max(d for d, g in self.points if g == 1.0)

    def __call__(self, d: float) -> float:
        pts = self.points
        if d <= pts[0][0]:
            return 1.0
        if d >= pts[-1][0]:
            return pts[-1][1]
        j = bisect.bisect_right(self._ds, d)
        (d0, g0), (d1, g1) = pts[j - 1], pts[j]
        if d == d0:
            return g0
        # clamp keeps rounding from breaking monotonicity at segment joins
        return min(g0, max(g1, g0 + (g1 - g0) * (d - d0) / (d1 - d0)))


def _exponential(x, p):
    return math.exp(-p["rate"] * x)


def _linear(x, p):
    return max(0.0, 1.0 - x / p["span"])


def _gaussian(x, p):
    return math.exp(-0.5 * (x / p["scale"]) ** 2)


def _power(x, p):
    # x is the excess over D0, so the curve is continuous at D0
    return (1.0 + x / p["scale"]) ** (-p["exponent"])


# family -> (function of excess distance, required positive parameters)
DECAY_FAMILIES = {
    "exponential": (_exponential, ("rate",)),
    "linear": (_linear, ("span",)),
    "gaussian": (_gaussian, ("scale",)),
    "power": (_power, ("scale", "exponent")),
}


@dataclass(frozen=True)
class ParametricFactor:
    """g = 1 up to ``full_access_distance``, then a named decay of the excess."""

    full_access_distance: float
    family: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        d0 = self.full_access_distance
        if not (isinstance(d0, (int, float)) and math.isfinite(d0) and d0 >= 0):
            raise InvalidSpec(f"must be a finite distance >= 0, got {d0!r}", "full_access_distance_km")
        if self.family not in DECAY_FAMILIES:
            raise InvalidSpec(
                f"unknown decay family {self.family!r} (expected one of {sorted(DECAY_FAMILIES)})",
                "family",
            )
        _, required = DECAY_FAMILIES[self.family]
        params = dict(self.params)
        for name in params:
            if name not in required:
                raise InvalidSpec(f"unexpected parameter for {self.family}", f"params.{name}")
        for name in required:
            v = params.get(name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v) or v <= 0:
                raise InvalidSpec(f"required positive number, got {v!r}", f"params.{name}")
            params[name] = float(v)
        object.__setattr__(self, "full_access_distance", float(d0))
        # sorted items keep equality and hashing independent of key order
        object.__setattr__(self, "params", tuple(sorted(params.items())))

    def __call__(self, d: float) -> float:
        if d <= self.full_access_distance:
            return 1.0
        fn, _ = DECAY_FAMILIES[self.family]
        return min(1.0, max(0.0, fn(d - self.full_access_distance, dict(self.params))))


DistanceFactorSpec = TableFactor | ParametricFactor

# Round-trip distances of the bundled 13-LGA worked example, with g = t / C
# taken from its Lorenz table (C = 0.6). The 300 km point encodes full access
# within 150 km one way; the 1200 km value uses the A-side ratio 0.0302.
EXAMPLE_FACTOR = TableFactor(
    points=(
        (0.0, 1.0),
        (200.0, 1.0),
        (300.0, 1.0),
        (400.0, 0.4 / 0.6),
        (600.0, 0.144 / 0.6),
        (800.0, 0.0735 / 0.6),
        (1000.0, 0.0444 / 0.6),
        (1200.0, 0.0302 / 0.6),
    )
)


def distance_factor(spec: DistanceFactorSpec, d: float) -> float:
    if not d >= 0:
        raise ValueError(f"distance must be >= 0, got {d!r}")
    return spec(d)


# ---------------------------------------------------------------------------
# region


@dataclass(frozen=True)
class Lga:
    index: int
    name: str
    population: int
    location: Point
    observed_incidence: int | None = None
    observed_separations: int | None = None
    # collected alongside the other two counts but not used by the model
    observed_patients: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "location", (float(self.location[0]), float(self.location[1])))
        if not isinstance(self.index, int) or self.index < 1:
            raise ValidationError(f"must be a positive integer, got {self.index!r}", "index")
        if not isinstance(self.population, int) or self.population < 0:
            raise ValidationError(f"must be a non-negative integer, got {self.population!r}", "population")
        if not all(math.isfinite(c) for c in self.location):
            raise ValidationError("coordinates must be finite", "location")
        for name in ("observed_incidence", "observed_separations", "observed_patients"):
            v = getattr(self, name)
            if v is not None and (not isinstance(v, int) or v < 0):
                raise ValidationError(f"must be a non-negative integer, got {v!r}", name)
        if self.observed_separations is not None:
            if self.observed_incidence is None:
                raise ValidationError("observed_separations requires observed_incidence", "observed_incidence")
            if self.observed_incidence <= 0:
                raise ValidationError("must be > 0 when separations are recorded", "observed_incidence")


@dataclass(frozen=True)
class Facility:
    id: str
    location: Point

    def __post_init__(self):
        object.__setattr__(self, "location", (float(self.location[0]), float(self.location[1])))
        if not all(math.isfinite(c) for c in self.location):
            raise ValidationError("coordinates must be finite", "location")


@dataclass(frozen=True)
class Scenario:
    name: str
    incidence_rate: float
    multiplier_c: float
    distance_factor: DistanceFactorSpec
    lgas: tuple[Lga, ...]
    facilities: tuple[Facility, ...] = ()
    mode: Mode = Mode.SIMULATED

    def __post_init__(self):
        object.__setattr__(self, "lgas", tuple(self.lgas))
        object.__setattr__(self, "facilities", tuple(self.facilities))
        object.__setattr__(self, "mode", Mode(self.mode))
        if not (math.isfinite(self.incidence_rate) and self.incidence_rate > 0):
            raise ValidationError(f"must be > 0, got {self.incidence_rate!r}", "incidence_rate_per_100k")
        if not (math.isfinite(self.multiplier_c) and self.multiplier_c > 0):
            raise ValidationError(f"must be > 0, got {self.multiplier_c!r}", "multiplier_c")
        if not self.lgas:
            raise ValidationError("at least one LGA is required", "lgas")
        indices = sorted(lga.index for lga in self.lgas)
        if indices != list(range(1, len(self.lgas) + 1)):
            raise ValidationError("indices must be unique and contiguous from 1", "lgas")
        seen = set()
        for i, lga in enumerate(self.lgas):
            if lga.name in seen:
                raise ValidationError(f"duplicate LGA name {lga.name!r}", f"lgas[{i}].name")
            seen.add(lga.name)
        seen = set()
        for i, fac in enumerate(self.facilities):
            if fac.id in seen:
                raise ValidationError(f"duplicate facility id {fac.id!r}", f"facilities[{i}].id")
            seen.add(fac.id)
        if self.mode is Mode.SIMULATED and not self.facilities:
            raise ValidationError("simulated mode requires at least one facility", "facilities")
        if self.mode is Mode.OBSERVED:
            for i, lga in enumerate(self.lgas):
                if lga.observed_separations is None:
                    raise ValidationError(
                        "observed mode requires observed_incidence and observed_separations",
                        f"lgas[{i}].observed_separations",
                    )

    @property
    def n(self) -> int:
        return len(self.lgas)

    def ordered_lgas(self) -> tuple[Lga, ...]:
        return tuple(sorted(self.lgas, key=lambda lga: lga.index))

    def with_facilities(self, extra: Sequence[Facility]) -> Scenario:
        return replace(self, facilities=self.facilities + tuple(extra))


@dataclass(frozen=True)
class LgaResult:
    lga_index: int
    nearest_facility_id: str | None
    round_trip_km: float | None
    incidence: int
    target_separations: int
    actual_separations: int
    ratio: float
    distance_factor_value: float | None


# ---------------------------------------------------------------------------
# operations


def incidence_count(population: int, rate: float) -> int:
    """New cases per year for ``population`` people at ``rate`` per 100,000."""
    return round_half_away(_dec(population) * _dec(rate) / 100000)


def target_separations(incidence: int, c: float) -> int:
    return round_half_away(_dec(c) * _dec(incidence))


def round_trip_distance(a: Point, b: Point) -> float:
    """Twice the straight-line distance: the travel for one treatment."""
    return 2.0 * math.hypot(a[0] - b[0], a[1] - b[1])


def nearest_facility(lga: Lga, facilities: Sequence[Facility]) -> tuple[str, float]:
    """Closest facility by round-trip distance; the earliest one wins ties."""
    if not facilities:
        raise EmptyFacilities(f"no facility to serve LGA {lga.name!r}")
    best_id, best_d = None, math.inf
    for fac in facilities:
        d = round_trip_distance(lga.location, fac.location)
        if d < best_d:
            best_id, best_d = fac.id, d
    return best_id, best_d


def utilisation_ratio(
    mode: Mode | str,
    c: float | None = None,
    g_value: float | None = None,
    observed_incidence: int | None = None,
    observed_separations: int | None = None,
) -> float:
    if Mode(mode) is Mode.SIMULATED:
        return c * g_value
    if not observed_incidence:
        raise ZeroIncidence("observed incidence is zero, ratio undefined")
    return observed_separations / observed_incidence


def simulate_region(scenario: Scenario) -> tuple[LgaResult, ...]:
    """Compute one :class:`LgaResult` per LGA, in index order."""
    c = scenario.multiplier_c
    simulated = scenario.mode is Mode.SIMULATED
    out = []
    for lga in scenario.ordered_lgas():
        fac_id = d = g = None
        if scenario.facilities:
            fac_id, d = nearest_facility(lga, scenario.facilities)
            g = distance_factor(scenario.distance_factor, d)
        if simulated:
            incidence = incidence_count(lga.population, scenario.incidence_rate)
            actual = round_half_away(c * incidence * g)
            ratio = utilisation_ratio(Mode.SIMULATED, c=c, g_value=g)
        else:
            incidence = lga.observed_incidence
            actual = lga.observed_separations
            ratio = utilisation_ratio(
                Mode.OBSERVED,
                observed_incidence=incidence,
                observed_separations=actual,
            )
        out.append(
            LgaResult(
                lga_index=lga.index,
                nearest_facility_id=fac_id,
                round_trip_km=d,
                incidence=incidence,
                target_separations=target_separations(incidence, c),
                actual_separations=actual,
                ratio=ratio,
                distance_factor_value=g,
            )
        )
    return tuple(out)


def override_ratios(results: Sequence[LgaResult], ratios: Mapping[int, float]) -> tuple[LgaResult, ...]:
    """Replace computed ratios with externally supplied ones, keyed by LGA index.

    Actual separations are re-derived as ``round(t * I)`` so the row stays
    self-consistent.
    """
    missing = {r.lga_index for r in results} - set(ratios)
    if missing:
        raise ValidationError(f"no ratio supplied for LGA indices {sorted(missing)}", "ratios")
    out = []
    for r in results:
        t = float(ratios[r.lga_index])
        if not (math.isfinite(t) and t >= 0):
            raise ValidationError(f"ratio must be finite and >= 0, got {t!r}", f"ratios[{r.lga_index}]")
        out.append(replace(r, ratio=t, actual_separations=round_half_away(t * r.incidence)))
    return tuple(out)
