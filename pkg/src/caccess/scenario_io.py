"""Scenario documents in, result tables and figures out.

Scenario files are JSON::

    {
      "name": "...",
      "incidence_rate_per_100k": 529.1,
      "multiplier_c": 0.6,
      "mode": "simulated",
      "distance_factor": {"type": "table", "interpolation": "linear",
                          "points": [[0, 1], [300, 1], [1200, 0.05]]},
      "lgas": [{"index": 1, "name": "A", "population": 10000,
                "x_km": -600, "y_km": 0}],
      "facilities": [{"id": "G", "x_km": 0, "y_km": 0}]
    }

A parametric distance factor is written as
``{"type": "parametric", "full_access_distance_km": 300,
"family": "exponential", "params": {"rate": 0.002}}``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Sequence
from xml.sax.saxutils import escape

from .errors import ScenarioSyntaxError, ValidationError
from .inequality import InequalityReport, LorenzCurve, inequality_report
from .model import (
    Facility,
    Lga,
    LgaResult,
    Mode,
    ParametricFactor,
    Scenario,
    TableFactor,
    simulate_region,
)

RESULTS_HEADER = [
    "lga",
    "population",
    "x_km",
    "y_km",
    "d_km",
    "incidence",
    "target_separations",
    "actual_separations",
    "g",
    "ratio",
]
_PAIR = re.compile(r"\[\s*([-+0-9.eE]+\s*,\s*[-+0-9.eE]+)\s*\]")
LORENZ_HEADER = ["rank", "lga", "F", "t", "cum_t", "Phi"]


def bundled(name: str) -> Path:
    """Path of a data file shipped with the package (e.g. ``paper-example.json``)."""
    return Path(str(resources.files("caccess") / "data" / name))


# ---------------------------------------------------------------------------
# parsing


def _load_json(text: bytes | str) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ScenarioSyntaxError(f"not valid UTF-8: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _join(path: str, key: str | int) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _fields(obj: Any, path: str, required: Sequence[str], optional: Sequence[str] = ()) -> dict:
    if not isinstance(obj, dict):
        raise ValidationError(f"expected an object, got {type(obj).__name__}", path)
    for key in obj:
        if key not in required and key not in optional:
            raise ValidationError(f"unknown field {key!r}", _join(path, key))
    for key in required:
        if key not in obj:
            raise ValidationError("required field is missing", _join(path, key))
    return obj


def _number(obj: dict, key: str, path: str) -> float:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ValidationError(f"expected a finite number, got {v!r}", _join(path, key))
    return v


def _integer(obj: dict, key: str, path: str) -> int | None:
    v = obj.get(key)
    if v is None:
        return None
    if isinstance(v, float) and v.is_integer():
        v = int(v)
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"expected an integer, got {v!r}", _join(path, key))
    return v


def _text(obj: dict, key: str, path: str) -> str:
    v = obj[key]
    if not isinstance(v, str) or not v:
        raise ValidationError(f"expected a non-empty string, got {v!r}", _join(path, key))
    return v


def _rebase(exc: ValidationError, prefix: str) -> ValidationError:
    return type(exc)(exc.message, _join(prefix, exc.path) if exc.path else prefix)


def _parse_factor(obj: Any, path: str):
    if not isinstance(obj, dict):
        raise ValidationError("expected an object", path)
    kind = obj.get("type")
    try:
        if kind == "table":
            _fields(obj, path, ["type", "points"], ["interpolation"])
            points = obj["points"]
            if not isinstance(points, list):
                raise ValidationError("expected a list of [D_km, g] pairs", _join(path, "points"))
            pairs = []
            for i, p in enumerate(points):
                ok = (
                    isinstance(p, list)
                    and len(p) == 2
                    and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in p)
                )
                if not ok:
                    raise ValidationError(f"expected [D_km, g], got {p!r}", f"{path}.points[{i}]")
                pairs.append((p[0], p[1]))
            return TableFactor(tuple(pairs), obj.get("interpolation", "linear"))
        if kind == "parametric":
            _fields(obj, path, ["type", "full_access_distance_km", "family"], ["params"])
            params = obj.get("params", {})
            if not isinstance(params, dict):
                raise ValidationError("expected an object", _join(path, "params"))
            return ParametricFactor(_number(obj, "full_access_distance_km", path), obj["family"], params)
    except ValidationError as exc:
        if exc.path.startswith(path) and path:
            raise
        raise _rebase(exc, path) from None
    raise ValidationError(f"type must be 'table' or 'parametric', got {kind!r}", _join(path, "type"))


def _parse_lga(obj: Any, path: str) -> Lga:
    _fields(
        obj,
        path,
        ["index", "name", "population", "x_km", "y_km"],
        ["observed_incidence", "observed_separations", "observed_patients"],
    )
    try:
        return Lga(
            index=_integer(obj, "index", path),
            name=_text(obj, "name", path),
            population=_integer(obj, "population", path),
            location=(_number(obj, "x_km", path), _number(obj, "y_km", path)),
            observed_incidence=_integer(obj, "observed_incidence", path),
            observed_separations=_integer(obj, "observed_separations", path),
            observed_patients=_integer(obj, "observed_patients", path),
        )
    except ValidationError as exc:
        if exc.path.startswith(path):
            raise
        raise _rebase(exc, path) from None


def _parse_facility(obj: Any, path: str) -> Facility:
    _fields(obj, path, ["id", "x_km", "y_km"])
    return Facility(_text(obj, "id", path), (_number(obj, "x_km", path), _number(obj, "y_km", path)))


def parse_scenario(text: bytes | str) -> Scenario:
    """Parse and validate a scenario document.

    Raises
    ------
    ScenarioSyntaxError
        The text is not JSON.
    ValidationError
        A field is missing, unknown, mistyped or violates an invariant;
        ``exc.path`` names it.
    """
    doc = _load_json(text)
    mode = doc.get("mode", "simulated") if isinstance(doc, dict) else None
    required = ["name", "incidence_rate_per_100k", "multiplier_c", "distance_factor", "lgas"]
    if mode == "simulated":
        required.append("facilities")
    _fields(doc, "", required, ["mode", "facilities"])
    if mode not in ("simulated", "observed"):
        raise ValidationError(f"must be 'simulated' or 'observed', got {mode!r}", "mode")
    for key in ("lgas", "facilities"):
        if key in doc and not isinstance(doc[key], list):
            raise ValidationError("expected a list", key)
    return Scenario(
        name=_text(doc, "name", ""),
        incidence_rate=_number(doc, "incidence_rate_per_100k", ""),
        multiplier_c=_number(doc, "multiplier_c", ""),
        distance_factor=_parse_factor(doc["distance_factor"], "distance_factor"),
        lgas=tuple(_parse_lga(o, f"lgas[{i}]") for i, o in enumerate(doc["lgas"])),
        facilities=tuple(_parse_facility(o, f"facilities[{i}]") for i, o in enumerate(doc.get("facilities", []))),
        mode=Mode(mode),
    )


def read_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_bytes())


def _plain(x: float) -> int | float:
    return int(x) if float(x).is_integer() else x


def scenario_to_dict(scenario: Scenario) -> dict:
    spec = scenario.distance_factor
    if isinstance(spec, TableFactor):
        factor = {
            "type": "table",
            "interpolation": spec.interpolation,
            "points": [[_plain(d), _plain(g)] for d, g in spec.points],
        }
    else:
        factor = {
            "type": "parametric",
            "full_access_distance_km": _plain(spec.full_access_distance),
            "family": spec.family,
            "params": {k: v for k, v in spec.params},
        }
    lgas = []
    for lga in scenario.ordered_lgas():
        row = {
            "index": lga.index,
            "name": lga.name,
            "population": lga.population,
            "x_km": _plain(lga.location[0]),
            "y_km": _plain(lga.location[1]),
        }
        for key in ("observed_incidence", "observed_separations", "observed_patients"):
            if getattr(lga, key) is not None:
                row[key] = getattr(lga, key)
        lgas.append(row)
    return {
        "name": scenario.name,
        "mode": scenario.mode.value,
        "incidence_rate_per_100k": _plain(scenario.incidence_rate),
        "multiplier_c": _plain(scenario.multiplier_c),
        "distance_factor": factor,
        "lgas": lgas,
        "facilities": [
            {"id": f.id, "x_km": _plain(f.location[0]), "y_km": _plain(f.location[1])} for f in scenario.facilities
        ],
    }


def dump_scenario(scenario: Scenario) -> str:
    """Canonical JSON text; ``parse_scenario`` of the result equals the input."""
    text = json.dumps(scenario_to_dict(scenario), indent=2, ensure_ascii=False)
    # one line per [D, g] pair
    return _PAIR.sub(lambda m: "[" + ", ".join(v.strip() for v in m.group(1).split(",")) + "]", text) + "\n"


def load_candidates(text: bytes | str) -> list[tuple[float, float]]:
    """Candidate sites file: a JSON array of ``[x_km, y_km]`` pairs."""
    doc = _load_json(text)
    if not isinstance(doc, list):
        raise ValidationError("expected a JSON array of [x_km, y_km] pairs", "candidates")
    sites = []
    for i, p in enumerate(doc):
        ok = (
            isinstance(p, list)
            and len(p) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v) for v in p)
        )
        if not ok:
            raise ValidationError(f"expected [x_km, y_km], got {p!r}", f"candidates[{i}]")
        sites.append((float(p[0]), float(p[1])))
    return sites


def load_observed_ratios(text: bytes | str, scenario: Scenario) -> dict[int, float]:
    """Ratios to inject, keyed by LGA index.

    The file is either an object mapping LGA name to ratio or an array of
    ratios in LGA index order.
    """
    doc = _load_json(text)
    by_name = {lga.name: lga.index for lga in scenario.lgas}
    if isinstance(doc, list):
        if len(doc) != scenario.n:
            raise ValidationError(f"expected {scenario.n} ratios, got {len(doc)}", "ratios")
        doc = {lga.name: doc[lga.index - 1] for lga in scenario.lgas}
    if not isinstance(doc, dict):
        raise ValidationError("expected an object mapping LGA name to ratio", "ratios")
    out = {}
    for name, t in doc.items():
        if name not in by_name:
            raise ValidationError(f"unknown LGA {name!r}", f"ratios.{name}")
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not math.isfinite(t) or t < 0:
            raise ValidationError(f"expected a number >= 0, got {t!r}", f"ratios.{name}")
        out[by_name[name]] = float(t)
    missing = sorted(set(by_name) - set(doc))
    if missing:
        raise ValidationError(f"no ratio for LGAs {missing}", "ratios")
    return out


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class ResultsTable:
    scenario: Scenario
    results: tuple[LgaResult, ...]
    report: InequalityReport

    @classmethod
    def build(cls, scenario: Scenario, results: Sequence[LgaResult] | None = None) -> ResultsTable:
        if results is None:
            results = simulate_region(scenario)
        return cls(scenario, tuple(results), inequality_report(results))


def _fmt4(x: float | None) -> str:
    return "" if x is None else f"{x:.4f}"


def _fmt_num(x: float) -> str:
    if float(x).is_integer():
        return str(int(x))
    return f"{x:.12g}"


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def _lorenz_rows(table: ResultsTable) -> list[list[str]]:
    names = {lga.index: lga.name for lga in table.scenario.lgas}
    curve = table.report.curve
    rows = []
    cum = 0.0
    for rank, (idx, t, pt) in enumerate(zip(curve.source_order, table.report.sorted_ratios, curve.points[1:]), 1):
        cum += t
        rows.append([str(rank), names[idx], _fmt4(pt.f), _fmt4(t), _fmt4(cum), _fmt4(pt.phi)])
    return rows


def write_lorenz_csv(table: ResultsTable) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(LORENZ_HEADER)
    w.writerows(_lorenz_rows(table))
    return buf.getvalue()


def write_results_csv(table: ResultsTable) -> str:
    """Per-LGA rows, a blank line, then the sorted Lorenz coordinates."""
    lgas = {lga.index: lga for lga in table.scenario.lgas}
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(RESULTS_HEADER)
    for r in table.results:
        lga = lgas[r.lga_index]
        w.writerow(
            [
                lga.name,
                str(lga.population),
                _fmt_num(lga.location[0]),
                _fmt_num(lga.location[1]),
                "" if r.round_trip_km is None else str(round(r.round_trip_km)),
                str(r.incidence),
                str(r.target_separations),
                str(r.actual_separations),
                _fmt4(r.distance_factor_value),
                _fmt4(r.ratio),
            ]
        )
    buf.write("\n")
    return buf.getvalue() + write_lorenz_csv(table)


# ---------------------------------------------------------------------------
# figure


def _c(x: float) -> str:
    return f"{x:.12g}"


def render_lorenz_svg(curve: LorenzCurve, width: int = 640, height: int = 640, title: str = "Lorenz curve") -> str:
    """Standalone SVG of the curve against the line of perfect equality.

    The viewBox is the unit square in data coordinates; a y-flip transform on
    the plot group puts (0, 0) at the bottom left, so polyline vertices are
    the Lorenz coordinates verbatim.
    """
    pts = " ".join(f"{_c(p.f)},{_c(p.phi)}" for p in curve.points)
    ticks = " ".join(f"M{t / 10:g} 0V0.015 M0 {t / 10:g}H0.015" for t in range(1, 10))
    grid = " ".join(f"M{t / 4:g} 0V1 M0 {t / 4:g}H1" for t in range(1, 4))
    markers = "".join(f'<circle cx="{_c(p.f)}" cy="{_c(p.phi)}" r="0.006"/>' for p in curve.points[1:])
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 1 1">\n'
        f"<title>{escape(title)}</title>\n"
        '<rect x="0" y="0" width="1" height="1" fill="white"/>\n'
        '<g class="plot" transform="matrix(1 0 0 -1 0 1)" fill="none" stroke-width="0.004">\n'
        f'<path class="grid" d="{grid}" stroke="#dddddd" stroke-width="0.002"/>\n'
        f'<path class="ticks" d="{ticks}" stroke="black"/>\n'
        '<rect class="frame" x="0" y="0" width="1" height="1" stroke="black"/>\n'
        '<line class="equality" x1="0" y1="0" x2="1" y2="1" stroke="#777777" stroke-dasharray="0.02 0.015"/>\n'
        f'<polyline class="lorenz" points="{pts}" stroke="#b03a2e"/>\n'
        f'<g class="markers" fill="#b03a2e" stroke="none">{markers}</g>\n'
        "</g>\n"
        '<g font-family="sans-serif" font-size="0.032" fill="black">\n'
        '<text x="0.5" y="0.975" text-anchor="middle">Cumulative proportion of LGAs</text>\n'
        '<text transform="translate(0.045 0.5) rotate(-90)" text-anchor="middle">'
        "Cumulative proportion of utilisation</text>\n"
        "</g>\n"
        "</svg>\n"
    )
