"""Simulation of spatial inequality in access to chemotherapy services.

Per-LGA separation-to-incidence ratios are derived from incidence, a
separations multiplier and a distance-decay factor; their distribution is
summarised by a Lorenz curve and Gini/Atkinson indices, and facility
placements can be ranked by the inequality they leave behind.
"""

__version__ = "0.1.0"

from .errors import (
    CaccessError,
    DomainError,
    EmptyCandidates,
    EmptyFacilities,
    InvalidSpec,
    MismatchedRegions,
    NonPositiveRatio,
    ScenarioError,
    ScenarioSyntaxError,
    TooManyCombinations,
    ValidationError,
    ZeroIncidence,
    ZeroTotalUtilisation,
)
from .inequality import (
    InequalityReport,
    LorenzCurve,
    LorenzPoint,
    atkinson,
    gini,
    gini_mean_difference,
    inequality_report,
    lorenz_curve,
    sort_ratios,
)
from .model import (
    EXAMPLE_FACTOR,
    Facility,
    Lga,
    LgaResult,
    Mode,
    ParametricFactor,
    Scenario,
    TableFactor,
    distance_factor,
    incidence_count,
    nearest_facility,
    round_trip_distance,
    simulate_region,
    target_separations,
    utilisation_ratio,
)
from .planner import PlanResult, ScenarioComparison, compare, evaluate, plan_additional
from .scenario_io import (
    ResultsTable,
    bundled,
    dump_scenario,
    parse_scenario,
    read_scenario,
    render_lorenz_svg,
    write_results_csv,
)
