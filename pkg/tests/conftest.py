import pytest

from caccess import read_scenario
from caccess.scenario_io import bundled, load_observed_ratios

# Per-LGA rows of the worked example: name -> (population in thousands, x_km, D, I, T)
EXAMPLE_ROWS = {
    "A": (10, -600, 1200, 53, 32),
    "B": (521, -500, 1000, 2757, 1654),
    "C": (5631, -400, 800, 29794, 17876),
    "D": (1543, -300, 600, 8164, 4898),
    "E": (2054, -200, 400, 10868, 6521),
    "F": (5631, -100, 200, 29794, 17876),
    "G": (3076, 0, 0, 16275, 9765),
    "H": (521, 100, 200, 2757, 1654),
    "I": (4098, 200, 400, 21683, 13010),
    "J": (4609, 300, 600, 24386, 14632),
    "K": (521, 400, 800, 2757, 1654),
    "L": (5631, 500, 1000, 29794, 17876),
    "M": (6142, 600, 1200, 32497, 19498),
}

# Published Lorenz table: (rank, name, F, t, cum t, Phi) as printed
LORENZ_ROWS = [
    (1, "M", 0.0769, 0.0298, 0.0298, 0.0093),
    (2, "A", 0.1538, 0.0302, 0.0599, 0.0188),
    (3, "B", 0.2308, 0.0444, 0.1043, 0.0328),
    (4, "L", 0.3077, 0.0444, 0.1488, 0.0467),
    (5, "C", 0.3846, 0.0735, 0.2223, 0.0698),
    (6, "K", 0.4615, 0.0735, 0.2958, 0.0929),
    (7, "D", 0.5385, 0.1440, 0.4398, 0.1381),
    (8, "J", 0.6154, 0.1440, 0.5838, 0.1834),
    (9, "E", 0.6923, 0.4000, 0.9838, 0.3090),
    (10, "I", 0.7692, 0.4000, 1.3838, 0.4346),
    (11, "F", 0.8462, 0.6000, 1.9838, 0.6231),
    (12, "G", 0.9231, 0.6000, 2.5838, 0.8115),
    (13, "H", 1.0000, 0.6000, 3.1838, 1.0000),
]

# 1 - sum (F_i - F_{i-1})(Phi_i + Phi_{i-1}) over the printed Lorenz columns
LORENZ_TRAPEZOID_GINI = 0.49693997


@pytest.fixture(scope="session")
def example_path():
    return bundled("paper-example.json")


@pytest.fixture(scope="session")
def region(example_path):
    return read_scenario(example_path)


@pytest.fixture(scope="session")
def published_ratios(region):
    return load_observed_ratios(bundled("table2-ratios.json").read_bytes(), region)


@pytest.fixture(scope="session")
def names(region):
    return {lga.index: lga.name for lga in region.lgas}


_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: exit criterion, summarised at the end of the run")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and item.get_closest_marker("acceptance"):
        doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
        if hasattr(item, "callspec"):
            doc = f"{doc} [{item.callspec.id}]"
        _ACCEPTANCE.append((rep.passed, doc))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for passed, doc in sorted(_ACCEPTANCE, key=lambda x: x[1]):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {doc}")
