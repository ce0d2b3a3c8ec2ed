import json
import re
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = Path(__file__).parent / "fixtures"

# criterion number -> extra report lines, filled in by test_acceptance
ACCEPTANCE_NOTES: dict[int, list[str]] = {}


def _c(pair):
    return complex(float(pair[0]), float(pair[1]))


class Oracle:
    def __init__(self, data):
        self.raw = data
        self.first_zeros = [float(y) for y in data["first_zeros"]]
        self.gram_point_0 = float(data["gram_point_0"])
        self.zeta = [(complex(*d["s"]), _c(d["zeta"])) for d in data["zeta"]]
        self.zeta_prime = [(complex(*d["s"]), _c(d["zeta_prime"])) for d in data["zeta_prime"]]
        self.log_gamma = [(complex(*d["z"]), _c(d["value"])) for d in data["log_gamma"]]
        self.digamma = [(complex(*d["z"]), _c(d["value"])) for d in data["digamma"]]
        self.chi_factor = [(d["y"], _c(d["value"])) for d in data["chi_factor"]]
        self.euler_product_2_1e5 = float(data["euler_product_2_1e5"])
        self.gap_roots = [_c(r) for r in data["gap_roots"]]


@pytest.fixture(scope="session")
def oracle():
    return Oracle(json.loads((FIXTURES / "oracle.json").read_text()))


def pytest_terminal_summary(terminalreporter):
    outcomes: dict[int, tuple[str, str]] = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", getattr(rep, "nodeid", ""))
            if not m:
                continue
            n = int(m.group(1))
            failed = rep.outcome != "passed"
            if failed or n not in outcomes:
                if failed or rep.when == "call":
                    outcomes[n] = ("FAIL" if failed else "PASS", m.group(2).replace("_", " "))
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(outcomes):
        verdict, label = outcomes[n]
        terminalreporter.write_line(f"criterion {n}: {verdict}  {label}")
        for note in ACCEPTANCE_NOTES.get(n, []):
            terminalreporter.write_line(f"    {note}")
