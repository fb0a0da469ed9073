"""Shared fixtures: the MIS scaling sweep and the acceptance result table."""

import pytest

from awakesim.graphs import gen_gnp
from awakesim.mis import awake_mis, luby_mis
from awakesim.rng import node_rng

SWEEP_MASTER = 777
SWEEP_SIZES = (2 ** 10, 2 ** 12, 2 ** 14, 2 ** 16)
SWEEP_SEEDS = 20

# filled by tests/test_acceptance.py, printed at the end of the run
CRITERION_RESULTS = []


def record_criterion(num: int, name: str, passed: bool, detail: str) -> None:
    CRITERION_RESULTS.append((num, name, passed, detail))


@pytest.fixture(scope="session")
def mis_sweep():
    """Per-size records of awake_mis and luby_mis on G(n, 10/n), 20 seeds.

    Expensive (a few minutes); shared by the awake-constancy and round-count
    acceptance checks. Graph and algorithm seeds come from fixed rng streams
    so the sweep is reproducible.
    """
    data = {}
    for n in SWEEP_SIZES:
        rows = []
        for s in range(SWEEP_SEEDS):
            g = gen_gnp(n, 10.0 / n, seed=node_rng(SWEEP_MASTER, n, "sweepg", s))
            aseed = node_rng(SWEEP_MASTER, n, "sweepa", s)
            mis, led, met = awake_mis(g, seed=aseed)
            lset, lled = luby_mis(g, seed=aseed)
            rows.append({
                "avg_awake": met.avg_awake,
                "rounds": met.rounds,
                "valid": met.validity,
                "luby_avg": lled.node_averaged(),
                "luby_rounds": lled.rounds,
            })
        data[n] = rows
    return data


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not CRITERION_RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num, name, passed, detail in sorted(CRITERION_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        tr.write_line(f"criterion {num:02d} {verdict}  {name}: {detail}")
