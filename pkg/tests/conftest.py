"""Session-wide bookkeeping.

Every decomposition returned anywhere in the run is checked against the
defining conditions as it is produced, and acceptance results are echoed in
the terminal summary.
"""

from __future__ import annotations

import zariski
from zariski import cli, decomposition, gallery

AXIOM_LOG = {"checked": 0, "failures": []}
ACCEPTANCE_LINES: list[str] = []

_decompose = decomposition.decompose
_decompose_oracle = decomposition.decompose_oracle


def _check(X, D, Z):
    AXIOM_LOG["checked"] += 1
    problems = decomposition.verify(X, D, Z)
    if problems:
        AXIOM_LOG["failures"].append((X.name, tuple(D), [str(p) for p in problems]))


def _recording_decompose(X, D):
    Z = _decompose(X, D)
    _check(X, D, Z)
    return Z


def _recording_oracle(X, D, limit=16, vectorized=True):
    Z = _decompose_oracle(X, D, limit, vectorized)
    _check(X, D, Z)
    return Z


for module in (decomposition, gallery, cli, zariski):
    module.decompose = _recording_decompose
for module in (decomposition, cli, zariski):
    module.decompose_oracle = _recording_oracle


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
    n, bad = AXIOM_LOG["checked"], AXIOM_LOG["failures"]
    terminalreporter.section("decomposition axioms")
    status = "PASS" if not bad else "FAIL"
    terminalreporter.write_line(f"{status}  {n} decompositions produced in this run, {len(bad)} violating")
    for name, D, problems in bad[:10]:
        terminalreporter.write_line(f"      {name} D={D}: {'; '.join(problems)}")


def pytest_sessionfinish(session, exitstatus):
    if AXIOM_LOG["failures"] and exitstatus == 0:
        session.exitstatus = 1
