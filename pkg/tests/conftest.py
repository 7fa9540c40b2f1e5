import itertools

import numpy as np
import pytest

from rhomnk.landscape import InstanceParams, RhoMnkInstance, generate


def all_solutions(n):
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)


def brute_force_objectives(instance, bits):
    """Table lookup written out longhand: pattern string -> row -> mean."""
    n, m = instance.n, instance.m
    total = [0.0] * m
    for i in range(n):
        pattern = str(int(bits[i])) + "".join(str(int(bits[j])) for j in instance.links[i])
        row = int(pattern, 2)
        for obj in range(m):
            total[obj] += float(instance.tables[i, row, obj])
    return np.array([t / n for t in total])


def flat_instance(n=4, m=2, k=1, value=0.5):
    tables = np.full((n, 2 ** (k + 1), m), value)
    links = np.array([[(i + 1 + j) % n for j in range(k)] for i in range(n)], dtype=np.int64)
    return RhoMnkInstance(InstanceParams(n, m, k, 0.0, 0), links.reshape(n, k), tables)


@pytest.fixture
def small_instance():
    return generate(InstanceParams(n=6, m=2, k=2, rho=-0.2, seed=11))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
