import itertools

import numpy as np
import pytest

from addcomb.groups import GroupSpec, Subset, build_group


def grp(kind, **kw):
    return build_group(GroupSpec(kind, **kw))


def brute_energy(A, B=None):
    """#{(a, b, a1, b1) : a^{-1} b = a1^{-1} b1} by enumerating all quadruples."""
    G = A.group
    B = A if B is None else B
    a, b = A.tolist(), B.tolist()
    count = 0
    for x, y, x1, y1 in itertools.product(a, b, a, b):
        if G.mul(G.inv(x), y) == G.mul(G.inv(x1), y1):
            count += 1
    return count


@pytest.fixture(scope="session")
def z7():
    return grp("cyclic", n=7)


@pytest.fixture(scope="session")
def d4():
    return grp("dihedral", n=4)


@pytest.fixture(scope="session")
def s3():
    return grp("symmetric", n=3)


@pytest.fixture(scope="session")
def sl25():
    return grp("SL2", p=5)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def subset(G, members):
    return Subset(G, members)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "ACCEPTANCE_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
