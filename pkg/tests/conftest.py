import sys
import random

import numpy as np
import pytest

from delsarte.codes import BinaryLinearCode
from delsarte.named import HammingScheme, JohnsonScheme


def random_subset(scheme, rng: random.Random, lo: int = 2, hi: int = 24) -> list[int]:
    size = rng.randint(lo, min(hi, scheme.num_vertices))
    return sorted(rng.sample(range(scheme.num_vertices), size))


def random_linear_code(n: int, k: int, rng: random.Random) -> BinaryLinearCode:
    rows = [rng.getrandbits(n) for _ in range(k)]
    return BinaryLinearCode.from_generators([r for r in rows if r] or [1], n)


def petersen_relations() -> np.ndarray:
    """0 = equal, 1 = adjacent (disjoint pairs), 2 = non-adjacent."""
    J = JohnsonScheme(5, 2)
    R = J.relation_matrix()
    out = np.zeros_like(R)
    out[R == 2] = 1
    out[R == 1] = 2
    return out


def rook_relations(m: int, n: int) -> np.ndarray:
    """K_m x K_n: equal / same row / same column / neither."""
    cells = [(i, j) for i in range(m) for j in range(n)]
    R = np.zeros((len(cells), len(cells)), dtype=np.int64)
    for a, (i, j) in enumerate(cells):
        for b, (k, l) in enumerate(cells):
            if a != b:
                R[a, b] = 1 if i == k else 2 if j == l else 3
    return R


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def small_schemes():
    return [HammingScheme(6), HammingScheme(8), HammingScheme(4, 3), JohnsonScheme(7, 3),
            JohnsonScheme(8, 4), JohnsonScheme(5, 2)]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
