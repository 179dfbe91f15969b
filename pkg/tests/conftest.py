import os
import random
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from dessin_rh import ExactPolynomial, universal_annihilator
from dessin_rh.exact import poly_gcd

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> (passed, label, note); filled in by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, label, note = ACCEPTANCE[num]
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {label}"
        if note:
            line += f"  ({note})"
        terminalreporter.write_line(line)


_QUARTIC: dict = {}


def _quartic():
    if not _QUARTIC:
        start = time.perf_counter()
        _QUARTIC["op"] = universal_annihilator(4)
        _QUARTIC["seconds"] = time.perf_counter() - start
    return _QUARTIC


@pytest.fixture(scope="session")
def quartic_operator():
    return _quartic()["op"]


@pytest.fixture(scope="session")
def quartic_seconds():
    return _quartic()["seconds"]


def random_monic(rng: random.Random, n: int, penultimate_zero: bool = False) -> ExactPolynomial:
    """Monic rational polynomial of degree n with squarefree, small coefficients."""
    while True:
        c = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] + [Fraction(1)]
        if penultimate_zero:
            c[n - 1] = Fraction(0)
        elif c[n - 1] == 0:
            continue
        p = ExactPolynomial(c)
        if poly_gcd(p, p.derivative()).degree == 0:
            return p
