import cmath
import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hyplevel.corpus import load_corpus
from hyplevel.holomap import ALPHA0, Constant, blaschke
from hyplevel.levelset import trace_problem
from hyplevel.problem import LevelProblem

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def disc_points(max_radius=0.95):
    return st.builds(lambda rho, th: cmath.rect(rho, th),
                     st.floats(0, max_radius), st.floats(0, 2 * math.pi))


def blaschke_maps(max_degree=3, max_zero=0.85):
    zero = disc_points(max_zero)
    return st.builds(lambda zs, th: blaschke(zs, cmath.rect(1, th)),
                     st.lists(zero, min_size=1, max_size=max_degree),
                     st.floats(0, 2 * math.pi))


def random_disc(rng, n, radius=0.95):
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def circle_problem(r, theta=0.3):
    """Jordan case f = sigma: the boundary is the circle |z| = r."""
    return LevelProblem(Constant(cmath.rect(1, theta)), 1.0, r)


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture(scope="session")
def corpus_jordan(corpus):
    """(entry, problem, traced curve) for the Jordan problem of every entry."""
    out = []
    for e in corpus:
        p = e.jordan_problem()
        out.append((e, p, trace_problem(p)))
    return out


@pytest.fixture(scope="session")
def corpus_level(corpus):
    out = []
    for e in corpus:
        p = e.level_problem()
        if p is not None:
            out.append((e, p, trace_problem(p)))
    return out


@pytest.fixture
def alpha0():
    return ALPHA0


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
