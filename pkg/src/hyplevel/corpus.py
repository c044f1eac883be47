"""The committed verification corpus: 50 seeded self-maps of the disc.

Each line of ``data/corpus.txt`` is tab-separated::

    id  lambda  r  kind  dsl

Every entry gives a Jordan problem (f, r) and, when ``lambda`` is not
"-", a level problem (f, lambda). ``generate_corpus(SEED)`` rebuilds the
file exactly; a test pins the two together.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import cached_property
from importlib import resources

import numpy as np

from .dsl import parse
from .errors import HyplevelError
from .levelset import trace_problem
from .problem import LevelProblem

SEED = 20260
SIZE = 50
LAMBDAS = (1.0, 1.1, 1.5, 3.0)
HEADER = "# id\tlambda\tr\tkind\tdsl"

# kind -> number of entries, in file order
LAYOUT = (("unimodular", 3), ("automorphism", 12), ("blaschke", 17), ("scaled", 13),
          ("kalpha", 5))
_DEGREE = {"unimodular": 0, "automorphism": 1, "kalpha": 1}
_DEGREE_RANGE = {"blaschke": (2, 4), "scaled": (1, 4)}


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    lam: float | None
    r: float
    kind: str
    dsl: str

    @cached_property
    def map(self):
        return parse(self.dsl)

    def jordan_problem(self) -> LevelProblem:
        return LevelProblem(self.map, 1.0, self.r)

    def level_problem(self) -> LevelProblem | None:
        if self.lam is None:
            return None
        return LevelProblem(self.map, self.lam)

    def line(self) -> str:
        lam = "-" if self.lam is None else _num(self.lam)
        return "\t".join([self.id, lam, _num(self.r), self.kind, self.dsl])


def _num(x: float) -> str:
    return repr(round(float(x), 6))


def _zero(rng) -> complex:
    return cmath.rect(0.85 * math.sqrt(rng.uniform()), rng.uniform(0, 2 * math.pi))


def _dsl(zeros, sigma, scale):
    zs = ",".join(f"({_num(a.real)},{_num(a.imag)},1)" for a in zeros)
    # sigma keeps full precision so |sigma| = 1 survives the round trip
    body = f"blaschke([{zs}];{sigma.real!r},{sigma.imag!r})"
    return body if scale == 1 else f"smul({_num(scale)},0.0,{body})"


def _traceable(p: LevelProblem) -> bool:
    try:
        trace_problem(p)
    except HyplevelError:
        return False
    return True


def generate_corpus(seed: int = SEED) -> list[CorpusEntry]:
    """Draw the corpus deterministically from ``seed``.

    Zeros are uniform in the disc of radius 0.85, with |B(0)| >= 0.05 for
    the Blaschke factor B (before any scale factor); the "kalpha" kind composes k_alpha
    with the automorphism swapping 0 and a drawn zero. A level problem whose boundary
    cannot be traced is dropped (lambda "-"); the Jordan problem must
    trace closed or the draw is repeated.
    """
    rng = np.random.default_rng(seed)
    out = []
    i = 0
    for kind, count in LAYOUT:
        for _ in range(count):
            while True:
                degree = _DEGREE[kind] if kind in _DEGREE else int(rng.integers(*_DEGREE_RANGE[kind]))
                zeros = [_zero(rng) for _ in range(degree)]
                if math.prod(abs(a) for a in zeros) < 0.05 and degree:
                    continue
                sigma = cmath.rect(1.0, round(rng.uniform(0, 2 * math.pi), 6))
                scale = round(rng.uniform(0.4, 0.95), 6) if kind == "scaled" else 1
                r = round(rng.uniform(0.2, 0.95), 6)
                lam = LAMBDAS[i % len(LAMBDAS)]
                if kind == "kalpha":
                    alpha = round(rng.uniform(0.2, 1.0), 6)
                    dsl = f"compose(kalpha({_num(alpha)}),phi({_num(zeros[0].real)},{_num(zeros[0].imag)}))"
                else:
                    dsl = _dsl(zeros, sigma, scale)
                e = CorpusEntry(f"c{i:02d}", lam, r, kind, dsl)
                jp = e.jordan_problem()
                try:
                    closed = trace_problem(jp).closed
                except HyplevelError:
                    closed = False
                if not closed:
                    continue
                if not _traceable(e.level_problem()):
                    e = CorpusEntry(e.id, None, r, kind, e.dsl)
                out.append(e)
                i += 1
                break
    return out


def format_corpus(entries) -> str:
    return "\n".join([HEADER, *(e.line() for e in entries)]) + "\n"


def parse_corpus(text: str) -> list[CorpusEntry]:
    out = []
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("#"):
            continue
        ident, lam, r, kind, dsl = raw.split("\t")
        out.append(CorpusEntry(ident, None if lam == "-" else float(lam), float(r), kind, dsl))
    return out


def load_corpus(path=None) -> list[CorpusEntry]:
    """The committed corpus, or a corpus file at ``path``."""
    if path is None:
        text = resources.files("hyplevel").joinpath("data/corpus.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return parse_corpus(text)
