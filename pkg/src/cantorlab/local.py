"""Oracle execution on labeled balls, local verifiers, and (d+1)-colouring.

An :class:`Oracle` of radius ``m`` sees, at each vertex, the ``m``-ball
with every label cut to ``bits`` leading bits. The rule is never applied to
the ball as extracted; it gets the canonical representative, so equal codes
give equal outputs no matter how vertices were numbered.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import _kernels
from .canon import DEFAULT_MAX_VERTICES, RootedBall, canonical_ball
from .graph import Graph, PreconditionError
from .labeling import Labeling, require_distinct


@dataclass(frozen=True)
class QLabeling:
    values: tuple

    def __len__(self):
        return len(self.values)

    def __getitem__(self, x):
        return self.values[x]

    def lines(self) -> str:
        return "".join(f"{x} {v}\n" for x, v in enumerate(self.values))


def parse_qlabeling(text: str, cast=int) -> QLabeling:
    rows = dict(line.split() for line in text.splitlines() if line.strip())
    return QLabeling(tuple(cast(rows[str(x)]) for x in range(len(rows))))


@dataclass
class Oracle:
    """Rule on canonical labeled ``radius``-balls.

    ``rule(ball)`` receives the canonical :class:`RootedBall` (root 0,
    labels are ``bits``-bit strings). A ``table`` mapping codes to outputs
    takes precedence over the rule when it has the code.
    """

    radius: int
    rule: Callable[[RootedBall], Any] | None = None
    bits: int | None = None
    table: dict = field(default_factory=dict)
    max_vertices: int | None = DEFAULT_MAX_VERTICES
    name: str = "oracle"

    def __post_init__(self):
        if self.bits is None:
            self.bits = self.radius
        if self.rule is None and not self.table:
            raise PreconditionError("oracle needs a rule or a table")

    def evaluate(self, b: RootedBall):
        code, rep = canonical_ball(b, self.max_vertices)
        if code in self.table:
            return self.table[code]
        if self.rule is None:
            raise PreconditionError("ball code missing from oracle table")
        out = self.rule(rep)
        self.table[code] = out
        return out


def run_oracle(g: Graph, lab: Labeling, oracle: Oracle) -> QLabeling:
    if lab.depth < oracle.bits:
        raise PreconditionError(f"oracle reads {oracle.bits} bits, labeling has {lab.depth}")
    labels = lab.prefix(oracle.bits)
    return QLabeling(tuple(
        oracle.evaluate(RootedBall.around(g, x, oracle.radius, labels)) for x in range(g.n)
    ))


def constant_oracle(value, radius: int = 0) -> Oracle:
    return Oracle(radius, lambda b: value, bits=0, name="constant")


@dataclass
class Verifier:
    """Yes/no rule on canonical ``radius``-balls labeled by a QLabeling."""

    radius: int
    rule: Callable[[RootedBall], bool]
    max_vertices: int | None = DEFAULT_MAX_VERTICES
    name: str = "verifier"

    def __post_init__(self):
        self._memo = {}

    def accepts(self, b: RootedBall) -> bool:
        code, rep = canonical_ball(b, self.max_vertices)
        if code not in self._memo:
            self._memo[code] = bool(self.rule(rep))
        return self._memo[code]


@dataclass(frozen=True)
class VerifierReport:
    accepted: bool
    witness: int | None = None

    def to_json(self) -> dict:
        out = {"accepted": self.accepted}
        if self.witness is not None:
            out["witness"] = self.witness
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True) + "\n"


def run_verifier(g: Graph, q, verifier: Verifier) -> VerifierReport:
    values = tuple(q)
    if len(values) != g.n:
        raise PreconditionError("QLabeling must cover every vertex")
    for x in range(g.n):
        if not verifier.accepts(RootedBall.around(g, x, verifier.radius, values)):
            return VerifierReport(False, x)
    return VerifierReport(True)


def _root_neighbors(b: RootedBall):
    return b.graph.neighbors(b.root).tolist()


def coloring_verifier(d: int) -> Verifier:
    """Radius-1 check: root colour in ``1..d+1`` and unlike every neighbour."""

    def rule(b: RootedBall) -> bool:
        c = int(b.labels[b.root])
        return 1 <= c <= d + 1 and all(int(b.labels[y]) != c for y in _root_neighbors(b))

    return Verifier(1, rule, name=f"coloring({d})")


def independence_verifier() -> Verifier:
    """Radius-1 check that the value-0 vertices form an independent set."""

    def rule(b: RootedBall) -> bool:
        if int(b.labels[b.root]) != 0:
            return True
        return all(int(b.labels[y]) != 0 for y in _root_neighbors(b))

    return Verifier(1, rule, name="independence")


# -- colour reduction ---------------------------------------------------------

@dataclass(frozen=True)
class ColoringResult:
    colors: QLabeling
    initial_colors: int  # C = 2**t
    label_bits: int  # t
    radius: int  # radius of the compiled single-oracle form
    oracle: Oracle = field(repr=False, compare=False, default=None)


def _initial_colors(bit_rows: np.ndarray) -> np.ndarray:
    t = bit_rows.shape[1]
    weights = 1 << np.arange(t - 1, -1, -1, dtype=np.int64)
    return bit_rows.astype(np.int64) @ weights + 1


def reduction_oracle(d: int, t: int) -> Oracle:
    """The whole reduction schedule as one oracle of radius ``2**t - d - 1``.

    Each round is a radius-1 rule, so after ``j`` rounds a wrong colour can
    only have travelled ``j`` steps in from the fragment edge; the root of a
    ``(2**t - d - 1)``-ball therefore ends with its true colour.
    """
    radius = max((1 << t) - d - 1, 0)

    def rule(b: RootedBall):
        bits = np.array([[c == "1" for c in s] for s in b.labels], dtype=np.uint8).reshape(b.n, t)
        g = b.graph
        final = _kernels.reduce_colors(g.indptr, g.indices, _initial_colors(bits), d)
        return int(final[b.root])

    return Oracle(radius, rule, bits=t, max_vertices=None, name=f"reduce({d},{t})")


def local_proper_coloring(g: Graph, lab: Labeling, d: int | None = None) -> ColoringResult:
    """Proper colouring with colours ``1..d+1`` from labels distinct within distance 2.

    Initial colours are the ``t``-bit label prefixes plus one, ``C = 2**t``
    in all. Rounds run for ``c = C, C-1, ..., d+2``: every vertex coloured
    ``c`` (an independent class) moves to the least colour in ``1..d+1``
    missing around it.
    """
    d = g.degree_bound if d is None else d
    if d < g.degree_bound:
        raise PreconditionError(f"degree bound {d} below max degree {g.degree_bound}")
    t = require_distinct(g, lab, 2)
    init = _initial_colors(lab.bits[:, :t])
    final = _kernels.reduce_colors(g.indptr, g.indices, init, int(d))
    oracle = reduction_oracle(int(d), t)
    return ColoringResult(QLabeling(tuple(int(c) for c in final)), 1 << t, t, oracle.radius, oracle)
