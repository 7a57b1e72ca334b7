"""Ball statistics and the topological / Benjamini-Schramm distances.

Frequencies are exact :class:`fractions.Fraction` values. Labeled variants
take a :class:`~cantorlab.labeling.Labeling`; at radius ``k`` every label is
truncated to its first ``k`` bits.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .canon import DEFAULT_MAX_VERTICES, CanonicalCode, RootedBall, canonicalize
from .graph import Graph, PreconditionError


@dataclass(frozen=True)
class BallProfile:
    radius: int
    freq: dict = field(default_factory=dict)  # CanonicalCode -> Fraction

    def total(self) -> Fraction:
        return sum(self.freq.values(), Fraction(0))

    def to_json(self) -> dict:
        atoms = {c.hex(): f"{p.numerator}/{p.denominator}" for c, p in sorted(self.freq.items())}
        return {"radius": self.radius, "atoms": atoms}

    @classmethod
    def from_json(cls, obj: dict) -> "BallProfile":
        return cls(obj["radius"], {CanonicalCode.from_hex(h): Fraction(p)
                                   for h, p in obj["atoms"].items()})


@dataclass(frozen=True)
class BallSet:
    radius: int
    codes: frozenset = frozenset()

    def __len__(self):
        return len(self.codes)

    def to_json(self) -> dict:
        return {"radius": self.radius, "codes": sorted(c.hex() for c in self.codes)}

    @classmethod
    def from_json(cls, obj: dict) -> "BallSet":
        return cls(obj["radius"], frozenset(CanonicalCode.from_hex(h) for h in obj["codes"]))


def dumps(obj) -> str:
    """Stable JSON text for profiles and ball sets."""
    return json.dumps(obj.to_json(), sort_keys=True, indent=1) + "\n"


def _labels_at(labeling, k: int):
    if labeling is None:
        return None
    return labeling.prefix(k)


def ball_codes(g: Graph, k: int, labeling=None, max_vertices=DEFAULT_MAX_VERTICES) -> list:
    """Canonical code of the radius-``k`` ball at every vertex."""
    if k < 0:
        raise PreconditionError("radius must be >= 0")
    key = ("codes", k, id(labeling), max_vertices)
    cached = g._cache.get(key)
    if cached is not None and cached[0] is labeling:
        return cached[1]
    labels = _labels_at(labeling, k)
    codes = [canonicalize(RootedBall.around(g, x, k, labels), max_vertices) for x in range(g.n)]
    g._cache[key] = (labeling, codes)
    return codes


def ball_profile(g: Graph, k: int, labeling=None) -> BallProfile:
    """Exact frequency of each canonical ``k``-ball over all roots."""
    if g.n == 0:
        raise PreconditionError("profile of the empty graph")
    counts = Counter(ball_codes(g, k, labeling))
    return BallProfile(k, {c: Fraction(m, g.n) for c, m in counts.items()})


def ball_set(g: Graph, k: int, labeling=None) -> BallSet:
    """The set of (labeled) ``k``-ball types occurring in ``g``."""
    return BallSet(k, frozenset(ball_codes(g, k, labeling)))


def _agreement(same, k_max: int) -> Fraction:
    if k_max < 1:
        raise PreconditionError("k_max must be >= 1")
    for i in range(1, k_max + 1):
        if not same(i):
            return Fraction(1, 2 ** (i - 1))
    return Fraction(0)


def d_gr(g: Graph, h: Graph, k_max: int) -> Fraction:
    """``2**-n`` for the largest ``n <= k_max`` with equal ball sets at radii
    ``1..n``; 0 means the two graphs agree up to the horizon ``k_max``."""
    return _agreement(lambda i: ball_set(g, i) == ball_set(h, i), k_max)


def d_cgr(g: Graph, g_labels, h: Graph, h_labels, k_max: int) -> Fraction:
    """Labeled version of :func:`d_gr`; at radius ``i`` labels keep ``i`` bits."""
    for lab in (g_labels, h_labels):
        if lab.depth < k_max:
            raise PreconditionError(f"labeling depth {lab.depth} < k_max {k_max}")
    return _agreement(lambda i: ball_set(g, i, g_labels) == ball_set(h, i, h_labels), k_max)


def tv_distance(p: BallProfile, q: BallProfile) -> Fraction:
    keys = set(p.freq) | set(q.freq)
    zero = Fraction(0)
    return sum((abs(p.freq.get(c, zero) - q.freq.get(c, zero)) for c in keys), zero) / 2


def bs_distance(g: Graph, h: Graph, k: int) -> Fraction:
    """Total-variation distance between the radius-``k`` ball profiles."""
    return tv_distance(ball_profile(g, k), ball_profile(h, k))


def bs_metric(g: Graph, h: Graph, k_max: int) -> Fraction:
    """Combined distance ``sum_{k=1..k_max} 2**-k * TV_k``."""
    return sum((Fraction(1, 2 ** k) * bs_distance(g, h, k) for k in range(1, k_max + 1)),
               Fraction(0))
