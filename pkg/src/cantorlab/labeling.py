"""Symmetry-breaking vertex labelings and their certificates.

A :class:`Labeling` stores a finite prefix (``depth`` bits) of each vertex's
infinite bit label. Two kinds of certificate are tracked:

``proper[r] = s``
    for every pair ``0 < d(x, y) <= r`` the ``s``-bit labeled ``s``-balls at
    ``x`` and ``y`` are not rooted-labeled isomorphic.
``distinct[r] = t``
    for every such pair the first ``t`` bits of the labels already differ
    (the stronger form; it implies ``proper[r] <= max(t, 1)``).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .canon import RootedBall, canonicalize
from .graph import Graph, PreconditionError


class NotCertified(PreconditionError):
    """A labeling lacks the distinctness a consumer needs."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


@dataclass
class Labeling:
    bits: np.ndarray  # (n, depth) uint8 of 0/1
    proper: dict = field(default_factory=dict)
    distinct: dict = field(default_factory=dict)
    globally_distinct: int | None = None  # bits after which all labels differ

    def __post_init__(self):
        self.bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if self.bits.ndim != 2:
            raise PreconditionError("bits must be an (n, depth) array")

    @classmethod
    def from_strings(cls, labels) -> "Labeling":
        labels = list(labels)
        depth = min((len(s) for s in labels), default=0)
        arr = np.array([[c == "1" for c in s[:depth]] for s in labels], dtype=np.uint8)
        return cls(arr.reshape(len(labels), depth))

    @property
    def n(self) -> int:
        return self.bits.shape[0]

    @property
    def depth(self) -> int:
        return self.bits.shape[1]

    def _need(self, t: int):
        if t > self.depth:
            raise PreconditionError(f"requested {t} label bits but depth is {self.depth}")

    def prefix(self, t: int) -> list[str]:
        """First ``t`` bits of each label as a '0'/'1' string."""
        self._need(t)
        if t == 0:
            return [""] * self.n
        rows = self.bits[:, :t] + ord("0")
        return [bytes(r).decode() for r in rows]

    def prefix_keys(self, t: int) -> np.ndarray:
        """First ``t`` bits of each label read as a big-endian integer (t <= 62)."""
        self._need(t)
        if t > 62:
            raise PreconditionError("integer keys need t <= 62 bits")
        weights = (1 << np.arange(t - 1, -1, -1, dtype=np.int64))
        return self.bits[:, :t].astype(np.int64) @ weights

    def _prefix_ranks(self, t: int) -> np.ndarray:
        self._need(t)
        if t <= 62:
            return self.prefix_keys(t)
        _, inv = np.unique(self.bits[:, :t], axis=0, return_inverse=True)
        return inv.astype(np.int64).ravel()

    def distinct_bits(self, r: int) -> int | None:
        """Smallest certified ``t`` valid at radius ``r``, if any."""
        ts = [t for rr, t in self.distinct.items() if rr >= r]
        if self.globally_distinct is not None:
            ts.append(self.globally_distinct)
        return min(ts) if ts else None

    def lines(self) -> str:
        return "".join(f"{x} {s}\n" for x, s in enumerate(self.prefix(self.depth)))

    def sidecar(self) -> str:
        return json.dumps({str(r): s for r, s in sorted(self.proper.items())}, sort_keys=True) + "\n"


def parse_labeling(text: str, sidecar: str | None = None) -> Labeling:
    rows = {}
    for line in text.splitlines():
        if line.strip():
            x, s = line.split()
            rows[int(x)] = s
    lab = Labeling.from_strings(rows[x] for x in range(len(rows)))
    if sidecar:
        lab.proper = {int(r): int(s) for r, s in json.loads(sidecar).items()}
    return lab


def constant_labeling(n: int, depth: int, bit: int = 0) -> Labeling:
    return Labeling(np.full((n, depth), bit, dtype=np.uint8))


def _encode_colors(colors: np.ndarray) -> np.ndarray:
    ncolors = int(colors.max(initial=0)) + 1
    width = max(1, math.ceil(math.log2(ncolors))) if ncolors > 1 else 1
    shifts = np.arange(width - 1, -1, -1)
    return ((colors[:, None] >> shifts) & 1).astype(np.uint8)


def power_greedy_labeling(g: Graph, r: int) -> Labeling:
    """Labels from a greedy proper colouring of the distance power ``G^r``.

    Vertices are coloured in ascending id, each taking the least colour
    unused within distance ``r``; colour ``c`` is written in binary with
    ``max(1, ceil(log2(#colours)))`` bits. Labels are therefore pairwise
    distinct within distance ``r`` and the certificate ``distinct[r]`` is
    attached.
    """
    if r < 1:
        raise PreconditionError("r must be >= 1")
    colors = _kernels.greedy_power_coloring(g.indptr, g.indices, int(r))
    lab = Labeling(_encode_colors(colors))
    lab.distinct[r] = lab.depth
    lab.proper[r] = lab.depth
    return lab


def random_labeling(g: Graph, bits: int, seed: int = 0, certify: bool = True) -> Labeling:
    """Seeded uniformly random labels.

    With ``certify`` the labels are checked for global pairwise
    distinctness; on success the certificate is attached, on failure the
    labeling is returned uncertified.
    """
    if bits < 1:
        raise PreconditionError("bits must be >= 1")
    rng = np.random.default_rng(seed)
    lab = Labeling(rng.integers(0, 2, size=(g.n, bits), dtype=np.uint8))
    if certify:
        certify_distinct(g, lab, None)
    return lab


def certify_distinct(g: Graph, lab: Labeling, r: int | None):
    """Least ``t`` making labels pairwise distinct within distance ``r``.

    ``r=None`` asks for distinctness between all pairs. Returns ``t`` and
    records it, or returns a witness pair ``(x, y)`` when even the full
    depth does not separate them.
    """
    if r is not None and r < 1:
        raise PreconditionError("r must be >= 1")
    if lab.n != g.n:
        raise PreconditionError("labeling size does not match graph")
    if r is None:
        full = lab._prefix_ranks(lab.depth)
        if np.unique(full).shape[0] < g.n:
            order = np.lexsort((np.arange(g.n), full))
            same = np.flatnonzero(full[order][1:] == full[order][:-1])
            x, y = sorted(order[same[0]:same[0] + 2].tolist())
            return (x, y)
        t = next(t for t in range(1, lab.depth + 1)
                 if np.unique(lab._prefix_ranks(t)).shape[0] == g.n)
        lab.globally_distinct = t
        return t
    hit = _kernels.equal_key_pairs(g.indptr, g.indices, lab._prefix_ranks(lab.depth), 1, int(r), True)
    if hit.shape[0]:
        return tuple(int(v) for v in hit[0])
    lo, hi = 1, lab.depth
    while lo < hi:
        mid = (lo + hi) // 2
        keys = lab._prefix_ranks(mid)
        if _kernels.equal_key_pairs(g.indptr, g.indices, keys, 1, int(r), True).shape[0]:
            lo = mid + 1
        else:
            hi = mid
    lab.distinct[r] = lo
    return lo


def require_distinct(g: Graph, lab: Labeling, r: int) -> int:
    """Certified distinct-bit count at radius ``r``; raises :class:`NotCertified`."""
    t = lab.distinct_bits(r)
    if t is not None:
        return t
    res = certify_distinct(g, lab, r)
    if isinstance(res, tuple):
        raise NotCertified(f"labels of {res} coincide at distance <= {r}", res)
    return res


def labeled_ball_code(g: Graph, lab: Labeling, x: int, s: int, cache: dict | None = None):
    """Code of the ``s``-ball at ``x`` with ``s``-bit labels."""
    key = (x, s)
    if cache is not None and key in cache:
        return cache[key]
    code = canonicalize(RootedBall.around(g, x, s, lab.prefix(s)), None)
    if cache is not None:
        cache[key] = code
    return code


def verify_proper(g: Graph, lab: Labeling, r: int):
    """Least ``s <= depth`` certifying properness at radius ``r``, else a witness.

    A pair is separated at ``s`` when its ``s``-bit labeled ``s``-balls are
    non-isomorphic; separation persists for larger ``s``, so ``s(r)`` is the
    largest per-pair separation level. Returns ``s`` (recorded in
    ``lab.proper``) or the least unseparated pair ``(x, y)``.
    """
    if r < 1:
        raise PreconditionError("r must be >= 1")
    if lab.n != g.n:
        raise PreconditionError("labeling size does not match graph")
    if lab.depth == 0:
        pairs = _kernels.equal_key_pairs(g.indptr, g.indices, np.zeros(g.n, np.int64), 1, int(r), True)
        if pairs.shape[0]:
            return tuple(int(v) for v in pairs[0])
    cache: dict = {}
    pending = None
    for s in range(1, lab.depth + 1):
        keys = lab._prefix_ranks(s)
        cand = _kernels.equal_key_pairs(g.indptr, g.indices, keys, 1, int(r), False)
        if pending is not None:
            # pairs already separated stay separated
            pend = {tuple(p) for p in pending.tolist()}
            cand = np.array([p for p in cand.tolist() if tuple(p) in pend], dtype=np.int64).reshape(-1, 2)
        still = [
            (x, y) for x, y in cand.tolist()
            if labeled_ball_code(g, lab, x, s, cache) == labeled_ball_code(g, lab, y, s, cache)
        ]
        if not still:
            lab.proper[r] = s
            return s
        pending = np.array(still, dtype=np.int64)
    return tuple(int(v) for v in min(pending.tolist()))
