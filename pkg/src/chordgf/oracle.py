"""Brute-force enumeration of (twisted) partial chord diagrams.

This is the independent ground truth for the evolution engine: every matching
on an ordered tuple of backbones is generated, its boundary cycles are walked
and the resulting types are histogrammed.  Single diagrams go through a plain
Python walk (:func:`boundary_profile`); histograms go through the batched
kernels in :mod:`chordgf._kernels`.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from . import _kernels
from .spectra import DiagramType, Orientability, Spectrum

Slot = tuple[int, int]  # (backbone index, position 1..size)


class DisconnectedDiagram(ValueError):
    pass


@dataclass(frozen=True)
class ChordDiagram:
    backbone_sizes: tuple[int, ...]
    chords: tuple[tuple[Slot, Slot], ...]
    twists: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if not self.backbone_sizes:
            raise ValueError("at least one backbone is required")
        if any(s < 0 for s in self.backbone_sizes):
            raise ValueError("backbone sizes must be non-negative")
        twists = self.twists or (False,) * len(self.chords)
        if len(twists) != len(self.chords):
            raise ValueError("one twist flag per chord")
        object.__setattr__(self, "twists", tuple(bool(t) for t in twists))
        seen = set()
        for a, b in self.chords:
            for bb, pos in (a, b):
                if not (0 <= bb < len(self.backbone_sizes)) or not (1 <= pos <= self.backbone_sizes[bb]):
                    raise ValueError(f"slot {(bb, pos)} outside the backbones")
            if a == b or a in seen or b in seen:
                raise ValueError("each slot may carry at most one chord end")
            seen.update((a, b))

    @property
    def k(self) -> int:
        return len(self.chords)

    @property
    def marked(self) -> int:
        return sum(self.backbone_sizes) - 2 * self.k

    def global_slot(self, slot: Slot) -> int:
        bb, pos = slot
        return sum(self.backbone_sizes[:bb]) + pos - 1

    def partner_array(self) -> tuple[np.ndarray, np.ndarray]:
        M = sum(self.backbone_sizes)
        partner = np.full(M, -1, np.int64)
        twist = np.zeros(M, np.uint8)
        for (a, b), tw in zip(self.chords, self.twists):
            ga, gb = self.global_slot(a), self.global_slot(b)
            partner[ga], partner[gb] = gb, ga
            twist[ga] = twist[gb] = tw
        return partner, twist

    def is_connected(self) -> bool:
        parent = list(range(len(self.backbone_sizes)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for (a, _), (b, _) in self.chords:
            parent[find(a)] = find(b)
        return len({find(i) for i in range(len(parent))}) == 1

    def is_orientable_twisting(self) -> bool:
        return not any(self.twists)


@dataclass(frozen=True)
class BoundaryCycle:
    marked_points: int
    length: int


@dataclass(frozen=True)
class BoundaryProfile:
    cycles: tuple[BoundaryCycle, ...]

    @property
    def n(self) -> Spectrum:
        return Spectrum.from_list(c.marked_points for c in self.cycles)

    @property
    def p(self) -> Spectrum:
        return Spectrum.from_list(c.length for c in self.cycles)


def boundary_profile(d: ChordDiagram) -> BoundaryProfile:
    """Walk the boundary components of ``d``.

    Nodes are the two sides ``(e, 'L')`` / ``(e, 'R')`` of every chord end.
    A chord side links the right of one end to the left of the other, or
    right to right and left to left for a twisted chord.  A corner links the
    right of an end to the left of the next end on the same backbone; the
    last corner wraps around the underside, which adds 1 to the length.
    """
    partner, twist = d.partner_array()
    chord_side: dict = {}
    corner: dict = {}
    cycles: list[BoundaryCycle] = []
    offset = 0
    for size in d.backbone_sizes:
        ends = [e for e in range(offset, offset + size) if partner[e] >= 0]
        if not ends:
            cycles.append(BoundaryCycle(size, 1))
        else:
            for i, e in enumerate(ends):
                if i + 1 < len(ends):
                    nxt = ends[i + 1]
                    info = (nxt - e - 1, 0)
                else:
                    nxt = ends[0]
                    info = ((offset + size - 1 - e) + (nxt - offset), 1)
                corner[(e, "R")] = ((nxt, "L"), info)
                corner[(nxt, "L")] = ((e, "R"), info)
        offset += size
    for e in range(len(partner)):
        f = int(partner[e])
        if f < 0:
            continue
        if twist[e]:
            chord_side[(e, "R")] = (f, "R")
            chord_side[(e, "L")] = (f, "L")
        else:
            chord_side[(e, "R")] = (f, "L")
            chord_side[(e, "L")] = (f, "R")
    seen = set()
    for start in sorted(chord_side):
        if start in seen:
            continue
        marked = length = 0
        v = start
        while True:
            seen.add(v)
            w = chord_side[v]
            seen.add(w)
            v, (gap, under) = corner[w]
            marked += gap
            length += 1 + under
            if v == start:
                break
        cycles.append(BoundaryCycle(marked, length))
    return BoundaryProfile(tuple(cycles))


def classify(d: ChordDiagram, variant: Orientability | str | None = None) -> DiagramType:
    """Type of a connected diagram.

    ``variant`` defaults to orientable when no chord is twisted.  Asking for
    the orientable type of a diagram with twisted chords is an error; in the
    non-orientable variant the genus slot holds h = 2 - b + k - n.
    """
    if not d.is_connected():
        raise DisconnectedDiagram("diagram is not connected")
    if variant is None:
        variant = Orientability.ORIENTABLE if d.is_orientable_twisting() else Orientability.NON_ORIENTABLE
    variant = Orientability(variant)
    prof = boundary_profile(d)
    b = Spectrum.from_list(d.backbone_sizes)
    n = prof.n
    h = 2 - len(d.backbone_sizes) + d.k - n.size()
    if variant is Orientability.ORIENTABLE:
        if not d.is_orientable_twisting():
            raise ValueError("twisted chords in an orientable classification")
        genus = h // 2
    else:
        genus = h
    p = prof.p if d.marked == 0 else None
    return DiagramType(variant, genus, d.k, d.marked, b, n, p)


# --------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def matching_table(M: int, k: int) -> np.ndarray:
    """All partial matchings of ``M`` ordered slots with ``k`` chords.

    Row ``r`` gives the partner slot of each slot, or -1 for marked points.
    """
    if not (0 <= 2 * k <= M):
        raise ValueError(f"cannot place {k} chords on {M} slots")
    rows: list[list[int]] = []
    cur = [-2] * M

    def rec(i: int, chords_left: int, marks_left: int):
        while i < M and cur[i] != -2:
            i += 1
        if i == M:
            rows.append(cur.copy())
            return
        if marks_left:
            cur[i] = -1
            rec(i + 1, chords_left, marks_left - 1)
            cur[i] = -2
        if chords_left:
            for j in range(i + 1, M):
                if cur[j] == -2:
                    cur[i], cur[j] = j, i
                    rec(i + 1, chords_left - 1, marks_left)
                    cur[i] = cur[j] = -2

    rec(0, k, M - 2 * k)
    table = np.array(rows, dtype=np.int64).reshape(len(rows), M)
    table.setflags(write=False)
    return table


def matching_count(M: int, k: int) -> int:
    """C(M, 2k) * (2k - 1)!!"""
    return math.comb(M, 2 * k) * math.prod(range(1, 2 * k, 2))


def _slot_of(sizes: Sequence[int], g: int) -> Slot:
    for bb, s in enumerate(sizes):
        if g < s:
            return (bb, g + 1)
        g -= s
    raise IndexError(g)


def enumerate_diagrams(
    backbone_sizes: Sequence[int],
    k: int,
    variant: Orientability | str = Orientability.ORIENTABLE,
    connected_only: bool = True,
) -> Iterator[ChordDiagram]:
    sizes = tuple(int(s) for s in backbone_sizes)
    variant = Orientability(variant)
    table = matching_table(sum(sizes), k)
    twistings = (
        [(False,) * k]
        if variant is Orientability.ORIENTABLE
        else list(itertools.product((False, True), repeat=k))
    )
    for row in table:
        chords = tuple(
            (_slot_of(sizes, e), _slot_of(sizes, int(f))) for e, f in enumerate(row) if f > e
        )
        base = ChordDiagram(sizes, chords)
        if connected_only and not base.is_connected():
            continue
        for tw in twistings:
            yield ChordDiagram(sizes, chords, tw)


def _batch(sizes: tuple[int, ...], k: int, variant: Orientability):
    table = matching_table(sum(sizes), k)
    M = table.shape[1]
    if variant is Orientability.ORIENTABLE or k == 0:
        return table, np.zeros_like(table, dtype=np.uint8)
    # one row per (matching, twist pattern); chord c is the c-th lowest opener
    D = table.shape[0]
    patterns = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.uint8)
    openers = np.arange(M)[None, :] < table
    rank = np.cumsum(openers, axis=1) - 1
    closer_rank = np.take_along_axis(rank, np.where(table >= 0, table, 0), axis=1)
    chord_id = np.where(openers, rank, np.where(table >= 0, closer_rank, -1))
    partner = np.repeat(table, len(patterns), axis=0)
    ids = np.repeat(chord_id, len(patterns), axis=0)
    pats = np.tile(patterns, (D, 1))
    twist = np.where(ids >= 0, np.take_along_axis(pats, np.maximum(ids, 0), axis=1), 0)
    return partner, twist.astype(np.uint8)


def count_types(
    backbone_sizes: Sequence[int],
    k: int,
    variant: Orientability | str = Orientability.ORIENTABLE,
    connected_only: bool = True,
    backend: str | None = None,
) -> dict[DiagramType, int]:
    """Exact histogram of diagram types on one ordered backbone tuple.

    Disconnected diagrams have no type; with ``connected_only=False`` they are
    silently dropped from the histogram after being enumerated.
    """
    sizes = tuple(int(s) for s in backbone_sizes)
    variant = Orientability(variant)
    partner, twist = _batch(sizes, k, variant)
    nvec, pvec, ncyc, connected = _kernels.boundary_spectra(partner, twist, sizes, backend)
    keep = connected
    M = sum(sizes)
    rows = np.concatenate([ncyc[:, None], nvec, pvec], axis=1)[keep]
    if len(rows) == 0:
        return {}
    uniq, counts = np.unique(rows, axis=0, return_counts=True)
    b = Spectrum.from_list(sizes)
    B = len(sizes)
    out: dict[DiagramType, int] = {}
    for row, c in zip(uniq, counts):
        nc = int(row[0])
        n = Spectrum((i, int(m)) for i, m in enumerate(row[1 : M + 2]))
        p = Spectrum((i, int(m)) for i, m in enumerate(row[M + 2 :]))
        h = 2 - B + k - nc
        genus = h // 2 if variant is Orientability.ORIENTABLE else h
        t = DiagramType(variant, genus, k, M - 2 * k, b, n, p if M == 2 * k else None)
        out[t] = out.get(t, 0) + int(c)
    return out


def ordered_tuples(b: Spectrum) -> list[tuple[int, ...]]:
    """All distinct orderings of the backbone sizes in ``b``."""
    sizes = [i for i, m in b for _ in range(m)]
    return sorted(set(itertools.permutations(sizes)))


def point_counts(b: Spectrum, k: int, variant, backend: str | None = None) -> Counter:
    """``{(genus, n): count}`` summed over the ordered tuples of ``b``."""
    acc: Counter = Counter()
    for sizes in ordered_tuples(b):
        if 2 * k > sum(sizes):
            continue
        for t, c in count_types(sizes, k, variant, True, backend).items():
            acc[(t.genus, t.n)] += c
    return acc


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered tuples of ``parts`` non-negative sizes summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def length_counts(b: int, k: int, variant, backend: str | None = None) -> Counter:
    """``{(genus, p): count}`` for complete diagrams on ``b`` ordered backbones
    with ``k`` chords, summed over every way of sizing the backbones.

    A backbone without chords is only counted when it is the sole backbone
    (otherwise the diagram is disconnected), so size 0 only arises for k = 0.
    """
    acc: Counter = Counter()
    for sizes in compositions(2 * k, b):
        for t, c in count_types(sizes, k, variant, True, backend).items():
            acc[(t.genus, t.p)] += c
    return acc
