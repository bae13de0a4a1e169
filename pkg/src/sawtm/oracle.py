"""Brute-force backtracking enumerators used as ground truth.

Polygons are rooted at their smallest vertex in ``(y, x)`` order and traced
in both directions, so every polygon is met exactly twice.  Walks are
directed and start at the origin.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterator

from .core import CountSeries, LatticeMode, Rect

SAP_GUARD = 26
SAW_GUARD = 20

_STEPS = ((1, 0), (-1, 0), (0, 1), (0, -1))


class FeasibilityError(RuntimeError):
    """Requested brute-force size exceeds the guard."""


@dataclass(frozen=True)
class OracleConfig:
    nmax: int
    mode: LatticeMode
    allow_large: bool = False

    def __post_init__(self) -> None:
        if self.nmax < 1:
            raise ValueError("nmax must be >= 1")
        guard = SAP_GUARD if self.mode is LatticeMode.SAP else SAW_GUARD
        if self.nmax > guard and not self.allow_large:
            raise FeasibilityError(
                f"{self.mode.value} oracle refuses nmax={self.nmax} > {guard} "
                "(pass allow_large to override)")


def iter_polygons(nmax: int, allow_large: bool = False) -> Iterator[list[tuple[int, int]]]:
    """Yield every SAP of perimeter <= nmax once, as its closed vertex cycle.

    The root (0, 0) is the polygon's minimal vertex in (y, x) order.  Each
    cycle is found in two directions; only the one whose second vertex is
    smaller than its last vertex is yielded.
    """
    OracleConfig(nmax, LatticeMode.SAP, allow_large)
    path = [(0, 0)]
    visited = {(0, 0)}

    def allowed(x: int, y: int) -> bool:
        return y > 0 or (y == 0 and x > 0)

    def extend(x: int, y: int) -> Iterator[list[tuple[int, int]]]:
        steps = len(path) - 1
        for dx, dy in _STEPS:
            nx, ny = x + dx, y + dy
            if nx == 0 and ny == 0:
                if steps + 1 >= 4 and path[1] < path[-1]:
                    yield path
                continue
            if (nx, ny) in visited or not allowed(nx, ny):
                continue
            # must still be able to get home
            if steps + 1 + abs(nx) + abs(ny) > nmax:
                continue
            path.append((nx, ny))
            visited.add((nx, ny))
            yield from extend(nx, ny)
            visited.discard((nx, ny))
            path.pop()

    yield from extend(0, 0)


def iter_walks(nmax: int, allow_large: bool = False) -> Iterator[list[tuple[int, int]]]:
    """Yield every directed SAW from the origin with 1..nmax steps (vertex lists)."""
    OracleConfig(nmax, LatticeMode.SAW, allow_large)
    path = [(0, 0)]
    visited = {(0, 0)}

    def extend(x: int, y: int) -> Iterator[list[tuple[int, int]]]:
        if len(path) > 1:
            yield path
        if len(path) - 1 == nmax:
            return
        for dx, dy in _STEPS:
            nxt = (x + dx, y + dy)
            if nxt in visited:
                continue
            path.append(nxt)
            visited.add(nxt)
            yield from extend(*nxt)
            visited.discard(nxt)
            path.pop()

    yield from extend(0, 0)


def enumerate_walks_oracle(nmax: int, allow_large: bool = False) -> CountSeries:
    OracleConfig(nmax, LatticeMode.SAW, allow_large)
    counts = [0] * (nmax + 1)
    counts[0] = 1
    # plain counting recursion; avoids list copies on the hot path
    visited = {(0, 0)}

    def extend(x: int, y: int, steps: int) -> None:
        for dx, dy in _STEPS:
            nxt = (x + dx, y + dy)
            if nxt in visited:
                continue
            counts[steps + 1] += 1
            if steps + 1 < nmax:
                visited.add(nxt)
                extend(nxt[0], nxt[1], steps + 1)
                visited.discard(nxt)

    extend(0, 0, 0)
    return CountSeries(nmax, counts)


def enumerate_polygons_oracle(nmax: int, allow_large: bool = False) -> CountSeries:
    """p_n up to translation, via minimal-vertex rooting."""
    counts = [0] * (nmax + 1)
    for cycle in iter_polygons(nmax, allow_large):
        counts[len(cycle)] += 1
    return CountSeries(nmax, counts)


def polygons_by_rooted_walks(nmax: int) -> CountSeries:
    """Independent route: count closed directed walks through the origin, divide by 2n."""
    OracleConfig(nmax, LatticeMode.SAP)
    closed = [0] * (nmax + 1)
    visited = {(0, 0)}

    def extend(x: int, y: int, steps: int) -> None:
        for dx, dy in _STEPS:
            nx, ny = x + dx, y + dy
            if nx == 0 and ny == 0:
                if steps + 1 >= 4:
                    closed[steps + 1] += 1
                continue
            if (nx, ny) in visited or steps + 1 + abs(nx) + abs(ny) > nmax:
                continue
            visited.add((nx, ny))
            extend(nx, ny, steps + 1)
            visited.discard((nx, ny))

    extend(0, 0, 0)
    counts = [0] * (nmax + 1)
    for n, c in enumerate(closed):
        if c:
            assert c % (2 * n) == 0
            counts[n] = c // (2 * n)
    return CountSeries(nmax, counts)


def bounding_rect(vertices: list[tuple[int, int]]) -> tuple[Rect, int, int]:
    """Bounding box plus its (min x, min y) anchor."""
    xs = [v[0] for v in vertices]
    ys = [v[1] for v in vertices]
    x0, y0 = min(xs), min(ys)
    return Rect(max(xs) - x0, max(ys) - y0), x0, y0


def cut_crossings(vertices: list[tuple[int, int]], closed: bool) -> list[int]:
    """Horizontal-edge count across each cut 0..w-1 of the object's bounding box.

    Cut ``x`` sits between vertex columns ``x`` and ``x + 1`` (relative to the box).
    """
    rect, x0, _ = bounding_rect(vertices)
    counts = [0] * rect.w
    n = len(vertices)
    pairs = n if closed else n - 1
    for j in range(pairs):
        (ax, ay), (bx, by) = vertices[j], vertices[(j + 1) % n]
        if ay == by:
            x = min(ax, bx) - x0
            if 0 <= x < rect.w:
                counts[x] += 1
    return counts


def _tally(objects: Iterator[list[tuple[int, int]]], closed: bool, nmax: int,
           keep: Callable[[list[tuple[int, int]]], bool] | None) -> dict[Rect, list[int]]:
    table: dict[Rect, list[int]] = defaultdict(lambda: [0] * (nmax + 1))
    for verts in objects:
        if keep is not None and not keep(verts):
            continue
        n = len(verts) if closed else len(verts) - 1
        table[bounding_rect(verts)[0]][n] += 1
    return table


def inscribed_table(mode: LatticeMode, nmax: int, allow_large: bool = False,
                    keep: Callable[[list[tuple[int, int]]], bool] | None = None,
                    ) -> dict[Rect, CountSeries]:
    """Inscribed counts for every bounding box at once.

    SAW entries are undirected shapes (directed walk count halved).
    """
    if mode is LatticeMode.SAP:
        raw = _tally(iter_polygons(nmax, allow_large), True, nmax, keep)
        return {r: CountSeries(nmax, c) for r, c in raw.items()}
    raw = _tally(iter_walks(nmax, allow_large), False, nmax, keep)
    out = {}
    for r, c in raw.items():
        assert all(v % 2 == 0 for v in c)
        out[r] = CountSeries(nmax, [v // 2 for v in c])
    return out


def inscribed_oracle(rect: Rect, mode: LatticeMode, nmax: int,
                     allow_large: bool = False) -> CountSeries:
    """Undirected objects of length <= nmax whose bounding box is exactly ``rect``."""
    if rect.min_length(mode) > nmax:
        return CountSeries(nmax)
    if mode is LatticeMode.SAP:
        rect.validate_for(mode)
    return inscribed_table(mode, nmax, allow_large).get(rect, CountSeries(nmax))


def filtered_inscribed_oracle(rect: Rect, mode: LatticeMode, nmax: int, k: int,
                              classes: frozenset[int] | set[int], q: int) -> CountSeries:
    """Brute-force N_K: inscribed objects whose cuts in the given residue classes
    each carry at most ``q`` horizontal edges."""
    closed = mode is LatticeMode.SAP

    def keep(verts: list[tuple[int, int]]) -> bool:
        if bounding_rect(verts)[0] != rect:
            return False
        return all(c <= q for x, c in enumerate(cut_crossings(verts, closed))
                   if x % k in classes)

    table = inscribed_table(mode, nmax, keep=keep)
    return table.get(rect, CountSeries(nmax))
