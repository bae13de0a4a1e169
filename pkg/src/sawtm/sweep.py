"""Transfer-matrix sweeps over one rectangle.

Vertex ``(x, y)`` has column ``x`` in ``0..w`` and row ``y`` in ``0..h`` with
row 0 on top.  The swept set grows in chunks of whole columns; inside a chunk
rows are taken top to bottom and each row left to right.  While a chunk of
``m`` columns is active the boundary has exactly ``h + 1 + m`` edge positions,
listed from the top-right end of the staircase to the bottom-left:

    horizontals of finished rows (crossing the right cut of the chunk),
    verticals above the kink, the kink's horizontal edge, verticals below it,
    horizontals of pending rows (crossing the left cut).

Adding vertex ``(x, y)`` consumes the two edges at positions ``i, i + 1``
(above, left) and produces its right and bottom edges at the same positions,
with ``i = y + c1 - x`` for a chunk spanning columns ``c0..c1``.

A state key is ``bytes``: byte 0 holds the touch bits (top, bottom, left,
right) and the SAW endpoint count in bits 4-5; byte ``1 + j`` is the label of
position ``j`` (0 empty, 1 open, 2 close, 3 free).  The value is a list of
exact counts indexed by the number of edges placed so far.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (
    TOUCH_ALL,
    BoundarySignature,
    CountSeries,
    CrossingSlot,
    LatticeMode,
    Rect,
    Segment,
    SignatureError,
    Touch,
    check_labels,
    encode_signature,
)

StateMap = dict  # bytes -> list[int]

EMPTY, OPEN, CLOSE, FREE = 0, 1, 2, 3
_TOP, _BOTTOM, _LEFT, _RIGHT = 1, 2, 4, 8
_EP = 16  # one endpoint credit in the flag byte

DEFAULT_STATE_BUDGET = 5_000_000


class StateBudgetExceeded(MemoryError):
    """The number of live states passed the configured cap."""


class SweepInvariantError(AssertionError):
    """An engine invariant failed; always a bug, never bad input."""


@dataclass(frozen=True)
class SweepPlan:
    rect: Rect
    k: int
    K: frozenset[int]
    q: int | None
    stops: tuple[int, ...]
    chunks: tuple[tuple[int, int], ...]

    @property
    def chunk_order(self) -> list[tuple[int, int]]:
        return [(x, y) for c0, c1 in self.chunks
                for y in range(self.rect.h + 1) for x in range(c0, c1 + 1)]


def chunks_for_stops(w: int, stops: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    bounds = []
    start = 0
    for s in stops:
        bounds.append((start, s))
        start = s + 1
    bounds.append((start, w))
    return tuple(bounds)


def make_plan(rect: Rect, k: int, K: frozenset[int] | set[int], q: int | None) -> SweepPlan:
    """Plan stopping at every cut whose residue mod ``k`` lies in ``K``."""
    K = frozenset(K)
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not K or not K <= set(range(k)):
        raise ValueError(f"K must be a nonempty subset of 0..{k - 1}, got {sorted(K)}")
    stops = tuple(x for x in range(rect.w) if x % k in K)
    return SweepPlan(rect, k, K, q, stops, chunks_for_stops(rect.w, stops))


def full_plan(rect: Rect) -> SweepPlan:
    """Classical order: stop at every cut (one column per chunk), never filter."""
    stops = tuple(range(rect.w))
    return SweepPlan(rect, 1, frozenset({0}), None, stops, chunks_for_stops(rect.w, stops))


@dataclass
class SweepStats:
    peak_states: int = 0
    steps: int = 0
    # per chunk: (chunk width, max occupied positions seen in that chunk)
    chunk_slots: list[tuple[int, int]] = field(default_factory=list)


# --------------------------------------------------------------------------
# label helpers on packed keys (labels start at byte 1)

def _partner(key: bytes, j: int) -> int:
    if key[j] == OPEN:
        depth = 0
        for t in range(j + 1, len(key)):
            c = key[t]
            if c == OPEN:
                depth += 1
            elif c == CLOSE:
                if not depth:
                    return t
                depth -= 1
    else:
        depth = 0
        for t in range(j - 1, 0, -1):
            c = key[t]
            if c == CLOSE:
                depth += 1
            elif c == OPEN:
                if not depth:
                    return t
                depth -= 1
    raise SweepInvariantError(f"unmatched slot {j - 1} in {list(key[1:])}")


def _relabel(key: bytes, j: int, lab: int) -> bytes:
    return key[:j] + bytes((lab,)) + key[j + 1:]


def _merge(target: dict, key: bytes, ser: list[int]) -> None:
    cur = target.get(key)
    if cur is None:
        target[key] = ser
        return
    if len(ser) > len(cur):
        cur.extend([0] * (len(ser) - len(cur)))
    for n, c in enumerate(ser):
        if c:
            cur[n] += c


def _shift(ser: list[int], d: int, cap: int) -> list[int] | None:
    """Move every coefficient up by ``d``; drop what lands above ``cap``."""
    out = [0] * d + ser
    if len(out) > cap + 1:
        del out[cap + 1:]
        if not any(out):
            return None
    return out


# --------------------------------------------------------------------------
# the local update

def vertex_update(states: StateMap, x: int, y: int, rect: Rect, c1: int,
                  mode: LatticeMode, nmax: int, result: list[int]) -> StateMap:
    """Add vertex ``(x, y)`` to the swept region.

    ``c1`` is the last column of the active chunk.  Completed objects are
    added into ``result``; every other legal successor lands in the returned map.
    """
    w, h = rect.w, rect.h
    saw = mode is LatticeMode.SAW
    j = 1 + y + c1 - x  # byte offset of the edge above v; the left edge follows
    can_right = x < w
    can_down = y < h
    touch = (_TOP if y == 0 else 0) | (_BOTTOM if y == h else 0) \
        | (_LEFT if x == 0 else 0) | (_RIGHT if x == w else 0)
    head_end, tail_start = j, j + 2
    out: dict = {}

    for key, ser in states.items():
        t, l = key[j], key[j + 1]
        head, tail = key[:head_end], key[tail_start:]
        if not t and not l:
            _merge(out, key, ser)
            flags = key[0] | touch
            if can_right and can_down:
                s2 = _shift(ser, 2, nmax)
                if s2 is not None:
                    _merge(out, bytes((flags,)) + head[1:] + b"\x01\x02" + tail, s2)
            if saw and key[0] >> 4 < 2:
                s1 = _shift(ser, 1, nmax)
                if s1 is not None:
                    f = bytes((flags + _EP,)) + head[1:]
                    if can_right:
                        _merge(out, f + b"\x03\x00" + tail, s1)
                    if can_down:
                        _merge(out, f + b"\x00\x03" + tail, list(s1) if can_right else s1)
            continue

        flags = key[0] | touch
        if not t or not l:
            lab = t or l
            s1 = _shift(ser, 1, nmax)
            if s1 is not None:
                f = bytes((flags,)) + head[1:]
                if can_right:
                    _merge(out, f + bytes((lab, 0)) + tail, s1)
                if can_down:
                    _merge(out, f + bytes((0, lab)) + tail, list(s1) if can_right else s1)
            if saw and key[0] >> 4 < 2:
                cleared = bytes((flags + _EP,)) + head[1:] + b"\x00\x00" + tail
                if lab == FREE:
                    if flags & TOUCH_ALL == TOUCH_ALL and _bare(cleared):
                        _add_result(result, ser)
                else:
                    p = _partner(key, j if t else j + 1)
                    _merge(out, _relabel(cleared, p, FREE), ser)
            continue

        # both inputs occupied: join the two arc ends at v
        cleared = bytes((flags,)) + head[1:] + b"\x00\x00" + tail
        if t == OPEN and l == CLOSE:
            # closing a loop; only legal as the last step of a polygon
            if not saw and flags & TOUCH_ALL == TOUCH_ALL and _bare(cleared):
                _add_result(result, ser)
        elif t == CLOSE and l == OPEN:
            _merge(out, cleared, ser)
        elif t == OPEN and l == OPEN:
            _merge(out, _relabel(cleared, _partner(key, j + 1), OPEN), ser)
        elif t == CLOSE and l == CLOSE:
            _merge(out, _relabel(cleared, _partner(key, j), CLOSE), ser)
        elif t == FREE and l == FREE:
            if flags & TOUCH_ALL == TOUCH_ALL and _bare(cleared):
                _add_result(result, ser)
        elif t == FREE:
            _merge(out, _relabel(cleared, _partner(key, j + 1), FREE), ser)
        else:
            _merge(out, _relabel(cleared, _partner(key, j), FREE), ser)
    return out


def _bare(key: bytes) -> bool:
    return key.count(0, 1) == len(key) - 1


def _add_result(result: list[int], ser: list[int]) -> None:
    for n, c in enumerate(ser):
        if c:
            result[n] += c


# --------------------------------------------------------------------------
# filtering and pruning

def occupied(key: bytes) -> int:
    return len(key) - 1 - key.count(0, 1)


def cut_filter(states: StateMap, q: int | None) -> StateMap:
    """Keep states with at most ``q`` occupied crossings.

    Meant for a boundary aligned with a cut, where every position is a
    horizontal edge across that cut.
    """
    if q is None:
        return states
    return {key: ser for key, ser in states.items() if occupied(key) <= q}


def staircase_positions(rect: Rect, x: int, y: int, c0: int, c1: int) -> list[int]:
    """Arc-length coordinate of each boundary position's outer vertex after adding ``(x, y)``.

    The outer vertices lie on a monotone staircase, so Manhattan distance
    between two of them is the difference of these coordinates.
    """
    h = rect.h
    outer: list[tuple[int, int]] = [(c1 + 1, r) for r in range(y)]
    outer += [(col, y) for col in range(c1, x, -1)]
    outer.append((x + 1, y))
    outer += [(col, y + 1) for col in range(x, c0 - 1, -1)]
    outer += [(c0, r) for r in range(y + 1, h + 1)]
    return [c1 + 1 - ox + oy for ox, oy in outer]


def closing_cost(key: bytes, pos: list[int]) -> int:
    """Fewest extra edges that could pair up the occupied crossing ends outside."""
    need = 0
    first = None
    for j in range(1, len(key)):
        if key[j]:
            if first is None:
                first = pos[j - 1]
            else:
                need += pos[j - 1] - first
                first = None
    return need


def prune_state(key: bytes, ser: list[int], pos: list[int], mode: LatticeMode,
                nmax: int) -> list[int] | None:
    """Trim coefficients that cannot finish within ``nmax``; None if nothing survives.

    SAW states are only held to the raw length cap.
    """
    if mode is LatticeMode.SAW:
        limit = nmax
    else:
        limit = (nmax & ~1) - closing_cost(key, pos)
    if limit < 0:
        return None
    if len(ser) > limit + 1:
        ser = ser[:limit + 1]
        if not any(ser):
            return None
    return ser


# --------------------------------------------------------------------------
# public decoding into the shared signature type

def decode_key(key: bytes, rect: Rect, x: int, y: int, c0: int, c1: int,
               mode: LatticeMode) -> BoundarySignature:
    """Signature for a key sitting just after vertex ``(x, y)`` was added."""
    h = rect.h
    where: list[tuple[Segment, int, bool]] = [(Segment.RIGHT_CUT, r, True) for r in range(y)]
    where += [(Segment.CURRENT_ROW, col, False) for col in range(c1, x, -1)]
    if x + 1 > c1:
        where.append((Segment.RIGHT_CUT, y, True))
    else:
        where.append((Segment.CURRENT_ROW, x + 1, True))
    where += [(Segment.CURRENT_ROW, col, False) for col in range(x, c0 - 1, -1)]
    where += [(Segment.LEFT_CUT, r, True) for r in range(y + 1, h + 1)]
    slots = [CrossingSlot(seg, idx, key[1 + p], hz)
             for p, (seg, idx, hz) in enumerate(where) if key[1 + p]]
    return encode_signature(slots, Touch.from_bits(key[0] & 15), key[0] >> 4, mode)


# --------------------------------------------------------------------------
# sweeps

def run_plan(plan: SweepPlan, mode: LatticeMode, nmax: int, *, prune: bool = True,
             validate: bool = False, instrument: bool = False,
             budget: int | None = DEFAULT_STATE_BUDGET,
             stats: SweepStats | None = None) -> CountSeries:
    """Sweep ``plan.rect`` chunk by chunk; filter each stop cut at ``plan.q``."""
    rect = plan.rect
    rect.validate_for(mode)
    if mode is LatticeMode.SAW and (rect.w < 1 or rect.h < 1):
        raise ValueError("degenerate SAW boxes are handled in closed form, not by sweeping")
    stats = stats if stats is not None else SweepStats()
    result = [0] * (nmax + 1)
    if rect.min_length(mode) > nmax:
        return CountSeries(nmax)
    h = rect.h
    q = plan.q
    states: StateMap = {bytes(h + 2): [1]}
    last = len(plan.chunks) - 1

    for ci, (c0, c1) in enumerate(plan.chunks):
        m = c1 - c0 + 1
        filtered = q is not None and ci < last
        states = {k[:1] + bytes(m) + k[1:]: s for k, s in states.items()}
        max_slots = 0
        for y in range(h + 1):
            for x in range(c0, c1 + 1):
                states = vertex_update(states, x, y, rect, c1, mode, nmax, result)
                if filtered and x == c1:
                    # eager filter: crossings of the upcoming stop cut only grow
                    states = {k: s for k, s in states.items()
                              if y + 1 - k.count(0, 1, y + 2) <= q}
                if prune:
                    pos = staircase_positions(rect, x, y, c0, c1)
                    kept = {}
                    for k, s in states.items():
                        s = prune_state(k, s, pos, mode, nmax)
                        if s is not None:
                            kept[k] = s
                    states = kept
                n_states = len(states)
                stats.steps += 1
                if n_states > stats.peak_states:
                    stats.peak_states = n_states
                if budget is not None and n_states > budget:
                    raise StateBudgetExceeded(
                        f"{n_states} live states exceed the budget of {budget} "
                        f"(rect {rect.w}x{rect.h}, vertex {x},{y})")
                if instrument:
                    for k in states:
                        o = occupied(k)
                        if o > max_slots:
                            max_slots = o
                if validate:
                    _validate(states, rect, x, y, c0, c1, mode)
        # verticals below the bottom row left the rectangle: always empty
        trimmed = {}
        for k, s in states.items():
            if any(k[-m:]):
                raise SweepInvariantError("occupied edge below the bottom row")
            trimmed[k[:-m]] = s
        states = trimmed
        if filtered:
            states = cut_filter(states, q)
        stats.chunk_slots.append((m, max_slots))

    if validate and mode is LatticeMode.SAP and any(result[n] for n in range(1, nmax + 1, 2)):
        raise SweepInvariantError("odd-length polygon completed")
    return CountSeries(nmax, result)


def _validate(states: StateMap, rect: Rect, x: int, y: int, c0: int, c1: int,
              mode: LatticeMode) -> None:
    for key, ser in states.items():
        if not any(ser):
            raise SweepInvariantError("zero series stored in state map")
        try:
            check_labels(key[1:], mode, key[0] >> 4)
            decode_key(key, rect, x, y, c0, c1, mode)
        except SignatureError as exc:
            raise SweepInvariantError(f"bad state {list(key)}: {exc}") from exc


def full_sweep(rect: Rect, mode: LatticeMode, nmax: int, **kwargs) -> CountSeries:
    """Inscribed counts via the column-by-column sweep with no filtering."""
    return run_plan(full_plan(rect), mode, nmax, **kwargs)


def skip_sweep(plan: SweepPlan, mode: LatticeMode, nmax: int, **kwargs) -> CountSeries:
    """N_K for ``plan``: inscribed objects with at most ``plan.q`` crossings on every stop cut."""
    if plan.q is None:
        raise ValueError("skip sweeps need a filter threshold q")
    return run_plan(plan, mode, nmax, **kwargs)
